"""Correlation tables and the CHSH expression."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadTable, NullSettings
from .exact import QSqrt2
from .wiring import context

FLOAT_TOL = 1e-12


@dataclass(frozen=True)
class CorrelationTable:
    """P(A,B|a,b) keyed by (a_id, b_id, A, B) with A, B in {+1, -1}."""

    table: dict
    a_ids: tuple
    b_ids: tuple
    approx: bool = False


def _is_negative(x) -> bool:
    if isinstance(x, QSqrt2):
        return x.sign() < 0
    return x < 0


def check_table_normalized(tab) -> None:
    if len(tab.a_ids) != 2 or len(tab.b_ids) != 2:
        raise BadTable("a table needs exactly two settings per side")
    for x in tab.a_ids:
        for y in tab.b_ids:
            col = []
            for A in (1, -1):
                for B in (1, -1):
                    if (x, y, A, B) not in tab.table:
                        raise BadTable(f"missing entry a={x} b={y} A={A} B={B}")
                    col.append(tab.table[(x, y, A, B)])
            if any(_is_negative(v) for v in col):
                raise BadTable(f"negative entry in column a={x} b={y}")
            total = sum(col[1:], col[0])
            if tab.approx:
                if abs(float(total) - 1) > FLOAT_TOL:
                    raise BadTable(f"column a={x} b={y} sums to {float(total)}")
            elif total != 1:
                raise BadTable(f"column a={x} b={y} sums to {total}, not 1")


def correlation(tab, x, y):
    """E(x,y) = sum of A*B*P(A,B|x,y)."""
    out = 0
    for A in (1, -1):
        for B in (1, -1):
            out = out + A * B * tab.table[(x, y, A, B)]
    return out


def chsh_value(tab):
    """S = E(a,b) + E(a,b') + E(a',b) - E(a',b'), exact unless the table is approximate."""
    check_table_normalized(tab)
    (a, a2), (b, b2) = tab.a_ids, tab.b_ids
    s = correlation(tab, a, b) + correlation(tab, a, b2) + correlation(tab, a2, b) - correlation(tab, a2, b2)
    return s.simplify() if isinstance(s, QSqrt2) else s


def deterministic_table(f: dict, g: dict) -> CorrelationTable:
    """Table of the local strategy A = f[a], B = g[b]."""
    table = {}
    for x, y in itertools.product(("a", "a'"), ("b", "b'")):
        for A in (1, -1):
            for B in (1, -1):
                table[(x, y, A, B)] = Fraction(int(f[x] == A and g[y] == B))
    return CorrelationTable(table, ("a", "a'"), ("b", "b'"))


def local_strategy_values() -> list:
    """CHSH value of each of the 16 deterministic local strategies."""
    out = []
    for fa, fa2, gb, gb2 in itertools.product((1, -1), repeat=4):
        tab = deterministic_table({"a": fa, "a'": fa2}, {"b": gb, "b'": gb2})
        out.append(chsh_value(tab))
    return out


def chsh_local_bound() -> Fraction:
    """Maximum |S| over local deterministic strategies; mixtures cannot exceed it."""
    return max(abs(v) for v in local_strategy_values())


def model_to_table(model, wiring, external_settings=False) -> CorrelationTable:
    """P(A,B|a,b) of a spacetime model under its wiring."""
    if model.is_predictions_only:
        law = model.law
        return CorrelationTable(law.table, law.a_ids, law.b_ids, law.approx)
    ctx = context(model, wiring, external_settings)
    space = ctx.space
    labs = [ctx.labeling(k).labels for k in ("a", "b", "A", "B")]
    counts: dict = {}
    for i, w in enumerate(space.weights):
        if w:
            key = tuple(col[i] for col in labs)
            counts[key] = counts.get(key, 0) + w
    xs, ys = ctx.setting_labels("a"), ctx.setting_labels("b")
    table = {}
    for x in xs:
        for y in ys:
            col = {k: v for k, v in counts.items() if k[:2] == (x, y)}
            total = sum(col.values())
            if total == 0:
                raise NullSettings(f"settings pair ({x},{y}) has zero weight")
            for A in ctx.outcome_labels("A"):
                for B in ctx.outcome_labels("B"):
                    table[(x, y, int(A), int(B))] = Fraction(col.get((x, y, A, B), 0), total)
    return CorrelationTable(table, xs, ys)


def lambda_tables(model, wiring, spec, external_settings=False) -> dict:
    """One correlation table per realized value of λ, i.e. P(A,B|a,b,λ)."""
    ctx = context(model, wiring, external_settings)
    lam = ctx.lam(spec)
    labs = [ctx.labeling(k).labels for k in ("a", "b", "A", "B")]
    counts: dict = {}
    for i, w in enumerate(ctx.space.weights):
        if w and lam.labels[i] is not None:
            key = (lam.labels[i],) + tuple(col[i] for col in labs)
            counts[key] = counts.get(key, 0) + w
    xs, ys = ctx.setting_labels("a"), ctx.setting_labels("b")
    out = {}
    for value in lam.values():
        table = {}
        for x in xs:
            for y in ys:
                col = {k[3:]: v for k, v in counts.items() if k[:3] == (value, x, y)}
                total = sum(col.values())
                if total == 0:
                    raise NullSettings(f"settings pair ({x},{y}) never occurs with lambda {value}")
                for A in ctx.outcome_labels("A"):
                    for B in ctx.outcome_labels("B"):
                        table[(x, y, int(A), int(B))] = Fraction(col.get((A, B), 0), total)
        out[value] = CorrelationTable(table, xs, ys)
    return out
