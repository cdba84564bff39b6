"""Label-level counting engines shared by the Bell-condition checkers.

Every solution carries a tuple of labels (hidden state, settings, outcomes
or arbitrary region states).  Conditional probabilities become ratios of
integer masses, accumulated once per check by dict grouping.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from .errors import NullCondition
from .wiring import Labeling, joint  # noqa: F401  (re-exported)


def masses(space, *columns) -> dict:
    """Mass of each realized label tuple; solutions with a None label are ignored."""
    out: dict = defaultdict(int)
    for i, w in enumerate(space.weights):
        if not w:
            continue
        key = tuple(col[i] for col in columns)
        if None in key:
            continue
        out[key] += w
    return dict(out)


def marginal(n: dict, keep: tuple) -> dict:
    out: dict = defaultdict(int)
    for key, w in n.items():
        out[tuple(key[k] for k in keep)] += w
    return dict(out)


def ratio(num: int, den: int) -> Fraction:
    if den == 0:
        raise NullCondition("conditioning event has zero weight")
    return Fraction(num, den)


def fmt(x) -> str:
    from .exact import format_number

    return format_number(x)


def conditional_independence(space, target: Labeling, cond: Labeling, other: Labeling, audit=None):
    """Check P(target | cond, other) = P(target | cond) for all realized labels.

    Returns (checked, skipped, witness_or_None).  Pairs (cond, other) whose
    joint weight is zero are skipped.  ``audit`` collects every distinct
    conditional probability evaluated.
    """
    n = masses(space, cond.labels, other.labels, target.labels)
    n_go = marginal(n, (0, 1))
    n_gi = marginal(n, (0, 2))
    n_g = marginal(n, (0,))
    g_vals = sorted({k[0] for k in n_g}, key=_sort_key)
    o_vals = sorted({k[1] for k in n_go}, key=_sort_key)
    i_vals = sorted({k[2] for k in n}, key=_sort_key)
    checked = 0
    skipped = len(g_vals) * len(o_vals) - len(n_go)
    for g in g_vals:
        ng = n_g[(g,)]
        targets_in_g = [i for i in i_vals if (g, i) in n_gi]
        for o in o_vals:
            ngo = n_go.get((g, o))
            if ngo is None:
                continue
            zeros = len(i_vals) - len(targets_in_g)
            checked += len(i_vals)
            if zeros and audit is not None:
                audit.add(Fraction(0))
            for i in targets_in_g:
                lhs = Fraction(n.get((g, o, i), 0), ngo)
                rhs = Fraction(n_gi[(g, i)], ng)
                if audit is not None:
                    audit.add(lhs)
                    audit.add(rhs)
                if lhs != rhs:
                    witness = {
                        "lhs": fmt(lhs),
                        "rhs": fmt(rhs),
                        "lhs_terms": [
                            {"target": target.events(i), "given": cond.events(g) + other.events(o)}
                        ],
                        "rhs_terms": [{"target": target.events(i), "given": cond.events(g)}],
                    }
                    return checked, skipped, witness
    return checked, skipped, None


def factorizability(space, lam, a, b, A, B, outcomes_A, outcomes_B, events=True):
    """P(A,B|a,b,λ) = P(A|a,λ) P(B|b,λ) over realized λ and settings pairs."""
    n = masses(space, lam.labels, a.labels, b.labels, A.labels, B.labels)
    n_lab = marginal(n, (0, 1, 2))
    n_la = marginal(n, (0, 1))
    n_lb = marginal(n, (0, 2))
    n_laA = marginal(n, (0, 1, 3))
    n_lbB = marginal(n, (0, 2, 4))
    lams = sorted({k[0] for k in n_la}, key=_sort_key)
    xs = sorted({k[1] for k in n_la})
    ys = sorted({k[1] for k in n_lb})
    checked = skipped = 0
    for l in lams:
        for x in xs:
            for y in ys:
                N = n_lab.get((l, x, y), 0)
                if N == 0:
                    skipped += 1
                    continue
                for X in outcomes_A:
                    for Y in outcomes_B:
                        checked += 1
                        lhs = Fraction(n.get((l, x, y, X, Y), 0), N)
                        rhs = Fraction(n_laA.get((l, x, X), 0), n_la[(l, x)]) * Fraction(
                            n_lbB.get((l, y, Y), 0), n_lb[(l, y)]
                        )
                        if lhs != rhs:
                            w = {"lhs": fmt(lhs), "rhs": fmt(rhs)}
                            if events:
                                eA, eB, ea, eb, el = (
                                    A.events(X), B.events(Y), a.events(x), b.events(y), lam.events(l)
                                )
                                w["instance"] = {"A": X, "B": Y, "a": x, "b": y}
                                w["lhs_terms"] = [{"target": eA + eB, "given": ea + eb + el}]
                                w["rhs_terms"] = [
                                    {"target": eA, "given": ea + el},
                                    {"target": eB, "given": eb + el},
                                ]
                            return checked, skipped, w
    return checked, skipped, None


def settings_independence(space, lam, a, b, events=True):
    """P(λ|a,b) = P(λ) for every realized λ and every settings pair of nonzero weight."""
    n = masses(space, lam.labels, a.labels, b.labels)
    n_ab = marginal(n, (1, 2))
    n_l = marginal(n, (0,))
    total = sum(n.values())
    pairs = sorted(n_ab)
    checked = 0
    for l in sorted((k[0] for k in n_l), key=_sort_key):
        p_l = Fraction(n_l[(l,)], total)
        by_pair = {}
        failing = []
        for pair in pairs:
            checked += 1
            p = Fraction(n.get((l,) + pair, 0), n_ab[pair])
            by_pair[",".join(pair)] = fmt(p)
            if p != p_l:
                failing.append((p == 0, pair, p))
        if failing:
            failing.sort(key=lambda f: (f[0], f[1]))
            _, pair, p = failing[0]
            w = {"lhs": fmt(p), "rhs": fmt(p_l), "pair": list(pair), "by_pair": by_pair}
            if events:
                w["lhs_terms"] = [
                    {"target": lam.events(l), "given": a.events(pair[0]) + b.events(pair[1])}
                ]
                w["rhs_terms"] = [{"target": lam.events(l), "given": []}]
            return checked, len(_all_pairs(a, b)) - len(pairs), w
    return checked, len(_all_pairs(a, b)) - len(pairs), None


def _all_pairs(a, b):
    return [(x, y) for x in a.values() for y in b.values()]


def _sort_key(v):
    if isinstance(v, tuple):
        return (1, tuple(str(x) for x in v))
    return (0, str(v))
