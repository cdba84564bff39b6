"""Checkers for the named conditions of Bell-type arguments.

Each checker returns a ``Verdict``.  Probabilities are conditioned on the
Bell experiment taking place whenever a wiring is attached.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import engine
from .core import HVTModel, RegionBounds, enumerate_solutions
from .engine import fmt, marginal, masses, ratio
from .errors import NullCondition, SearchBudget, UnsupportedLawKind
from .probability import CoarseEvent, Partition, ProbSpace, cond_prob
from .spacetime import (
    Region,
    admissible_slice_pairs,
    past_overlap_top,
    spacelike_separated,
    thick_slice,
)
from .verdict import VACUOUS, Verdict
from .wiring import (
    AtPreparation,
    BellWiring,
    CoarseFamily,
    ThickSlices,
    TimeFamily,
    complete_labeling,
    context,
    joint,
    labeling_from_fn,
    partition_labeling,
)

DEFAULT_LC_BOUNDS = RegionBounds(1, 1)


def _vacuous(reason: str, **details) -> Verdict:
    return Verdict(VACUOUS, None, 0, 0, {"reason": reason, **details})


def _ctx(model, wiring, external_settings=False):
    return context(model, wiring, external_settings)


def _spec_details(spec, ctx) -> dict:
    out = {"lambda": spec.descriptor, "lambda_region": ctx.lam(spec).region.describe()}
    if ctx.external_settings:
        out["external_settings"] = True
    return out


# -- Factorizability and Settings Independence -------------------------------


def check_factorizability(model, wiring, spec=ThickSlices(), external_settings=False) -> Verdict:
    if model.is_predictions_only:
        raise UnsupportedLawKind("factorizability needs a spacetime model")
    ctx = _ctx(model, wiring, external_settings)
    lam = ctx.lam(spec)
    L = ctx.labeling
    checked, skipped, w = engine.factorizability(
        ctx.space, lam, L("a"), L("b"), L("A"), L("B"), ctx.outcome_labels("A"), ctx.outcome_labels("B")
    )
    return Verdict.from_counts(w, checked, skipped, **_spec_details(spec, ctx))


def check_settings_independence(model, wiring, spec=ThickSlices(), external_settings=False) -> Verdict:
    if model.is_predictions_only:
        raise UnsupportedLawKind("settings independence needs a spacetime model")
    ctx = _ctx(model, wiring, external_settings)
    lam = ctx.lam(spec)
    checked, skipped, w = engine.settings_independence(ctx.space, lam, ctx.labeling("a"), ctx.labeling("b"))
    return Verdict.from_counts(w, checked, skipped, **_spec_details(spec, ctx))


def check_settings_compatibility(model, wiring, external_settings=False) -> Verdict:
    """Every realized thick-slice state co-occurs with every settings pair."""
    if model.is_predictions_only:
        return _vacuous("predictions-only model has no spacetime states")
    ctx = _ctx(model, wiring, external_settings)
    spec = ThickSlices()
    lam = ctx.lam(spec)
    n = masses(ctx.space, lam.labels, ctx.labeling("a").labels, ctx.labeling("b").labels)
    all_pairs = [(x, y) for x in ctx.setting_labels("a") for y in ctx.setting_labels("b")]
    per_lambda = {}
    for l, x, y in n:
        per_lambda.setdefault(l, set()).add((x, y))
    rows, witness = [], None
    for l in sorted(per_lambda):
        pairs = sorted(per_lambda[l])
        rows.append({"lambda": list(l), "pairs": [",".join(p) for p in pairs]})
        if witness is None and len(pairs) < len(all_pairs):
            witness = {
                "lambda": lam.event(l),
                "compatible_pairs": [",".join(p) for p in pairs],
                "missing_pairs": [",".join(p) for p in all_pairs if p not in per_lambda[l]],
            }
    counts = sorted({len(r["pairs"]) for r in rows})
    return Verdict.from_counts(
        witness,
        len(rows),
        0,
        pairs_per_lambda=counts,
        compatible=rows,
        **_spec_details(spec, ctx),
    )


# -- Local Causality ----------------------------------------------------------


def _lc_space(model, wiring, external_settings=False):
    if wiring is None:
        sols = enumerate_solutions(model)
        return ProbSpace(sols, model.lattice), None
    ctx = _ctx(model, wiring, external_settings)
    return ctx.space, ctx


def _schedule(lattice, bounds: RegionBounds, wiring) -> list:
    regions = list(bounds.regions(lattice))
    if wiring is not None:
        w = wiring
        for r in (w.R_a, w.R_b, w.R_A, w.R_B, w.R_a | w.R_A, w.R_b | w.R_B):
            if r not in regions:
                regions.append(r)
    return regions


def _audit_details(audit: set) -> dict:
    vals = sorted(audit)
    return {
        "distinct_cond_probs": [fmt(v) for v in vals],
        "zero_one_only": all(v in (0, 1) for v in vals),
    }


def check_local_causality_fine(
    model, wiring: Optional[BellWiring] = None, bounds: RegionBounds = DEFAULT_LC_BOUNDS
) -> Verdict:
    """P(λ_R | λ_C, λ_R') = P(λ_R | λ_C) over the region schedule.

    The schedule holds every rectangle within ``bounds`` plus the wiring's
    regions; R' ranges over scheduled regions spacelike to R, and (t, t')
    over slices above the overlap of the two past cones.
    """
    if model.is_predictions_only:
        return _vacuous("predictions-only model has no spacetime states")
    space, _ = _lc_space(model, wiring)
    lattice = model.lattice
    regions = _schedule(lattice, bounds, wiring)
    labels = {r: complete_labeling(space, "lambda_R", r) for r in regions}
    audit: set = set()
    checked = skipped = 0
    for R in regions:
        for R2 in regions:
            if R2 == R or not spacelike_separated(R, R2):
                continue
            for t, tp in admissible_slice_pairs(R, R2, lattice):
                C = complete_labeling(space, "lambda_C", thick_slice(R, t, tp, lattice))
                c, s, w = engine.conditional_independence(space, labels[R], C, labels[R2], audit)
                checked += c
                skipped += s
                if w is not None:
                    w["instance"] = {"R": R.describe(), "R_prime": R2.describe(), "t": t, "tprime": tp}
                    return Verdict.from_counts(w, checked, skipped, **_audit_details(audit))
    return Verdict.from_counts(
        None, checked, skipped, bounds={"max_dx": bounds.max_dx, "max_dt": bounds.max_dt},
        regions=len(regions), **_audit_details(audit)
    )


def wiring_families(ctx, t=None, t_prime=None) -> list:
    """Coarse families that Bell's experiment needs, as (R-labelings, R'-labelings) groups."""
    L = ctx.labeling
    ca, cb = ctx.thick(t, t_prime)
    a, b, A, B = L("a"), L("b"), L("A"), L("B")
    groups = [
        ([a], [b]),
        ([b], [a]),
        ([A], [B]),
        ([B], [A]),
        ([joint("A,a", A, a), a], [joint("B,b,lambda_CB", B, b, cb), joint("b,lambda_CB", b, cb), cb]),
        ([joint("B,b", B, b), b], [joint("A,a,lambda_CA", A, a, ca), joint("a,lambda_CA", a, ca), ca]),
    ]
    return groups


def generic_families(space, model, bounds: RegionBounds = DEFAULT_LC_BOUNDS) -> list:
    """Two-cell families "how many sites show the first symbol" on scheduled regions."""
    first = model.alphabet.symbols[0]
    labs = [
        labeling_from_fn(space, f"count-{first}", r, lambda d, vals: sum(v == first for v in vals))
        for r in _schedule(model.lattice, bounds, None)
    ]
    return [([a], [b]) for a in labs for b in labs if a.region != b.region]


def check_local_causality_coarse(
    model,
    wiring: Optional[BellWiring] = None,
    families: tuple = (),
    external_settings=False,
) -> Verdict:
    """Coarse-grained Local Causality over definable families.

    ``families`` adds (Partition over R, Partition over R') pairs to the
    families induced by the wiring (settings, outcomes and their unions with
    the far thick slice).  The conditioning thick slice stays complete.
    """
    if model.is_predictions_only:
        return _vacuous("predictions-only model has no spacetime states")
    space, ctx = _lc_space(model, wiring, external_settings)
    lattice = model.lattice
    groups = list(wiring_families(ctx)) if ctx is not None else generic_families(space, model)
    for p1, p2 in families:
        groups.append(([partition_labeling(space, "family", p1)], [partition_labeling(space, "family'", p2)]))
    audit: set = set()
    checked = skipped = 0
    for lefts, rights in groups:
        R, R2 = lefts[0].region, rights[0].region
        if not spacelike_separated(R, R2):
            continue
        for t, tp in admissible_slice_pairs(R, R2, lattice):
            C = complete_labeling(space, "lambda_C", thick_slice(R, t, tp, lattice))
            for target in lefts:
                for other in rights:
                    c, s, w = engine.conditional_independence(space, target, C, other, audit)
                    checked += c
                    skipped += s
                    if w is not None:
                        w["instance"] = {
                            "R": target.region.describe(),
                            "R_prime": other.region.describe(),
                            "family": target.name,
                            "family_prime": other.name,
                            "t": t,
                            "tprime": tp,
                        }
                        return Verdict.from_counts(w, checked, skipped, **_audit_details(audit))
    return Verdict.from_counts(None, checked, skipped, families=len(groups), **_audit_details(audit))


# -- Step-wise derivation --------------------------------------------------------

STEP_NAMES = (
    "exp-1", "exp-4", "exp-5", "exp-6",
    "L1=L2", "L2=L3", "L3=L4", "L4=L5", "L5=L6", "L6=L7", "L7=L8",
    "factorizability",
)


@dataclass
class StepReport:
    steps: list = field(default_factory=list)  # [(name, Verdict)]

    @property
    def first_failure(self) -> Optional[str]:
        return next((n for n, v in self.steps if v.failed), None)

    @property
    def all_pass(self) -> bool:
        return all(v.passed for _, v in self.steps)

    def verdict(self) -> Verdict:
        fail = self.first_failure
        witness = None
        if fail is not None:
            witness = {"step": fail, **dict(self.steps)[fail].witness}
        checked = sum(v.checked for _, v in self.steps)
        skipped = sum(v.skipped for _, v in self.steps)
        v = Verdict.from_counts(witness, checked, skipped, steps={n: v.status for n, v in self.steps})
        if fail is None and any(s.status == VACUOUS for _, s in self.steps) and checked == 0:
            v.status = VACUOUS
        return v


def derive_factorizability_from_lc(model, wiring, external_settings=False) -> StepReport:
    """Evaluate every step of the derivation of thick-slice Factorizability.

    Quantities (lc, lb are the two thick-slice states):
      exp-1  P(A,a|B,b,lb,la) = P(A,a|la)
      exp-4  P(a|b,la,lb) = P(a|la)
      exp-5  P(A,a|la) = P(A,a|la,lb)
      exp-6  P(a|la) = P(a|la,lb)
    followed by the eight-line chain turning P(A,B|a,b,λ) into the product.
    """
    if model.is_predictions_only:
        raise UnsupportedLawKind("the derivation needs spacetime states")
    ctx = _ctx(model, wiring, external_settings)
    L = ctx.labeling
    ca, cb = ctx.thick()
    union = ctx.lam(ThickSlices())
    a, b, A, B = L("a"), L("b"), L("A"), L("B")
    # key layout: (la, lb, a, b, A, B, union)
    n = masses(ctx.space, ca.labels, cb.labels, a.labels, b.labels, A.labels, B.labels, union.labels)
    D = ctx.space.denominator

    def m(**fixed):
        keep = tuple(sorted(_POS[k] for k in fixed))
        key = tuple(fixed[k] for k in sorted(fixed, key=lambda k: _POS[k]))
        table = marg.get(keep)
        if table is None:
            table = marg[keep] = marginal(n, keep)
        return table.get(key, 0)

    marg: dict = {}
    combos = sorted({k[:2] for k in n}, key=engine._sort_key)
    xs, ys = ctx.setting_labels("a"), ctx.setting_labels("b")
    Xs, Ys = ctx.outcome_labels("A"), ctx.outcome_labels("B")
    unions = {k[:2]: k[6] for k in n}

    def P(num: dict, den: dict) -> Fraction:
        return ratio(m(**num), m(**den))

    def joint_p(**fixed) -> Fraction:
        return Fraction(m(**fixed), D)

    def lines(la, lb, x, y, X, Y):
        u = unions[(la, lb)]
        get = {
            "L1": lambda: P(dict(u=u, a=x, b=y, A=X, B=Y), dict(u=u, a=x, b=y)),
            "L2": lambda: P(dict(la=la, lb=lb, a=x, b=y, A=X, B=Y), dict(la=la, lb=lb, a=x, b=y)),
            "L3": lambda: _div(joint_p(la=la, lb=lb, a=x, b=y, A=X, B=Y), joint_p(la=la, lb=lb, a=x, b=y)),
            "L4": lambda: _div(
                P(dict(la=la, lb=lb, a=x, b=y, A=X, B=Y), dict(la=la, lb=lb, b=y, B=Y))
                * joint_p(la=la, lb=lb, b=y, B=Y),
                P(dict(la=la, lb=lb, a=x, b=y), dict(la=la, lb=lb, b=y)) * joint_p(la=la, lb=lb, b=y),
            ),
            "L5": lambda: _div(
                P(dict(la=la, a=x, A=X), dict(la=la)) * joint_p(la=la, lb=lb, b=y, B=Y),
                P(dict(la=la, a=x), dict(la=la)) * joint_p(la=la, lb=lb, b=y),
            ),
            "L6": lambda: _div(
                P(dict(la=la, lb=lb, a=x, A=X), dict(la=la, lb=lb)) * joint_p(la=la, lb=lb, b=y, B=Y),
                P(dict(la=la, lb=lb, a=x), dict(la=la, lb=lb)) * joint_p(la=la, lb=lb, b=y),
            ),
            "L7": lambda: P(dict(la=la, lb=lb, a=x, A=X), dict(la=la, lb=lb, a=x))
            * P(dict(la=la, lb=lb, b=y, B=Y), dict(la=la, lb=lb, b=y)),
            "L8": lambda: P(dict(u=u, a=x, A=X), dict(u=u, a=x)) * P(dict(u=u, b=y, B=Y), dict(u=u, b=y)),
        }
        return get

    def exps(la, lb, x, y, X, Y):
        return {
            "exp-1": (
                lambda: P(dict(la=la, lb=lb, a=x, b=y, A=X, B=Y), dict(la=la, lb=lb, b=y, B=Y)),
                lambda: P(dict(la=la, a=x, A=X), dict(la=la)),
            ),
            "exp-4": (
                lambda: P(dict(la=la, lb=lb, a=x, b=y), dict(la=la, lb=lb, b=y)),
                lambda: P(dict(la=la, a=x), dict(la=la)),
            ),
            "exp-5": (
                lambda: P(dict(la=la, a=x, A=X), dict(la=la)),
                lambda: P(dict(la=la, lb=lb, a=x, A=X), dict(la=la, lb=lb)),
            ),
            "exp-6": (
                lambda: P(dict(la=la, a=x), dict(la=la)),
                lambda: P(dict(la=la, lb=lb, a=x), dict(la=la, lb=lb)),
            ),
        }

    results = {name: [0, 0, None] for name in STEP_NAMES}

    def record(name, lhs_fn, rhs_fn, inst):
        r = results[name]
        try:
            lhs, rhs = lhs_fn(), rhs_fn()
        except NullCondition:
            r[1] += 1
            return
        r[0] += 1
        if lhs != rhs and r[2] is None:
            r[2] = {"lhs": fmt(lhs), "rhs": fmt(rhs), "instance": inst}

    for la, lb in combos:
        for x in xs:
            for y in ys:
                for X in Xs:
                    for Y in Ys:
                        inst = {
                            "lambda_CA": list(la), "lambda_CB": list(lb),
                            "a": x, "b": y, "A": X, "B": Y,
                        }
                        for name, (l, r) in exps(la, lb, x, y, X, Y).items():
                            record(name, l, r, inst)
                        get = lines(la, lb, x, y, X, Y)
                        for k in range(1, 8):
                            record(f"L{k}=L{k + 1}", get[f"L{k}"], get[f"L{k + 1}"], inst)
                        record("factorizability", get["L1"], get["L8"], inst)
    report = StepReport()
    for name in STEP_NAMES:
        c, s, w = results[name]
        report.steps.append((name, Verdict.from_counts(w, c, s)))
    return report


_POS = {"la": 0, "lb": 1, "a": 2, "b": 3, "A": 4, "B": 5, "u": 6}


def _div(x: Fraction, y: Fraction) -> Fraction:
    if y == 0:
        raise NullCondition("zero denominator")
    return x / y


# -- sufficiency and coarse-graining search -------------------------------------


def check_sufficiency(model, wiring, spec=ThickSlices(), external_settings=False) -> Verdict:
    """P(A|a,b,B,λ̄) = P(A|a,λ̄) and P(B|a,b,A,λ̄) = P(B|b,λ̄)."""
    if not hasattr(spec, "descriptor"):
        spec = CoarseFamily(spec)
    ctx = _ctx(model, wiring, external_settings)
    lam = ctx.lam(spec)
    L = ctx.labeling
    n = masses(ctx.space, lam.labels, L("a").labels, L("b").labels, L("A").labels, L("B").labels)
    checked = skipped = 0
    sides = (
        ("A", 1, 3, 4, ctx.outcome_labels("A")),
        ("B", 2, 4, 3, ctx.outcome_labels("B")),
    )
    lams = sorted({k[0] for k in n}, key=engine._sort_key)
    for side, s_pos, o_pos, far_pos, outs in sides:
        full = marginal(n, (0, 1, 2, far_pos))
        full_o = marginal(n, (0, 1, 2, far_pos, o_pos))
        near = marginal(n, (0, s_pos))
        near_o = marginal(n, (0, s_pos, o_pos))
        for l in lams:
            for x in ctx.setting_labels("a"):
                for y in ctx.setting_labels("b"):
                    for far in (ctx.outcome_labels("B") if side == "A" else ctx.outcome_labels("A")):
                        den = full.get((l, x, y, far), 0)
                        if den == 0:
                            skipped += 1
                            continue
                        s_val = x if side == "A" else y
                        for o in outs:
                            checked += 1
                            lhs = Fraction(full_o.get((l, x, y, far, o), 0), den)
                            rhs = Fraction(near_o.get((l, s_val, o), 0), near[(l, s_val)])
                            if lhs != rhs:
                                w = {
                                    "side": side, "lhs": fmt(lhs), "rhs": fmt(rhs),
                                    "instance": {"lambda": lam.event(l), "a": x, "b": y,
                                                 "far_outcome": far, "outcome": o},
                                }
                                return Verdict.from_counts(w, checked, skipped, **_spec_details(spec, ctx))
    return Verdict.from_counts(None, checked, skipped, **_spec_details(spec, ctx))


def set_partitions(items: list, k: int):
    """Partitions of ``items`` into exactly ``k`` nonempty blocks, deterministically ordered."""
    n = len(items)
    if k <= 0 or k > n:
        return
    if k == 1:
        yield [list(items)]
        return
    if k == n:
        yield [[x] for x in items]
        return
    first, rest = items[0], items[1:]
    # first in a block of its own
    for p in set_partitions(rest, k - 1):
        yield [[first]] + p
    # first joins one of the k blocks of a partition of the rest
    for p in set_partitions(rest, k):
        for i in range(k):
            yield [blk if j != i else [first] + blk for j, blk in enumerate(p)]


def search_coarse_graining(
    model, wiring, max_cells: Optional[int] = None, cap: int = 8, spec=ThickSlices(), stats=None
) -> Optional[Partition]:
    """Coarsest-first exhaustive search for a family passing both conditions.

    Every partition of the realized hidden states is a candidate, not only
    predicate-definable ones; the returned partition is flagged accordingly.
    """
    ctx = _ctx(model, wiring)
    lam = ctx.lam(spec)
    states = lam.values()
    if stats is not None:
        stats["states"] = len(states)
    if len(states) > cap:
        raise SearchBudget(f"{len(states)} realized hidden states exceed the search cap {cap}")
    L = ctx.labeling
    a, b, A, B = L("a"), L("b"), L("A"), L("B")
    examined = 0
    top = len(states) if max_cells is None else min(max_cells, len(states))
    for k in range(1, top + 1):
        for blocks in set_partitions(states, k):
            examined += 1
            owner = {s: i for i, blk in enumerate(blocks) for s in blk}
            labels = [None if l is None else owner[l] for l in lam.labels]
            coarse = type(lam)(lam.name, lam.region, labels, {i: blk for i, blk in enumerate(blocks)})
            _, _, wf = engine.factorizability(
                ctx.space, coarse, a, b, A, B, ctx.outcome_labels("A"), ctx.outcome_labels("B"), events=False
            )
            if wf is not None:
                continue
            _, _, ws = engine.settings_independence(ctx.space, coarse, a, b, events=False)
            if ws is not None:
                continue
            if stats is not None:
                stats["examined"] = examined
            cells = [CoarseEvent.states(lam.region, blk, f"cell{i}") for i, blk in enumerate(blocks)]
            return Partition(cells, ctx.space, definable=False)
    if stats is not None:
        stats["examined"] = examined
    return None


# -- the system-state pipeline ---------------------------------------------------


def _family_labels(ctx, family: TimeFamily, tau: int):
    region = family.region(tau)
    return labeling_from_fn(ctx.space, f"{family.name}@{tau}", region, lambda d, _v: family.label(d))


def _family_times(wiring, family):
    times = range(wiring.t_P, wiring.t_M + 1)
    for tau in times:
        family.region(tau)
    return times


def check_A1(model, wiring, family: TimeFamily) -> Verdict:
    """The family's cell is constant from preparation to measurement."""
    ctx = _ctx(model, wiring)
    times = _family_times(wiring, family)
    labs = {tau: _family_labels(ctx, family, tau) for tau in times}
    checked = 0
    for i, w in enumerate(ctx.space.weights):
        if not w:
            continue
        checked += 1
        first = labs[times[0]].labels[i]
        for tau in times[1:]:
            cur = labs[tau].labels[i]
            if cur != first:
                witness = {
                    "solution": i,
                    "tau": tau,
                    "label_at_tP": str(first),
                    "label_at_tau": str(cur),
                }
                return Verdict.from_counts(witness, checked, 0, family=family.name)
    return Verdict.from_counts(None, checked, 0, family=family.name)


def check_A2(model, wiring, family: TimeFamily) -> Verdict:
    """The family at t and at preparation carries everything the thick slices
    say about outcome probabilities."""
    ctx = _ctx(model, wiring)
    _family_times(wiring, family)
    full = ctx.lam(ThickSlices())
    ft = _family_labels(ctx, family, wiring.t)
    fp = _family_labels(ctx, family, wiring.t_P)
    L = ctx.labeling
    cols = (full.labels, ft.labels, fp.labels, L("a").labels, L("b").labels, L("A").labels, L("B").labels)
    n = masses(ctx.space, *cols)
    triples = sorted({k[:3] for k in n}, key=lambda k: tuple(map(str, k)))
    checked = skipped = 0
    marg: dict = {}

    def cp(lam_pos, lam_val, target: dict, given: dict):
        keys_t = {lam_pos: lam_val, **target, **given}
        keys_g = {lam_pos: lam_val, **given}
        return ratio(_m(n, marg, keys_t), _m(n, marg, keys_g))

    identities = []
    for x in ctx.setting_labels("a"):
        for y in ctx.setting_labels("b"):
            for X in ctx.outcome_labels("A"):
                for Y in ctx.outcome_labels("B"):
                    identities.append(("plus-AB", {5: X, 6: Y}, {3: x, 4: y}))
    for x in ctx.setting_labels("a"):
        for X in ctx.outcome_labels("A"):
            identities.append(("plus-A", {5: X}, {3: x}))
    for y in ctx.setting_labels("b"):
        for Y in ctx.outcome_labels("B"):
            identities.append(("plus-B", {6: Y}, {4: y}))
    for lc, lt, lp in triples:
        for name, target, given in identities:
            try:
                vals = [cp(0, lc, target, given), cp(1, lt, target, given), cp(2, lp, target, given)]
            except NullCondition:
                skipped += 1
                continue
            checked += 1
            if len(set(vals)) > 1:
                witness = {
                    "identity": name,
                    "values": [fmt(v) for v in vals],
                    "lambda_C": full.event(lc),
                    "tilde_t": str(lt),
                    "tilde_tP": str(lp),
                    "given": {str(k): v for k, v in given.items()},
                    "target": {str(k): v for k, v in target.items()},
                }
                return Verdict.from_counts(witness, checked, skipped, family=family.name)
    return Verdict.from_counts(None, checked, skipped, family=family.name)


def _m(n, marg, fixed: dict) -> int:
    keep = tuple(sorted(fixed))
    table = marg.get(keep)
    if table is None:
        table = marg[keep] = marginal(n, keep)
    return table.get(tuple(fixed[k] for k in keep), 0)


def check_factorizability_tilde(model, wiring, family: TimeFamily) -> Verdict:
    ctx = _ctx(model, wiring)
    _family_times(wiring, family)
    lam = _family_labels(ctx, family, wiring.t_P)
    L = ctx.labeling
    c, s, w = engine.factorizability(
        ctx.space, lam, L("a"), L("b"), L("A"), L("B"), ctx.outcome_labels("A"), ctx.outcome_labels("B")
    )
    return Verdict.from_counts(w, c, s, family=family.name)


def check_settings_independence_tilde(model, wiring, family: TimeFamily) -> Verdict:
    ctx = _ctx(model, wiring)
    _family_times(wiring, family)
    lam = _family_labels(ctx, family, wiring.t_P)
    c, s, w = engine.settings_independence(ctx.space, lam, ctx.labeling("a"), ctx.labeling("b"))
    return Verdict.from_counts(w, c, s, family=family.name)


# -- Temporal Locality -----------------------------------------------------------


def check_temporal_locality(
    model, wiring: Optional[BellWiring] = None, bounds: RegionBounds = DEFAULT_LC_BOUNDS
) -> Verdict:
    """P(λ_R | λ_C, λ_R'') = P(λ_R | λ_C) for scheduled R'' wholly below t'."""
    if model.is_predictions_only:
        return _vacuous("predictions-only model has no spacetime states")
    space, _ = _lc_space(model, wiring)
    lattice = model.lattice
    regions = _schedule(lattice, bounds, wiring)
    labels = {r: complete_labeling(space, "lambda_R", r) for r in regions}
    audit: set = set()
    checked = skipped = 0
    for R in regions:
        for t in range(1, R.t_min):
            for tp in range(0, t):
                C = complete_labeling(space, "lambda_C", thick_slice(R, t, tp, lattice))
                for R2 in regions:
                    if R2.t_max >= tp:
                        continue
                    c, s, w = engine.conditional_independence(space, labels[R], C, labels[R2], audit)
                    checked += c
                    skipped += s
                    if w is not None:
                        w["instance"] = {"R": R.describe(), "R_pp": R2.describe(), "t": t, "tprime": tp}
                        return Verdict.from_counts(w, checked, skipped, **_audit_details(audit))
    return Verdict.from_counts(None, checked, skipped, **_audit_details(audit))


# -- witness re-verification -------------------------------------------------------


def _materialize(events: list):
    out = None
    for e in events:
        region = Region([tuple(map(int, p.strip("()").split(","))) for p in e["region"]])
        ev = CoarseEvent.states(region, [tuple(s) for s in e["states"]], e["label"])
        out = ev if out is None else _And(out, ev)
    return out


@dataclass(frozen=True)
class _And:
    left: object
    right: object

    def select(self, space):
        return self.left.select(space) & self.right.select(space)


def evaluate_terms(space: ProbSpace, terms: list) -> Fraction:
    """Product of the conditional probabilities described by witness terms."""
    value = Fraction(1)
    for term in terms:
        target = _materialize(term["target"])
        given = _materialize(term["given"]) if term["given"] else None
        value *= cond_prob(space, target, given)
    return value


def verify_witness(space: ProbSpace, witness: dict) -> bool:
    """Recompute both sides of a witness from its materialized events."""
    if "lhs_terms" not in witness:
        raise ValueError("witness carries no re-evaluable terms")
    lhs = evaluate_terms(space, witness["lhs_terms"])
    rhs = evaluate_terms(space, witness["rhs_terms"])
    return fmt(lhs) == witness["lhs"] and fmt(rhs) == witness["rhs"] and lhs != rhs
