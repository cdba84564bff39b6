"""Exact probability over whole solutions.

Weights are held as integers over one common denominator so that every
equality test is an integer cross-multiplication.  Events are sets of
solution indices; ``CoarseEvent`` is the predicate-over-a-region form that
users and model files write.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .core import RegionState
from .errors import NullCondition, PreconditionFailed
from .spacetime import Lattice, Region, SitePoint
from .verdict import Verdict


@dataclass(frozen=True)
class CoarseEvent:
    """All solutions whose restriction to ``region`` satisfies ``predicate``."""

    region: Region
    predicate: Callable = field(compare=False)
    label: str = ""

    def select(self, space: "ProbSpace") -> frozenset:
        idx = space.indices(self.region)
        pts = [space.lattice.points[i] for i in idx]
        cache: dict = {}
        out = []
        for k, vals in enumerate(space.projections(idx)):
            hit = cache.get(vals)
            if hit is None:
                hit = cache[vals] = bool(self.predicate(dict(zip(pts, vals))))
            if hit:
                out.append(k)
        return frozenset(out)

    @classmethod
    def state(cls, state: RegionState, label: str = "") -> "CoarseEvent":
        want = state.as_dict()
        return cls(state.region, lambda d: all(d[p] == s for p, s in want.items()),
                   label or ",".join(state.describe()))

    @classmethod
    def states(cls, region: Region, allowed: Iterable[tuple], label: str = "") -> "CoarseEvent":
        """Region takes one of the listed value tuples (in sorted point order)."""
        allowed = frozenset(tuple(a) for a in allowed)
        order = region.sorted()
        return cls(region, lambda d: tuple(d[p] for p in order) in allowed, label)


def select(space: "ProbSpace", event) -> frozenset:
    if isinstance(event, frozenset):
        return event
    if event is None:
        return space.everything
    return event.select(space)


class ProbSpace:
    """Finite probability space whose elementary events are solutions."""

    def __init__(self, solutions: list, lattice: Optional[Lattice]):
        self.solutions = list(solutions)
        self.lattice = lattice
        weights = [Fraction(s.weight) for s in self.solutions]
        if any(w < 0 for w in weights):
            raise ValueError("negative solution weight")
        if sum(weights) != 1:
            raise ValueError("solution weights must sum to exactly 1")
        self.denominator = math.lcm(*(w.denominator for w in weights)) if weights else 1
        self.weights = [int(w * self.denominator) for w in weights]
        self.everything = frozenset(range(len(self.solutions)))
        self._proj: dict = {}

    def __len__(self):
        return len(self.solutions)

    # -- projections -----------------------------------------------------
    def indices(self, region) -> tuple:
        pts = region.sorted() if isinstance(region, Region) else sorted(region)
        return tuple(self.lattice.index(p) for p in pts)

    def projections(self, idx: tuple) -> list:
        got = self._proj.get(idx)
        if got is None:
            got = [tuple(s.values[i] for i in idx) for s in self.solutions]
            self._proj[idx] = got
        return got

    def realized_states(self, region: Region) -> list:
        """Distinct value tuples on ``region`` with positive weight, sorted."""
        proj = self.projections(self.indices(region))
        return sorted({v for v, w in zip(proj, self.weights) if w})

    # -- measures --------------------------------------------------------
    def mass(self, sel: frozenset) -> int:
        w = self.weights
        return sum(w[i] for i in sel)

    def condition(self, event) -> "ProbSpace":
        """The space renormalized on ``event`` (solutions outside are dropped)."""
        sel = select(self, event)
        m = self.mass(sel)
        if m == 0:
            raise NullCondition("conditioning event has zero weight")
        kept = sorted(i for i in sel if self.weights[i])
        sols = [
            type(self.solutions[i])(self.solutions[i].values, Fraction(self.weights[i], m))
            for i in kept
        ]
        return ProbSpace(sols, self.lattice)


def prob(space: ProbSpace, event) -> Fraction:
    return Fraction(space.mass(select(space, event)), space.denominator)


def cond_prob(space: ProbSpace, event, given) -> Fraction:
    f = select(space, given)
    mf = space.mass(f)
    if mf == 0:
        raise NullCondition("conditioning event has zero weight")
    return Fraction(space.mass(select(space, event) & f), mf)


def independent(space: ProbSpace, e, f) -> bool:
    se, sf = select(space, e), select(space, f)
    return space.mass(se & sf) * space.denominator == space.mass(se) * space.mass(sf)


def check_bridge_principle(space: ProbSpace, initial: RegionState, final: RegionState) -> Verdict:
    """Determination by compatibility must show up as probability 0 or 1."""
    given = select(space, CoarseEvent.state(initial))
    given = frozenset(i for i in given if space.weights[i])
    if not given:
        raise NullCondition("initial state has zero weight")
    target = select(space, CoarseEvent.state(final))
    p = cond_prob(space, target, given)
    all_compat = given <= target
    none_compat = not (given & target)
    bad = (all_compat and p != 1) or (none_compat and p != 0)
    witness = {"cond_prob": str(p)} if bad else None
    antecedent = "all" if all_compat else "none" if none_compat else "neither"
    return Verdict.from_counts(witness, 1, 0, cond_prob=_fmt(p), antecedent=antecedent)


def coarse_union_independence_check(space: ProbSpace, x, x2, y) -> Verdict:
    """Disjoint events each independent of ``y`` have a union independent of ``y``."""
    sx, sx2, sy = select(space, x), select(space, x2), select(space, y)
    if sx & sx2:
        raise PreconditionFailed("events to merge are not disjoint")
    if not (independent(space, sx, sy) and independent(space, sx2, sy)):
        raise PreconditionFailed("each merged event must be independent of the third")
    ok = independent(space, sx | sx2, sy)
    return Verdict.from_counts(None if ok else {"merged": "dependent"}, 1, 0)


def _fmt(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


@dataclass(frozen=True)
class Partition:
    """Disjoint coarse events over one region covering every realized state."""

    region: Region
    cells: tuple
    definable: bool = True

    def __init__(self, cells: Iterable[CoarseEvent], space: ProbSpace, definable: bool = True):
        cells = tuple(cells)
        if not cells:
            raise PreconditionFailed("a partition needs at least one cell")
        region = cells[0].region
        if any(c.region != region for c in cells):
            raise PreconditionFailed("partition cells must share one region")
        seen = frozenset()
        for c in cells:
            sel = c.select(space)
            if sel & seen:
                overlap = space.projections(space.indices(region))[min(sel & seen)]
                raise PreconditionFailed(f"cells overlap on state {overlap}")
            seen |= sel
        missing = [i for i in space.everything - seen if space.weights[i]]
        if missing:
            state = space.projections(space.indices(region))[missing[0]]
            raise PreconditionFailed(f"realized state {state} lies in no cell")
        object.__setattr__(self, "region", region)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "definable", definable)

    @classmethod
    def by_label(cls, space: ProbSpace, region: Region, label: Callable, **kw) -> "Partition":
        """Group realized states of ``region`` by ``label(state_dict)``."""
        order = region.sorted()
        groups: dict = {}
        for vals in space.realized_states(region):
            groups.setdefault(str(label(dict(zip(order, vals)))), []).append(vals)
        cells = [CoarseEvent.states(region, v, k) for k, v in sorted(groups.items())]
        return cls(cells, space, **kw)

    @classmethod
    def complete(cls, space: ProbSpace, region: Region) -> "Partition":
        """One cell per realized state."""
        order = region.sorted()
        return cls.by_label(
            space, region, lambda d: ",".join(f"{p}={d[p]}" for p in order)
        )

    def __repr__(self):
        kind = "" if self.definable else ", definable=False"
        return f"Partition({len(self.cells)} cells over {len(self.region)} sites: {self.labels()}{kind})"

    def labels(self) -> list:
        return [c.label for c in self.cells]

    def selections(self, space: ProbSpace) -> list:
        return [c.select(space) for c in self.cells]


def total_probability_holds(space: ProbSpace, event, partition: Partition) -> bool:
    se = select(space, event)
    return space.mass(se) == sum(space.mass(se & c) for c in partition.selections(space))


def chain_rule_holds(space: ProbSpace, a, b, given) -> bool:
    """P(a,b|g) = P(a|b,g) P(b|g), cross-multiplied; raises on null conditions."""
    sa, sb, sg = (select(space, e) for e in (a, b, given))
    lhs = cond_prob(space, sa & sb, sg)
    return lhs == cond_prob(space, sa, sb & sg) * cond_prob(space, sb, sg)
