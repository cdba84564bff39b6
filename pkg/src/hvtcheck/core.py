"""Finite hidden-variable models on the light-cone lattice.

A model is an alphabet, a dynamical law and an exact initial measure.  Its
solutions (law-consistent assignments of symbols to every lattice point)
are enumerated exhaustively, each with a rational weight.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import EnumerationBudget, UnsupportedLawKind, ValidationError
from .exact import format_number
from .spacetime import (
    Lattice,
    Region,
    SitePoint,
    future_slice_complete,
    rectangles,
    sigma,
)
from .verdict import Verdict

DEFAULT_BUDGET = 1_000_000
BUDGET_ENV = "HVT_BUDGET"


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __init__(self, symbols: Iterable[str]):
        syms = tuple(symbols)
        if not syms:
            raise ValidationError("alphabet must be nonempty")
        if len(set(syms)) != len(syms):
            raise ValidationError(f"alphabet symbols must be unique: {syms}")
        for s in syms:
            if not s or any(c in s for c in " \t,=>()#|&:"):
                raise ValidationError(f"bad symbol {s!r}")
        object.__setattr__(self, "symbols", syms)

    def __contains__(self, s):
        return s in self.symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)


# -- dynamical laws ---------------------------------------------------------


@dataclass(frozen=True)
class LocalDeterministic:
    table: dict
    radius: int = 1
    kind = "local-deterministic"

    def validate(self, alphabet: Alphabet):
        _check_radius(self.radius)
        for nb in itertools.product(alphabet.symbols, repeat=2 * self.radius + 1):
            if nb not in self.table:
                raise ValidationError(f"rule table misses neighbourhood {','.join(nb)}")
            if self.table[nb] not in alphabet:
                raise ValidationError(f"rule output {self.table[nb]!r} not in alphabet")


@dataclass(frozen=True)
class LocalStochastic:
    kernel: dict
    radius: int = 1
    kind = "local-stochastic"

    def validate(self, alphabet: Alphabet):
        _check_radius(self.radius)
        for nb in itertools.product(alphabet.symbols, repeat=2 * self.radius + 1):
            dist = self.kernel.get(nb)
            if dist is None:
                raise ValidationError(f"kernel misses neighbourhood {','.join(nb)}")
            if any(s not in alphabet for s in dist):
                raise ValidationError(f"kernel output outside alphabet at {nb}")
            if any(p < 0 for p in dist.values()) or sum(dist.values()) != 1:
                raise ValidationError(
                    f"kernel at {','.join(nb)} does not sum to exactly 1"
                )


@dataclass(frozen=True)
class GlobalDeterministic:
    """``rule(history, lattice)`` maps the slices so far to the next slice."""

    name: str
    rule: Callable = field(compare=False)
    kind = "global-deterministic"

    def validate(self, alphabet: Alphabet):
        pass


@dataclass(frozen=True)
class PredictionsOnly:
    """A bare correlation table P(A,B|a,b) with no spacetime semantics.

    ``table`` maps ``(a_id, b_id, A, B)`` with A, B in {+1, -1} to an exact
    number.  ``a_ids``/``b_ids`` list the two settings per side in the order
    (unprimed, primed).
    """

    table: dict
    a_ids: tuple
    b_ids: tuple
    approx: bool = False
    kind = "predictions-only"

    def validate(self, alphabet=None):
        from .chsh import check_table_normalized

        check_table_normalized(self)


def _check_radius(r):
    if r != 1:
        raise ValidationError(
            f"radius {r} unsupported: the causal diamond shrinks one site per side per step"
        )


# -- models and solutions ---------------------------------------------------


@dataclass(frozen=True)
class HVTModel:
    name: str
    lattice: Optional[Lattice]
    alphabet: Optional[Alphabet]
    law: object
    measure: dict = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.law, PredictionsOnly):
            self.law.validate()
            return
        if self.lattice is None or self.alphabet is None:
            raise ValidationError("spacetime models need a lattice and an alphabet")
        self.law.validate(self.alphabet)
        if not self.measure:
            raise ValidationError("initial measure is empty")
        total = Fraction(0)
        for config, w in self.measure.items():
            if len(config) != self.lattice.width:
                raise ValidationError(
                    f"configuration {','.join(config)} has length {len(config)}, "
                    f"expected {self.lattice.width}"
                )
            if any(s not in self.alphabet for s in config):
                raise ValidationError(f"configuration {','.join(config)} uses unknown symbols")
            if w < 0:
                raise ValidationError("negative weight in initial measure")
            total += w
        if total != 1:
            raise ValidationError(f"initial measure sums to {total}, not 1")
        if all(w == 0 for w in self.measure.values()):
            raise ValidationError("initial measure has empty support")

    @property
    def is_predictions_only(self) -> bool:
        return isinstance(self.law, PredictionsOnly)

    def support(self) -> list:
        return sorted(c for c, w in self.measure.items() if w > 0)


def uniform_measure(configs: Iterable[tuple]) -> dict:
    configs = sorted(set(tuple(c) for c in configs))
    w = Fraction(1, len(configs))
    return {c: w for c in configs}


def product_measure(width: int, cells: dict, background: str) -> dict:
    """Product measure: ``cells`` maps site -> {symbol: prob}; other sites fixed."""
    sites = sorted(cells)
    choices = [sorted(cells[x].items()) for x in sites]
    out = {}
    for combo in itertools.product(*choices):
        w = Fraction(1)
        config = [background] * width
        for x, (sym, p) in zip(sites, combo):
            config[x] = sym
            w *= p
        if w > 0:
            out[tuple(config)] = out.get(tuple(config), 0) + w
    return out


@dataclass(frozen=True, order=True)
class Solution:
    """A total law-consistent assignment; ``values`` follows ``lattice.points``."""

    values: tuple
    weight: Fraction = field(compare=False)

    def value(self, lattice: Lattice, p) -> str:
        return self.values[lattice.index(p)]

    def slice(self, lattice: Lattice, t: int) -> tuple:
        start = lattice.index((t, t))
        return self.values[start : start + lattice.slice_width(t)]


@dataclass(frozen=True)
class RegionState:
    """Complete specification of symbols on a region."""

    values: tuple  # sorted ((SitePoint, symbol), ...)

    def __init__(self, values):
        items = values.items() if isinstance(values, dict) else values
        object.__setattr__(
            self, "values", tuple(sorted((SitePoint(*p), s) for p, s in items))
        )

    @property
    def region(self) -> Optional[Region]:
        return Region(p for p, _ in self.values) if self.values else None

    def as_dict(self) -> dict:
        return dict(self.values)

    def describe(self) -> list:
        return [f"{p}={s}" for p, s in self.values]


def restrict(solution: Solution, region: Region, lattice: Lattice) -> RegionState:
    return RegionState({p: solution.value(lattice, p) for p in region.points})


def compatible(solution: Solution, state: RegionState, lattice: Lattice) -> bool:
    return all(solution.value(lattice, p) == s for p, s in state.values)


def _step_choices(law, history, lattice, t):
    """Per-site lists of (symbol, probability) for slice ``t``."""
    prev = history[-1]
    if isinstance(law, LocalDeterministic):
        return [[(law.table[prev[i - 1 : i + 2]], Fraction(1))] for i in range(1, len(prev) - 1)]
    if isinstance(law, LocalStochastic):
        out = []
        for i in range(1, len(prev) - 1):
            dist = law.kernel[prev[i - 1 : i + 2]]
            out.append(sorted((s, p) for s, p in dist.items() if p > 0))
        return out
    if isinstance(law, GlobalDeterministic):
        nxt = tuple(law.rule(list(history), lattice))
        if len(nxt) != lattice.slice_width(t):
            raise ValidationError(f"global rule {law.name} produced a slice of wrong width")
        return [[(s, Fraction(1))] for s in nxt]
    raise UnsupportedLawKind(f"cannot evolve law kind {getattr(law, 'kind', law)}")


def enumerate_solutions(model: HVTModel, budget: Optional[int] = None, intervention=None) -> list:
    """Every solution with nonzero weight, in lexicographic order.

    ``intervention(t, slice)`` may replace each freshly computed slice by a
    weighted list of alternatives; it exists only for the exogenous-settings
    mode and is off by default.
    """
    if model.is_predictions_only:
        raise UnsupportedLawKind("predictions-only models have no solutions")
    budget = default_budget() if budget is None else budget
    lattice = model.lattice
    out = []
    for config in model.support():
        branches = [([tuple(config)], model.measure[config])]
        if intervention is not None:
            branches = _intervene(intervention, branches, 0)
        for t in range(1, lattice.height + 1):
            new = []
            for history, w in branches:
                choices = _step_choices(model.law, history, lattice, t)
                for combo in itertools.product(*choices):
                    p = w
                    for _, q in combo:
                        p *= q
                    new.append((history + [tuple(s for s, _ in combo)], p))
                    if len(new) + len(out) > budget:
                        raise EnumerationBudget(
                            f"more than {budget} weighted solutions; raise {BUDGET_ENV}"
                        )
            branches = new if intervention is None else _intervene(intervention, new, t)
        for history, w in branches:
            out.append(Solution(tuple(itertools.chain.from_iterable(history)), w))
    out = _merge(out)
    assert sum(s.weight for s in out) == 1
    return out


def _intervene(fn, branches, t):
    out = []
    for history, w in branches:
        for new_slice, q in fn(t, history[-1]):
            if q:
                out.append((history[:-1] + [tuple(new_slice)], w * q))
    return out


def _merge(sols: list) -> list:
    """Sort, summing weights of identical assignments (distinct branches can coincide)."""
    acc: dict = {}
    for s in sols:
        acc[s.values] = acc.get(s.values, 0) + s.weight
    return [Solution(v, w) for v, w in sorted(acc.items())]


# -- determinism checkers ---------------------------------------------------


def _indices(lattice: Lattice, region) -> tuple:
    return tuple(lattice.index(p) for p in sorted(region.points if isinstance(region, Region) else region))


def _project(values: tuple, idx: tuple) -> tuple:
    return tuple(values[i] for i in idx)


def _state_desc(lattice, idx, vals) -> list:
    return [f"{lattice.points[i]}={v}" for i, v in zip(idx, vals)]


def determined_domain(lattice: Lattice, t0: int) -> list:
    """Points fixed in principle by slice ``t0``: everything above it, plus the
    points below whose complete future slice at ``t0`` lies in the lattice."""
    out = []
    for p in lattice.points:
        if p.t >= t0 or future_slice_complete(Region([p]), t0, lattice):
            out.append(p)
    return out


def check_deterministic(model: HVTModel, solutions=None) -> Verdict:
    """Every realized full slice admits exactly one solution (on its domain)."""
    if model.is_predictions_only:
        raise UnsupportedLawKind("determinism needs spacetime states")
    lattice = model.lattice
    sols = enumerate_solutions(model) if solutions is None else solutions
    checked = 0
    for t0 in range(lattice.height + 1):
        slice_idx = _indices(lattice, lattice.slice(t0))
        dom = determined_domain(lattice, t0)
        dom_idx = _indices(lattice, dom)
        groups: dict = {}
        for s in sols:
            key = _project(s.values, slice_idx)
            checked += 1
            proj = _project(s.values, dom_idx)
            first = groups.setdefault(key, (proj, s))
            if first[0] != proj:
                other = first[1]
                diff = next(i for i in dom_idx if other.values[i] != s.values[i])
                return Verdict.from_counts(
                    {
                        "t0": t0,
                        "slice_state": _state_desc(lattice, slice_idx, key),
                        "differing_point": str(lattice.points[diff]),
                        "values": [other.values[diff], s.values[diff]],
                        "solution_ids": [sols.index(other), sols.index(s)],
                    },
                    checked,
                    0,
                )
    return Verdict.from_counts(None, checked, 0)


@dataclass(frozen=True)
class RegionBounds:
    """Fragment of the region quantifier that is actually enumerated."""

    max_dx: int = 2
    max_dt: int = 2

    def regions(self, lattice: Lattice) -> list:
        return rectangles(lattice, self.max_dx, self.max_dt)


def local_determinism_instances(region: Region, lattice: Lattice, direction: str):
    """Admissible t0 values for a region, per direction."""
    if direction in ("past", "both"):
        for t0 in range(0, region.t_min):
            yield "past", t0
    if direction in ("future", "both"):
        for t0 in range(region.t_max + 1, lattice.height + 1):
            if future_slice_complete(region, t0, lattice):
                yield "future", t0


def locally_determined_at(sols, lattice, region: Region, t0: int):
    """None if the cone slice fixes the region's state, else a witness dict."""
    sig = sigma(region, t0, lattice)
    s_idx = _indices(lattice, sig)
    r_idx = _indices(lattice, region)
    seen: dict = {}
    for s in sols:
        key = _project(s.values, s_idx)
        val = _project(s.values, r_idx)
        first = seen.setdefault(key, val)
        if first != val:
            with_key = [x for x in sols if _project(x.values, s_idx) == key]
            total = sum(x.weight for x in with_key)

            def cp(v):
                part = sum(x.weight for x in with_key if _project(x.values, r_idx) == v)
                return format_number(Fraction(part) / total) if total else None

            return {
                "cond_probs": [cp(first), cp(val)],
                "region": region.describe(),
                "t0": t0,
                "sigma_state": _state_desc(lattice, s_idx, key),
                "region_states": [
                    _state_desc(lattice, r_idx, first),
                    _state_desc(lattice, r_idx, val),
                ],
            }
    return None


def check_locally_deterministic(
    model: HVTModel, direction: str = "both", bounds: RegionBounds = RegionBounds(), solutions=None
) -> Verdict:
    """Cone-slice states fix the state of every scheduled region.

    Past and future directions are evaluated and reported separately; the
    future direction only uses slices whose full cone section lies inside
    the lattice.
    """
    if direction not in ("past", "future", "both"):
        raise ValueError(f"bad direction {direction!r}")
    if model.is_predictions_only:
        raise UnsupportedLawKind("local determinism needs spacetime states")
    lattice = model.lattice
    sols = enumerate_solutions(model) if solutions is None else solutions
    sub = {}
    for d in ("past", "future"):
        if direction not in (d, "both"):
            continue
        checked, witness = 0, None
        for region in bounds.regions(lattice):
            for _, t0 in local_determinism_instances(region, lattice, d):
                checked += 1
                witness = locally_determined_at(sols, lattice, region, t0)
                if witness is not None:
                    witness["direction"] = d
                    break
            if witness is not None:
                break
        sub[d] = Verdict.from_counts(witness, checked, 0)
    witness = next((v.witness for v in sub.values() if v.failed), None)
    checked = sum(v.checked for v in sub.values())
    return Verdict.from_counts(
        witness,
        checked,
        0,
        direction=direction,
        by_direction={d: v.status for d, v in sub.items()},
        bounds={"max_dx": bounds.max_dx, "max_dt": bounds.max_dt},
    )
