"""The Bell-experiment wiring of a spacetime model and the localizations of λ.

``BellContext`` bundles everything the checkers need: the enumerated
solutions, the space conditioned on the experiment actually taking place
(all four settings/outcome regions classify), and per-solution labels for
settings, outcomes and the chosen hidden state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .core import HVTModel, enumerate_solutions
from .errors import (
    BadFamily,
    NullCondition,
    UnsupportedLawKind,
    ValidationError,
)
from .probability import Partition, ProbSpace
from .spacetime import (
    Region,
    SitePoint,
    past_light_cone,
    past_overlap_top,
    spacelike_separated,
    thick_slice,
)

LEFT_SETTINGS = ("a", "a'")
RIGHT_SETTINGS = ("b", "b'")
OUTCOMES = ("+1", "-1")


@dataclass(frozen=True)
class BellWiring:
    R_a: Region
    R_b: Region
    R_A: Region
    R_B: Region
    t_P: int
    t_M: int
    t: int
    t_prime: int
    # each a tuple of (label, predicate over the matching region), in label order
    settings_left: tuple
    settings_right: tuple
    outcomes_left: tuple
    outcomes_right: tuple
    system: dict = field(default_factory=dict, hash=False, compare=False)

    def system_region(self, tau: int) -> Region:
        try:
            return self.system[tau]
        except KeyError:
            raise BadFamily(f"wiring declares no system region at time {tau}")

    def thick_slices(self, lattice, t=None, t_prime=None):
        t = self.t if t is None else t
        tp = self.t_prime if t_prime is None else t_prime
        return thick_slice(self.R_A, t, tp, lattice), thick_slice(self.R_B, t, tp, lattice)

    def validate(self, lattice) -> None:
        for name in ("R_a", "R_b", "R_A", "R_B"):
            lattice.validate(getattr(self, name))
        left, right = self.R_a | self.R_A, self.R_b | self.R_B
        if not spacelike_separated(left, right):
            raise ValidationError("the two wings are not spacelike separated")
        if not self.R_a.issubset(past_light_cone(self.R_A, lattice)):
            raise ValidationError("R_a is not in the past cone of R_A")
        if not self.R_b.issubset(past_light_cone(self.R_B, lattice)):
            raise ValidationError("R_b is not in the past cone of R_B")
        if not self.t_prime < self.t:
            raise ValidationError("need tprime < t")
        if not self.t < min((self.R_a | self.R_b).t_min, (self.R_A | self.R_B).t_min):
            raise ValidationError("t must lie below the setting regions")
        top = past_overlap_top(self.R_A, self.R_B, lattice)
        if top is not None and self.t_prime <= top:
            raise ValidationError(
                f"tprime={self.t_prime} does not lie above the past-cone overlap (top {top})"
            )
        if not self.t_P < self.t_prime:
            raise ValidationError("tP must lie below tprime")
        overlap = past_light_cone(self.R_A, lattice) & past_light_cone(self.R_B, lattice)
        if self.t_P in self.system:
            if overlap is None or not self.system[self.t_P].issubset(overlap):
                raise ValidationError("system region at tP is not in the common past")
        for group, region in (
            (self.settings_left, self.R_a),
            (self.settings_right, self.R_b),
            (self.outcomes_left, self.R_A),
            (self.outcomes_right, self.R_B),
        ):
            for label, p in group:
                pts = getattr(p, "points", None)
                if pts is not None and not set(pts()) <= set(region.points):
                    raise ValidationError(f"predicate for {label} reads outside its region")


# -- localizations of the hidden state --------------------------------------


@dataclass(frozen=True)
class AtPreparation:
    descriptor = "preparation"


@dataclass(frozen=True)
class AtPreparationPlus:
    radius: int = 1

    @property
    def descriptor(self):
        return f"preparation-plus:{self.radius}"


@dataclass(frozen=True)
class ThickSlices:
    t: Optional[int] = None
    t_prime: Optional[int] = None

    @property
    def descriptor(self):
        if self.t is None and self.t_prime is None:
            return "thick-slices"
        return f"thick-slices:{self.t},{self.t_prime}"


@dataclass(frozen=True)
class CoarseFamily:
    partition: Partition = field(compare=False)
    name: str = "coarse"

    @property
    def descriptor(self):
        return f"coarse:{self.name}"


@dataclass(frozen=True)
class TimeFamily:
    """A coarse-graining of the system state, one region per time."""

    regions: dict
    label: Callable = field(compare=False)
    name: str = "family"

    def region(self, tau: int) -> Region:
        if tau not in self.regions:
            raise BadFamily(f"family {self.name} is not defined at time {tau}")
        return self.regions[tau]


def preparation_plus_region(wiring: BellWiring, lattice, radius: int) -> Region:
    base = wiring.system_region(wiring.t_P)
    overlap = past_light_cone(wiring.R_A, lattice) & past_light_cone(wiring.R_B, lattice)
    pts = set()
    for p in base.points:
        for x in range(p.x - radius, p.x + radius + 1):
            q = SitePoint(x, wiring.t_P)
            if lattice.contains(q) and overlap is not None and q in overlap:
                pts.add(q)
    return Region(pts | set(base.points))


# -- labelings ---------------------------------------------------------------


@dataclass
class Labeling:
    """Per-solution labels of a classification of one region's states."""

    name: str
    region: Region
    labels: list
    members: dict  # label -> sorted realized value tuples (sorted-point order)

    def event(self, label) -> dict:
        return {
            "label": _label_text(label),
            "region": self.region.describe(),
            "states": [list(v) for v in self.members.get(label, [])],
        }

    def events(self, label) -> list:
        return [self.event(label)]

    def values(self) -> list:
        return sorted(self.members, key=_label_key)


@dataclass
class JointLabeling(Labeling):
    """Conjunction of labelings; events materialize component-wise."""

    parts: tuple = ()

    def events(self, label) -> list:
        return [e for part, v in zip(self.parts, label) for e in part.events(v)]


def joint(name: str, *parts: Labeling) -> JointLabeling:
    region = parts[0].region
    for p in parts[1:]:
        region = region | p.region
    labels = [
        None if any(p.labels[i] is None for p in parts) else tuple(p.labels[i] for p in parts)
        for i in range(len(parts[0].labels))
    ]
    members = {lab: [] for lab in labels if lab is not None}
    return JointLabeling(name, region, labels, members, tuple(parts))


def _label_text(label) -> str:
    if isinstance(label, tuple):
        return ",".join(label)
    return str(label)


def _label_key(label):
    return (isinstance(label, tuple), label if not isinstance(label, tuple) else tuple(map(str, label)))


def labeling_from_fn(space: ProbSpace, name: str, region: Region, fn) -> Labeling:
    idx = space.indices(region)
    order = region.sorted()
    cache: dict = {}
    labels, members = [], {}
    for vals, w in zip(space.projections(idx), space.weights):
        if vals not in cache:
            cache[vals] = fn(dict(zip(order, vals)), vals)
        lab = cache[vals]
        labels.append(lab)
        if lab is not None and w:
            members.setdefault(lab, set()).add(vals)
    return Labeling(name, region, labels, {k: sorted(v) for k, v in members.items()})


def labeling_from_classes(space, name, region, classes) -> Labeling:
    def fn(d, _vals):
        hits = [lab for lab, p in classes if p(d)]
        if len(hits) > 1:
            raise ValidationError(f"{name} classes overlap on state {_vals}")
        return hits[0] if hits else None

    return labeling_from_fn(space, name, region, fn)


def complete_labeling(space, name, region) -> Labeling:
    return labeling_from_fn(space, name, region, lambda d, vals: vals)


def partition_labeling(space, name, partition: Partition) -> Labeling:
    sels = [(c.label, c.select(space)) for c in partition.cells]
    owner = {}
    for lab, sel in sels:
        for i in sel:
            owner[i] = lab
    idx = space.indices(partition.region)
    proj = space.projections(idx)
    labels = [owner.get(i) for i in range(len(space))]
    members: dict = {}
    for i, lab in enumerate(labels):
        if lab is not None and space.weights[i]:
            members.setdefault(lab, set()).add(proj[i])
    return Labeling(name, partition.region, labels, {k: sorted(v) for k, v in members.items()})


# -- context -----------------------------------------------------------------


class BellContext:
    def __init__(self, model: HVTModel, wiring: BellWiring, external_settings=False, budget=None):
        if model.is_predictions_only:
            raise UnsupportedLawKind("Bell wiring needs a spacetime model")
        self.model = model
        self.wiring = wiring
        self.lattice = model.lattice
        self.external_settings = external_settings
        wiring.validate(self.lattice)
        intervention = _external_intervention(model, wiring, budget) if external_settings else None
        self.solutions = enumerate_solutions(model, budget, intervention)
        self.full_space = ProbSpace(self.solutions, self.lattice)
        full = {
            k: labeling_from_classes(self.full_space, k, reg, cls)
            for k, reg, cls in self._groups()
        }
        keep = frozenset(
            i for i in range(len(self.solutions)) if all(full[k].labels[i] is not None for k in full)
        )
        if self.full_space.mass(keep) == 0:
            raise NullCondition("no solution realizes the Bell experiment wiring")
        self.space = self.full_space.condition(keep)
        self._lab = {
            k: labeling_from_classes(self.space, k, reg, cls) for k, reg, cls in self._groups()
        }
        self._cache: dict = {}

    def _groups(self):
        w = self.wiring
        return (
            ("a", w.R_a, w.settings_left),
            ("b", w.R_b, w.settings_right),
            ("A", w.R_A, w.outcomes_left),
            ("B", w.R_B, w.outcomes_right),
        )

    def labeling(self, key: str) -> Labeling:
        return self._lab[key]

    def setting_labels(self, side: str) -> tuple:
        group = self.wiring.settings_left if side == "a" else self.wiring.settings_right
        return tuple(lab for lab, _ in group)

    def outcome_labels(self, side: str) -> tuple:
        group = self.wiring.outcomes_left if side == "A" else self.wiring.outcomes_right
        return tuple(lab for lab, _ in group)

    def thick(self, t=None, t_prime=None):
        key = ("thick", t, t_prime)
        if key not in self._cache:
            ca, cb = self.wiring.thick_slices(self.lattice, t, t_prime)
            self._cache[key] = (
                complete_labeling(self.space, "lambda_CA", ca),
                complete_labeling(self.space, "lambda_CB", cb),
            )
        return self._cache[key]

    def lam(self, spec) -> Labeling:
        key = ("lam", spec)
        if key in self._cache:
            return self._cache[key]
        w = self.wiring
        if isinstance(spec, AtPreparation):
            out = complete_labeling(self.space, "lambda", w.system_region(w.t_P))
        elif isinstance(spec, AtPreparationPlus):
            region = preparation_plus_region(w, self.lattice, spec.radius)
            out = complete_labeling(self.space, "lambda", region)
        elif isinstance(spec, ThickSlices):
            ca, cb = w.thick_slices(self.lattice, spec.t, spec.t_prime)
            out = complete_labeling(self.space, "lambda", ca | cb)
        elif isinstance(spec, CoarseFamily):
            out = partition_labeling(self.space, "lambda", spec.partition)
        else:
            raise TypeError(f"unknown lambda spec {spec!r}")
        self._cache[key] = out
        return out


_CONTEXTS: dict = {}


def context(model: HVTModel, wiring: BellWiring, external_settings=False, budget=None) -> BellContext:
    """Memoized context; keyed by object identity since models are immutable."""
    key = (id(model), id(wiring), external_settings, budget)
    hit = _CONTEXTS.get(key)
    if hit is not None and hit[0] is model and hit[1] is wiring:
        return hit[2]
    ctx = BellContext(model, wiring, external_settings, budget)
    if len(_CONTEXTS) > 64:
        _CONTEXTS.clear()
    _CONTEXTS[key] = (model, wiring, ctx)
    return ctx


def _external_intervention(model, wiring, budget):
    """Overwrite the setting regions with exogenous fair choices.

    Each setting region must sit on one slice.  The representative state of
    each class is the first state (in lexicographic order) that the class
    predicate accepts.
    """
    lattice = model.lattice
    plan = {}
    for region, classes in ((wiring.R_a, wiring.settings_left), (wiring.R_b, wiring.settings_right)):
        if region.t_min != region.t_max:
            raise ValidationError("external settings need single-slice setting regions")
        order = region.sorted()
        reps = []
        for label, p in classes:
            rep = next(
                (
                    combo
                    for combo in itertools.product(model.alphabet.symbols, repeat=len(order))
                    if p(dict(zip(order, combo)))
                ),
                None,
            )
            if rep is None:
                raise ValidationError(f"setting class {label} is unsatisfiable")
            reps.append(dict(zip(order, rep)))
        plan.setdefault(region.t_min, []).append(reps)

    def intervene(t, row):
        if t not in plan:
            return [(row, Fraction(1))]
        out = []
        for choice in itertools.product(*plan[t]):
            new = list(row)
            for rep in choice:
                for p, s in rep.items():
                    new[p.x - t] = s
            out.append((tuple(new), Fraction(1, 2 ** len(choice))))
        return out

    return intervene
