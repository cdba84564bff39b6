"""1+1 dimensional light-cone lattice.

The lattice is the causal diamond over an initial slice of ``width`` sites:
slice ``t`` holds sites ``t .. width-1-t``.  Light speed is one site per
step and every cone includes its apex region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

from .errors import BadTimeOrder, InvalidRegion, TimeNotOutsideRegion


class SitePoint(NamedTuple):
    x: int
    t: int

    def __str__(self):
        return f"({self.x},{self.t})"


@dataclass(frozen=True)
class Region:
    """A finite, nonempty, not necessarily connected set of lattice points."""

    points: frozenset

    def __init__(self, points: Iterable):
        pts = frozenset(SitePoint(*p) for p in points)
        if not pts:
            raise InvalidRegion("regions must be nonempty")
        object.__setattr__(self, "points", pts)

    @classmethod
    def rect(cls, x0: int, x1: int, t0: int, t1: int) -> "Region":
        return cls((x, t) for x in range(x0, x1 + 1) for t in range(t0, t1 + 1))

    @property
    def t_min(self) -> int:
        return min(p.t for p in self.points)

    @property
    def t_max(self) -> int:
        return max(p.t for p in self.points)

    def at(self, t: int) -> "Region | None":
        pts = [p for p in self.points if p.t == t]
        return Region(pts) if pts else None

    def sorted(self) -> list:
        return sorted(self.points)

    def __or__(self, other: "Region") -> "Region":
        return Region(self.points | other.points)

    def __and__(self, other: "Region") -> "Region | None":
        common = self.points & other.points
        return Region(common) if common else None

    def __contains__(self, p) -> bool:
        return SitePoint(*p) in self.points

    def __iter__(self) -> Iterator[SitePoint]:
        return iter(self.sorted())

    def __len__(self):
        return len(self.points)

    def issubset(self, other: "Region") -> bool:
        return self.points <= other.points

    def describe(self) -> list:
        return [f"({p.x},{p.t})" for p in self.sorted()]

    def __str__(self):
        return "{" + ",".join(self.describe()) + "}"


@dataclass(frozen=True)
class Lattice:
    width: int
    height: int
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 0:
            raise InvalidRegion(f"bad lattice size {self.width}x{self.height}")
        if self.height > (self.width - 1) // 2:
            raise InvalidRegion(
                f"height {self.height} exceeds the diamond of width {self.width}"
            )
        index = {p: i for i, p in enumerate(self._points())}
        object.__setattr__(self, "_index", index)

    def _points(self) -> list:
        return [SitePoint(x, t) for t in range(self.height + 1) for x in self.xs(t)]

    def xs(self, t: int) -> range:
        return range(t, self.width - t)

    def slice_width(self, t: int) -> int:
        return self.width - 2 * t

    def contains(self, p) -> bool:
        x, t = p
        return 0 <= t <= self.height and t <= x <= self.width - 1 - t

    @cached_property
    def points(self) -> tuple:
        return tuple(self._points())

    def index(self, p) -> int:
        return self._index[SitePoint(*p)]

    def slice(self, t: int) -> Region:
        return Region(SitePoint(x, t) for x in self.xs(t))

    def validate(self, region: Region) -> None:
        bad = [p for p in region.sorted() if not self.contains(p)]
        if bad:
            raise InvalidRegion(f"points outside the lattice diamond: {bad}")

    @cached_property
    def n_points(self) -> int:
        return len(self._index)


def _cone(region: Region, lattice: Lattice, future: bool) -> Region:
    lattice.validate(region)
    pts = set()
    for p in region.points:
        times = range(p.t, lattice.height + 1) if future else range(0, p.t + 1)
        for tt in times:
            r = abs(tt - p.t)
            lo = max(p.x - r, tt)
            hi = min(p.x + r, lattice.width - 1 - tt)
            pts.update(SitePoint(x, tt) for x in range(lo, hi + 1))
    return Region(pts)


def past_light_cone(region: Region, lattice: Lattice) -> Region:
    return _cone(region, lattice, future=False)


def future_light_cone(region: Region, lattice: Lattice) -> Region:
    return _cone(region, lattice, future=True)


def sigma(region: Region, t0: int, lattice: Lattice) -> Region:
    """Slice ``t0`` of the past cone (t0 below R) or future cone (t0 above R)."""
    lattice.validate(region)
    if t0 < region.t_min:
        cone = past_light_cone(region, lattice)
    elif t0 > region.t_max:
        cone = future_light_cone(region, lattice)
    else:
        raise TimeNotOutsideRegion(f"t={t0} meets the time extent of {region}")
    out = cone.at(t0)
    if out is None:
        raise TimeNotOutsideRegion(f"slice t={t0} lies outside the lattice")
    return out


def future_slice_complete(region: Region, t0: int, lattice: Lattice) -> bool:
    """True iff the radius-(t0 - t) future slice of every point fits in the lattice.

    Past cones are never clipped by the diamond; future cones can leave it.
    """
    if t0 > lattice.height:
        return False
    for p in region.points:
        r = t0 - p.t
        if p.x - r < t0 or p.x + r > lattice.width - 1 - t0:
            return False
    return True


def thick_slice(region: Region, t: int, t_prime: int, lattice: Lattice) -> Region:
    """Part of R's past cone between slices ``t_prime`` and ``t``, inclusive."""
    if not t_prime < t:
        raise BadTimeOrder(f"need t' < t, got t'={t_prime}, t={t}")
    if not t < region.t_min:
        raise BadTimeOrder(f"t={t} is not below {region}")
    if t_prime < 0:
        raise BadTimeOrder("t' must be >= 0")
    cone = past_light_cone(region, lattice)
    return Region(p for p in cone.points if t_prime <= p.t <= t)


def spacelike_separated(r1: Region, r2: Region) -> bool:
    return all(abs(p.x - q.x) > abs(p.t - q.t) for p in r1.points for q in r2.points)


def past_overlap_top(r1: Region, r2: Region, lattice: Lattice):
    """Latest time of the intersection of the two past cones, or None if disjoint."""
    common = past_light_cone(r1, lattice) & past_light_cone(r2, lattice)
    return None if common is None else common.t_max


def admissible_slice_pairs(region: Region, other: Region, lattice: Lattice):
    """All (t, t') with t' < t < R lying above the overlap of the two past cones."""
    top = past_overlap_top(region, other, lattice)
    lowest = 0 if top is None else top + 1
    pairs = []
    for t in range(lowest + 1, region.t_min):
        for tp in range(lowest, t):
            pairs.append((t, tp))
    return pairs


def rectangles(lattice: Lattice, max_dx: int, max_dt: int) -> list:
    """Every axis-aligned rectangle inside the diamond up to the given extent."""
    out = []
    for dt in range(1, max_dt + 1):
        for dx in range(1, max_dx + 1):
            for t0 in range(0, lattice.height - dt + 2):
                t1 = t0 + dt - 1
                if t1 > lattice.height:
                    continue
                for x0 in range(t1, lattice.width - t1 - dx + 1):
                    out.append(Region.rect(x0, x0 + dx - 1, t0, t1))
    out.sort(key=lambda r: (len(r), r.sorted()))
    return out
