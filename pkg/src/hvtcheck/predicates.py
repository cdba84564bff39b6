"""Cell-value predicates written as text.

Grammar (``&`` binds tighter than ``|``)::

    pred   := conj ('|' conj)*
    conj   := clause ('&' clause)*
    clause := '(' x ',' t ')' ('=' | '!=') symbol  |  'true'
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .spacetime import Region, SitePoint

_CLAUSE = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*(!=|=)\s*(\S+)$")


@dataclass(frozen=True)
class Predicate:
    text: str
    disjuncts: tuple  # tuple of conjunctions; each a tuple of (SitePoint, op, symbol)

    @classmethod
    def parse(cls, text: str) -> "Predicate":
        text = " ".join(text.split())
        if not text:
            raise ValueError("empty predicate")
        disjuncts = []
        for part in text.split("|"):
            conj = []
            for raw in part.split("&"):
                raw = raw.strip()
                if raw == "true":
                    continue
                m = _CLAUSE.match(raw)
                if not m:
                    raise ValueError(f"bad predicate clause {raw!r}")
                x, t, op, sym = m.groups()
                conj.append((SitePoint(int(x), int(t)), op, sym))
            disjuncts.append(tuple(conj))
        return cls(text, tuple(disjuncts))

    def points(self) -> set:
        return {p for conj in self.disjuncts for p, _, _ in conj}

    def mentions_only(self, region: Region) -> bool:
        return self.points() <= set(region.points)

    def __call__(self, values: dict) -> bool:
        for conj in self.disjuncts:
            if all((values[p] == s) == (op == "=") for p, op, s in conj):
                return True
        return False

    def __str__(self):
        return self.text


def pred(text: str) -> Predicate:
    return Predicate.parse(text)
