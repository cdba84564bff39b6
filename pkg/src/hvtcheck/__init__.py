"""Exact checkers for hidden-variable conditions on finite lattice models."""

from .core import (
    Alphabet,
    HVTModel,
    LocalDeterministic,
    LocalStochastic,
    GlobalDeterministic,
    PredictionsOnly,
    RegionBounds,
    check_deterministic,
    check_locally_deterministic,
    enumerate_solutions,
)
from .errors import HVTError
from .spacetime import Lattice, Region
from .verdict import FAIL, PASS, VACUOUS, Verdict
from .wiring import AtPreparation, AtPreparationPlus, BellWiring, CoarseFamily, ThickSlices, TimeFamily

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AtPreparation",
    "AtPreparationPlus",
    "BellWiring",
    "CoarseFamily",
    "FAIL",
    "GlobalDeterministic",
    "HVTError",
    "HVTModel",
    "Lattice",
    "LocalDeterministic",
    "LocalStochastic",
    "PASS",
    "PredictionsOnly",
    "Region",
    "RegionBounds",
    "ThickSlices",
    "TimeFamily",
    "VACUOUS",
    "Verdict",
    "check_deterministic",
    "check_locally_deterministic",
    "enumerate_solutions",
]
