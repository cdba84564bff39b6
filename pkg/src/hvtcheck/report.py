"""Machine-readable reports and the checker registry used by the CLI and suite."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from . import bell, chsh
from .core import check_deterministic, check_locally_deterministic
from .errors import HVTError, UnsupportedLawKind
from .exact import format_number, parse_number
from .probability import CoarseEvent, Partition
from .verdict import FAIL, PASS, VACUOUS, Verdict
from .wiring import (
    AtPreparation,
    AtPreparationPlus,
    CoarseFamily,
    ThickSlices,
    context,
)

SCHEMA_VERSION = 1
MEASURE_NOTE = "probabilities are induced by the model's initial measure, which is model input"
EXTERNAL_NOTE = "external settings override the model's own law (rejects Universality of Laws)"
SEARCH_NOTE = "search ranges over all partitions of realized states, not only definable ones"


@dataclass
class Options:
    spec: object = field(default_factory=ThickSlices)
    coarse: bool = False
    direction: str = "both"
    external_settings: bool = False
    coarse_file: Optional[tuple] = None  # (Region, [(label, Predicate)])
    family: Optional[object] = None


@dataclass
class Report:
    model: str
    checker: str
    status: str
    lam: Optional[str] = None
    witness: Optional[dict] = None
    checked: int = 0
    skipped: int = 0
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    value: Optional[str] = None
    approx: bool = False
    wall_time: Optional[float] = None
    expected: Optional[str] = None

    def to_dict(self) -> dict:
        d = {
            "schema": SCHEMA_VERSION,
            "model": self.model,
            "checker": self.checker,
            "lambda": self.lam,
            "status": self.status,
            "witness": self.witness,
            "checked": self.checked,
            "skipped": self.skipped,
            "details": self.details,
            "notes": self.notes,
        }
        if self.value is not None:
            d["value"] = self.value
        if self.approx:
            d["approx"] = True
        if self.wall_time is not None:
            d["wall_time"] = round(self.wall_time, 6)
        if self.expected is not None:
            d["expected"] = self.expected
            d["match"] = self.outcome() == self.expected
        return d

    def outcome(self) -> str:
        """What an expected-verdict table compares against."""
        if self.checker.split(":")[0] in ("chsh", "search"):
            return self.value
        return self.status

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(
            model=d["model"], checker=d["checker"], status=d["status"], lam=d.get("lambda"),
            witness=d.get("witness"), checked=d.get("checked", 0), skipped=d.get("skipped", 0),
            details=d.get("details", {}), notes=d.get("notes", []), value=d.get("value"),
            approx=d.get("approx", False), wall_time=d.get("wall_time"), expected=d.get("expected"),
        )


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("hvtcheck").joinpath("report_schema.json").read_text())


# -- checker registry -----------------------------------------------------------


def _coarse_spec(ctx, opts: Options):
    region, cells = opts.coarse_file
    events = [CoarseEvent(region, p, label) for label, p in cells]
    return CoarseFamily(Partition(events, ctx.space), "file")


def _resolve_spec(model, wiring, opts: Options):
    if opts.coarse_file is not None:
        ctx = context(model, wiring, opts.external_settings)
        return _coarse_spec(ctx, opts)
    return opts.spec


def _need_wiring(wiring):
    if wiring is None:
        raise HVTError("this checker needs a wiring block in the model file")


def run_verdict(checker: str, model, wiring, opts: Options):
    """Dispatch; returns (Verdict, lambda descriptor or None, value or None)."""
    ext = opts.external_settings
    if checker == "deterministic":
        _spacetime(model)
        return check_deterministic(model), None, None
    if checker == "locally-deterministic":
        _spacetime(model)
        return check_locally_deterministic(model, opts.direction), None, None
    if checker == "chsh":
        tab = chsh.model_to_table(model, wiring, ext)
        s = chsh.chsh_value(tab)
        value = repr(float(s)) if tab.approx else format_number(s)
        return Verdict.from_counts(None, 1, 0, abs_value=_abs(s, tab.approx)), None, value
    if checker in ("local-causality", "local-causality-fine", "local-causality-coarse"):
        coarse = opts.coarse or checker.endswith("coarse")
        if model.is_predictions_only:
            return bell._vacuous("predictions-only model has no spacetime states"), None, None
        if coarse:
            return bell.check_local_causality_coarse(model, wiring, (), ext), None, None
        return bell.check_local_causality_fine(model, wiring), None, None
    if checker == "temporal-locality":
        return bell.check_temporal_locality(model, wiring), None, None
    if checker == "settings-compatibility":
        if model.is_predictions_only:
            return bell._vacuous("predictions-only model has no spacetime states"), None, None
        _need_wiring(wiring)
        return bell.check_settings_compatibility(model, wiring, ext), "thick-slices", None
    _spacetime(model)
    _need_wiring(wiring)
    spec = _resolve_spec(model, wiring, opts)
    if checker == "factorizability":
        return bell.check_factorizability(model, wiring, spec, ext), spec.descriptor, None
    if checker == "settings-independence":
        return bell.check_settings_independence(model, wiring, spec, ext), spec.descriptor, None
    if checker == "sufficiency":
        return bell.check_sufficiency(model, wiring, spec, ext), spec.descriptor, None
    if checker == "derivation":
        rep = bell.derive_factorizability_from_lc(model, wiring, ext)
        v = rep.verdict()
        v.details["first_failure"] = rep.first_failure
        return v, "thick-slices", None
    if checker == "search":
        stats: dict = {}
        part = bell.search_coarse_graining(model, wiring, spec=spec if isinstance(spec, ThickSlices) else ThickSlices(), stats=stats)
        details = {"examined": stats.get("examined", 0)}
        if part is not None:
            details["cells"] = [
                {"label": c.label, "states": sorted(list(s) for s in _cell_states(c, model, wiring))}
                for c in part.cells
            ]
        v = Verdict(PASS if part is not None else FAIL, None, details["examined"], 0, details)
        return v, "thick-slices", "Some" if part is not None else "None"
    if checker in ("A1", "A2", "factorizability-tilde", "settings-independence-tilde"):
        if opts.family is None:
            raise HVTError(f"{checker} needs a time-indexed family")
        fn = {
            "A1": bell.check_A1,
            "A2": bell.check_A2,
            "factorizability-tilde": bell.check_factorizability_tilde,
            "settings-independence-tilde": bell.check_settings_independence_tilde,
        }[checker]
        return fn(model, wiring, opts.family), f"family:{opts.family.name}", None
    raise HVTError(f"unknown checker {checker!r}")


def _cell_states(cell, model, wiring):
    ctx = context(model, wiring)
    sel = cell.select(ctx.space)
    proj = ctx.space.projections(ctx.space.indices(cell.region))
    return {proj[i] for i in sel}


def _abs(s, approx):
    return repr(abs(float(s))) if approx else format_number(abs(s))


def _spacetime(model):
    if model.is_predictions_only:
        raise UnsupportedLawKind("this checker needs a spacetime model")


CHECKERS = (
    "deterministic",
    "locally-deterministic",
    "factorizability",
    "settings-independence",
    "settings-compatibility",
    "local-causality",
    "derivation",
    "sufficiency",
    "search",
    "temporal-locality",
    "chsh",
    "A1",
    "A2",
    "factorizability-tilde",
    "settings-independence-tilde",
)


def run_check(model, wiring, checker: str, opts: Optional[Options] = None, timing=False) -> Report:
    opts = opts or Options()
    start = time.perf_counter()
    verdict, lam, value = run_verdict(checker, model, wiring, opts)
    notes = []
    if not model.is_predictions_only:
        notes.append(MEASURE_NOTE)
    if opts.external_settings:
        notes.append(EXTERNAL_NOTE)
    if checker == "search":
        notes.append(SEARCH_NOTE)
    approx = bool(getattr(model.law, "approx", False))
    name = checker
    if checker == "local-causality":
        name = "local-causality-coarse" if opts.coarse else "local-causality-fine"
    return Report(
        model=model.name,
        checker=name,
        status=verdict.status,
        lam=lam,
        witness=verdict.witness,
        checked=verdict.checked,
        skipped=verdict.skipped,
        details=verdict.details,
        notes=notes,
        value=value,
        approx=approx,
        wall_time=time.perf_counter() - start if timing else None,
    )


def error_report(model_name: str, checker: str, exc: Exception) -> Report:
    return Report(model_name, checker, "Error", details={"error": f"{type(exc).__name__}: {exc}"})


# -- expectations for the zoo suite ------------------------------------------------


def run_expectation(entry, key: str) -> Report:
    """Run the check behind one key of a zoo entry's expected table."""
    checker, _, arg = key.partition(":")
    opts = Options()
    specs = {"preparation": AtPreparation(), "preparation-plus": AtPreparationPlus(), "thick-slices": ThickSlices()}
    if checker == "chsh-abs-le-2":
        rep = run_check(entry.model, entry.wiring, "chsh")
        within = abs(parse_number(rep.value)) <= 2 if not rep.approx else abs(float(rep.value)) <= 2
        rep.checker = key
        rep.status = PASS if within else FAIL
        rep.value = None
        return rep
    if checker == "sufficiency" and arg == "trivial":
        ctx = context(entry.model, entry.wiring)
        region = ctx.lam(ThickSlices()).region
        part = Partition.by_label(ctx.space, region, lambda d: "all")
        opts.spec = CoarseFamily(part, "trivial")
    elif arg in specs:
        opts.spec = specs[arg]
    elif arg:
        opts.family = entry.families[arg]
    if checker in ("local-causality-fine", "local-causality-coarse"):
        opts.coarse = checker.endswith("coarse")
        checker = "local-causality"
    rep = run_check(entry.model, entry.wiring, checker, opts)
    rep.checker = key
    return rep
