"""Batch runs over the zoo or a set of model files."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import zoo
from .modelfile import parse_model
from .report import Options, Report, error_report, run_check, run_expectation
from .wiring import AtPreparation, AtPreparationPlus, ThickSlices

SPACETIME_CHECKS = (
    "deterministic",
    "locally-deterministic",
    "local-causality-fine",
    "local-causality-coarse",
    "temporal-locality",
)
WIRED_CHECKS = (
    "factorizability:preparation",
    "settings-independence:preparation",
    "factorizability:preparation-plus",
    "settings-independence:preparation-plus",
    "factorizability:thick-slices",
    "settings-independence:thick-slices",
    "settings-compatibility",
    "derivation",
    "chsh",
)


def zoo_entries() -> list:
    return zoo.all_entries() + [zoo.reversible_ca("single"), zoo.reversible_ca("two")]


def _run_zoo_entry(name: str) -> list:
    entry = zoo.by_name(name)
    out = []
    for key in sorted(entry.expected):
        try:
            rep = run_expectation(entry, key)
        except Exception as exc:  # reported per entry; the suite carries on
            rep = error_report(entry.name, key, exc)
        rep.expected = str(entry.expected[key])
        out.append(rep.to_dict())
    return out


_SPECS = {
    "preparation": AtPreparation(),
    "preparation-plus": AtPreparationPlus(),
    "thick-slices": ThickSlices(),
}


def applicable_checks(model, wiring) -> list:
    if model.is_predictions_only:
        return ["chsh"]
    return list(SPACETIME_CHECKS) + (list(WIRED_CHECKS) if wiring is not None else [])


def _run_path(path: str) -> list:
    try:
        model, wiring = parse_model(path)
    except Exception as exc:
        rep = error_report(Path(path).stem, "parse", exc)
        return [dict(rep.to_dict(), source=str(path))]
    out = []
    for key in applicable_checks(model, wiring):
        checker, _, arg = key.partition(":")
        opts = Options(spec=_SPECS.get(arg, ThickSlices()))
        if checker.startswith("local-causality"):
            opts.coarse = checker.endswith("coarse")
            checker = "local-causality"
        try:
            rep = run_check(model, wiring, checker, opts)
        except Exception as exc:
            rep = error_report(model.name, key, exc)
        rep.checker = key
        out.append(dict(rep.to_dict(), source=str(path)))
    return out


def expand_paths(paths) -> list:
    files = []
    for p in paths:
        p = Path(p)
        files.extend(sorted(p.glob("*.hvt")) if p.is_dir() else [p])
    return [str(f) for f in files]


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def default_jobs() -> int:
    return max(1, min(4, os.cpu_count() or 1))


def run_suite(target, jobs: int | None = None) -> list:
    """Report dicts for ``"zoo"`` or a list of files/directories, in input order."""
    jobs = default_jobs() if jobs is None else jobs
    if target == "zoo":
        chunks = _map(_run_zoo_entry, [e.name for e in zoo_entries()], jobs)
    else:
        chunks = _map(_run_path, expand_paths(target), jobs)
    return [r for chunk in chunks for r in chunk]


def suite_exit_code(reports: list) -> int:
    if any(r.get("match") is False for r in reports):
        return 1
    if any(r["status"] == "Error" for r in reports):
        return 3
    return 0


def format_table(reports: list) -> str:
    rows = [("model", "checker", "status", "value", "expected", "ok")]
    for r in reports:
        ok = "" if "match" not in r else ("yes" if r["match"] else "NO")
        value = r["details"].get("error", "") if r["status"] == "Error" else r.get("value", "")
        rows.append((r["model"], r["checker"], r["status"], value, r.get("expected", ""), ok))
    widths = [max(len(str(row[i])) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


__all__ = ["Report", "run_suite", "suite_exit_code", "format_table", "zoo_entries", "applicable_checks"]
