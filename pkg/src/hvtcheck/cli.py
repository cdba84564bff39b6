"""Command line entry point: ``hvt check|chsh|suite|export-zoo``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import zoo
from .core import BUDGET_ENV
from .errors import HVTError
from .modelfile import parse_model, parse_partition_text, write_model
from .report import CHECKERS, Options, dumps, run_check
from .suite import format_table, run_suite, suite_exit_code, zoo_entries
from .verdict import FAIL, PASS, VACUOUS
from .wiring import AtPreparation, AtPreparationPlus, ThickSlices

EXIT = {PASS: 0, FAIL: 1, VACUOUS: 2}
EXIT_ERROR = 3


def _load(ref: str):
    """A model file path, or ``zoo:<name>`` for a built-in entry."""
    if ref.startswith("zoo:"):
        e = zoo.by_name(ref[4:])
        return e.model, e.wiring, e.families
    model, wiring = parse_model(ref)
    return model, wiring, {}


def _options(args, families) -> Options:
    opts = Options(direction=args.direction, external_settings=args.external_settings)
    lam = args.lam or "thick-slices"
    if lam == "preparation":
        opts.spec = AtPreparation()
    elif lam == "preparation-plus":
        opts.spec = AtPreparationPlus(args.radius)
    elif lam == "thick-slices":
        opts.spec = ThickSlices(args.t, args.tprime)
    elif lam.startswith("coarse:"):
        opts.coarse_file = parse_partition_text(Path(lam[7:]).read_text())
    else:
        raise HVTError(f"unknown --lambda {lam!r}")
    opts.coarse = args.coarse
    if args.family is not None:
        if args.family not in families:
            raise HVTError(f"model has no family {args.family!r}; known: {sorted(families)}")
        opts.family = families[args.family]
    return opts


def _print_report(rep, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(dumps(rep.to_dict()))
        return
    head = f"{rep.model}  {rep.checker}"
    if rep.lam:
        head += f"  [{rep.lam}]"
    print(f"{head}: {rep.value or rep.status}")
    print(f"  checked {rep.checked}, skipped {rep.skipped}")
    if rep.witness:
        print(f"  witness: {rep.witness.get('lhs', '')} != {rep.witness.get('rhs', '')}")
        sys.stdout.write("  " + dumps(rep.witness).replace("\n", "\n  ").rstrip() + "\n")
    for n in rep.notes:
        print(f"  note: {n}")


def cmd_check(args) -> int:
    model, wiring, families = _load(args.model)
    rep = run_check(model, wiring, args.checker, _options(args, families), timing=args.timing)
    _print_report(rep, args.json)
    return EXIT.get(rep.status, EXIT_ERROR)


def cmd_chsh(args) -> int:
    model, wiring, _ = _load(args.model)
    rep = run_check(model, wiring, "chsh", Options(external_settings=args.external_settings))
    if args.json:
        sys.stdout.write(dumps(rep.to_dict()))
    else:
        print(rep.value)
    return 0


def cmd_suite(args) -> int:
    target = "zoo" if args.targets == ["zoo"] else args.targets
    reports = run_suite(target, args.jobs)
    table = format_table(reports)
    if args.json:
        sys.stdout.write(dumps(reports))
        sys.stderr.write(table)
    else:
        sys.stdout.write(table)
    return suite_exit_code(reports)


def cmd_export(args) -> int:
    out = Path(args.directory)
    out.mkdir(parents=True, exist_ok=True)
    for e in zoo_entries():
        write_model(out / f"{e.name}.hvt", e.model, e.wiring)
        print(out / f"{e.name}.hvt")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hvt", description="Exact checks of hidden-variable conditions.")
    p.add_argument("--budget", type=int, help=f"solution enumeration cap (also ${BUDGET_ENV})")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run one checker on one model")
    c.add_argument("checker", choices=CHECKERS)
    c.add_argument("--model", required=True, help="model file, or zoo:<name>")
    c.add_argument("--lambda", dest="lam", metavar="SPEC",
                   help="preparation | preparation-plus | thick-slices | coarse:<file>")
    c.add_argument("--coarse", action="store_true", help="coarse-grained local causality")
    c.add_argument("--t", type=int, help="upper slice of the thick slices")
    c.add_argument("--tprime", type=int, help="lower slice of the thick slices")
    c.add_argument("--radius", type=int, default=1, help="widening for preparation-plus")
    c.add_argument("--direction", choices=("past", "future", "both"), default="both")
    c.add_argument("--family", help="time-indexed family (zoo models only)")
    c.add_argument("--external-settings", action="store_true",
                   help="settings set from outside the law; rejects Universality of Laws")
    c.add_argument("--json", action="store_true")
    c.add_argument("--timing", action="store_true", help="add wall_time (breaks byte-identity)")
    c.set_defaults(fn=cmd_check)

    h = sub.add_parser("chsh", help="print the CHSH value of a model")
    h.add_argument("--model", required=True)
    h.add_argument("--external-settings", action="store_true")
    h.add_argument("--json", action="store_true")
    h.set_defaults(fn=cmd_chsh)

    s = sub.add_parser("suite", help="run the zoo expectations, or every applicable check on files")
    s.add_argument("targets", nargs="+", help="'zoo', or model files and directories")
    s.add_argument("--json", action="store_true", help="JSON array on stdout, table on stderr")
    s.add_argument("--jobs", type=int, help="worker processes (default: up to 4)")
    s.set_defaults(fn=cmd_suite)

    x = sub.add_parser("export-zoo", help="write the zoo as model files")
    x.add_argument("directory")
    x.set_defaults(fn=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    saved = os.environ.get(BUDGET_ENV)
    if args.budget is not None:
        os.environ[BUDGET_ENV] = str(args.budget)
    try:
        return args.fn(args)
    except (HVTError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    finally:
        if saved is None:
            os.environ.pop(BUDGET_ENV, None)
        else:
            os.environ[BUDGET_ENV] = saved


if __name__ == "__main__":
    sys.exit(main())
