import json
import shutil
from pathlib import Path

import jsonschema
import pytest

from hvtcheck.cli import main
from hvtcheck.report import Report, load_schema

MODELS = Path(__file__).resolve().parent.parent / "models"
REV = str(MODELS / "reversible_ca.hvt")
PR = str(MODELS / "pr_box_spacetime.hvt")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_coarse_local_causality_passes(capsys):
    code, out, _ = run(capsys, "check", "local-causality", "--coarse", "--model", REV)
    assert code == 0 and "local-causality-coarse: Pass" in out


def test_settings_independence_fails_with_witness(capsys):
    code, out, _ = run(capsys, "check", "settings-independence", "--lambda", "thick-slices", "--model", REV, "--json")
    assert code == 1
    rep = json.loads(out)
    jsonschema.validate(rep, load_schema())
    assert rep["status"] == "Fail" and rep["witness"]["rhs"] == "1/16"
    assert Report.from_dict(rep).to_dict() == rep


def test_json_is_byte_identical(capsys):
    args = ("check", "factorizability", "--model", PR, "--json")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "check", "deterministic", "--model", REV, "--json")
    assert "wall_time" not in json.loads(out)
    _, out, _ = run(capsys, "check", "deterministic", "--model", REV, "--json", "--timing")
    assert json.loads(out)["wall_time"] >= 0


def test_chsh_command(capsys):
    assert run(capsys, "chsh", "--model", str(MODELS / "singlet.hvt"))[1].strip() == "(0-2*sqrt2)/1"
    assert run(capsys, "chsh", "--model", PR)[1].strip() == "4/1"


def test_spacetime_check_on_table_is_an_error(capsys):
    code, _, err = run(capsys, "check", "factorizability", "--model", str(MODELS / "singlet.hvt"))
    assert code == 3 and "spacetime" in err


def test_vacuous_exit_code(capsys):
    code, out, _ = run(capsys, "check", "local-causality", "--model", str(MODELS / "singlet.hvt"))
    assert code == 2 and "Vacuous" in out


def test_budget_flag(capsys):
    code, _, err = run(capsys, "--budget", "2", "check", "deterministic", "--model", REV)
    assert code == 3 and "budget" in err.lower()


def test_lambda_variants(capsys):
    assert run(capsys, "check", "settings-independence", "--lambda", "preparation", "--model", REV)[0] == 0
    assert run(capsys, "check", "settings-independence", "--lambda", "preparation-plus", "--radius", "1",
               "--model", REV)[0] == 1
    assert run(capsys, "check", "factorizability", "--t", "3", "--tprime", "1", "--model", REV)[0] == 0


def test_coarse_lambda_file(tmp_path, capsys):
    part = tmp_path / "cells.txt"
    part.write_text("region (9,0)\ncell h0: (9,0)=h0\ncell h1: (9,0)=h1\n")
    code, out, _ = run(capsys, "check", "factorizability", "--lambda", f"coarse:{part}", "--model", PR, "--json")
    rep = json.loads(out)
    assert code == 1 and rep["lambda"] == "coarse:file"


def test_external_settings_flag(capsys):
    code, out, _ = run(capsys, "check", "settings-independence", "--external-settings", "--model", REV, "--json")
    rep = json.loads(out)
    assert code == 0 and any("Universality of Laws" in n for n in rep["notes"])


def test_zoo_families_by_name(capsys):
    code, _, _ = run(capsys, "check", "A1", "--model", "zoo:true_spin", "--family", "left-carrier-position")
    assert code == 1
    code, _, err = run(capsys, "check", "A1", "--model", "zoo:true_spin", "--family", "nope")
    assert code == 3 and "family" in err


def test_suite_zoo_json_is_schema_valid(capsys):
    code, out, err = run(capsys, "suite", "zoo", "--json", "--jobs", "2")
    reports = json.loads(out)
    jsonschema.validate(reports, load_schema())
    assert code == 0 and all(r["match"] for r in reports)
    assert "expected" in err


def test_suite_directory_with_broken_file(tmp_path, capsys):
    for name in ("reversible_ca.hvt", "singlet.hvt"):
        shutil.copy(MODELS / name, tmp_path / name)
    (tmp_path / "broken.hvt").write_text("model broken\nlattice width=3\nnonsense\n")
    code, out, _ = run(capsys, "suite", str(tmp_path), "--json", "--jobs", "1")
    reports = json.loads(out)
    by_model = {}
    for r in reports:
        by_model.setdefault(r["model"], []).append(r)
    assert [r["status"] for r in by_model["broken"]] == ["Error"]
    assert "line" in by_model["broken"][0]["details"]["error"]
    assert all(r["status"] != "Error" for r in by_model["reversible_ca"])
    assert [r["value"] for r in by_model["singlet"]] == ["(0-2*sqrt2)/1"]
    assert code == 3


def test_export_zoo(tmp_path, capsys):
    code, out, _ = run(capsys, "export-zoo", str(tmp_path))
    assert code == 0
    written = sorted(p.name for p in tmp_path.glob("*.hvt"))
    assert written == sorted(p.name for p in MODELS.glob("*.hvt"))
    for name in written:
        assert (tmp_path / name).read_text() == (MODELS / name).read_text()


def test_unknown_checker_rejected_by_argparse(capsys):
    with pytest.raises(SystemExit):
        main(["check", "nonsense", "--model", REV])
