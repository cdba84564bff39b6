from pathlib import Path

import pytest

from hvtcheck import core
from hvtcheck.errors import ParseError, ValidationError
from hvtcheck.modelfile import format_model, parse_model, parse_model_text, parse_partition_text
from hvtcheck.suite import zoo_entries

MODELS = Path(__file__).resolve().parent.parent / "models"

IDENTITY = """\
model ident
lattice width=5 height=2
alphabet 0 1
law local-deterministic radius=1
""" + "".join(f"rule {a},{b},{c}->{b}\n" for a in "01" for b in "01" for c in "01")


def with_measure(*lines):
    return IDENTITY + "".join(line + "\n" for line in lines)


@pytest.mark.parametrize("entry", zoo_entries(), ids=lambda e: e.name)
def test_zoo_round_trip(entry):
    text = format_model(entry.model, entry.wiring)
    model, wiring = parse_model_text(text)
    assert format_model(model, wiring) == text
    assert model.measure == entry.model.measure
    assert (wiring is None) == (entry.wiring is None)


@pytest.mark.parametrize("path", sorted(MODELS.glob("*.hvt")), ids=lambda p: p.name)
def test_shipped_files_parse(path):
    model, _ = parse_model(path)
    assert model.name == path.stem


def test_minimal_file_parses():
    model, wiring = parse_model_text(with_measure("measure uniform"))
    assert wiring is None
    assert len(model.measure) == 32
    assert core.check_deterministic(model).passed


def test_comments_and_blank_lines_ignored():
    model, _ = parse_model_text("# header\n\n" + with_measure("measure 0,0,0,0,0 1/1   # all zero"))
    assert model.support() == [("0",) * 5]


def test_measure_not_summing_to_one():
    with pytest.raises(ValidationError, match="9/10"):
        parse_model_text(with_measure("measure 0,0,0,0,0 9/10"))


def test_partial_rule_table():
    text = with_measure("measure uniform").replace("rule 1,1,1->1\n", "")
    with pytest.raises(ValidationError, match="misses"):
        parse_model_text(text)


def test_syntax_error_carries_line_number():
    text = with_measure("measure uniform", "frobnicate 3")
    with pytest.raises(ParseError) as info:
        parse_model_text(text)
    assert info.value.line == text.count("\n")
    assert "line" in str(info.value)


def test_bad_rule_line_number():
    text = IDENTITY.replace("rule 0,1,0->1", "rule 0,1->1")
    with pytest.raises(ParseError) as info:
        parse_model_text(text)
    assert info.value.line == 7


def test_partition_file():
    text = (
        "region (5,2)+(6,2)\n"
        "cell same: (5,2)=0 & (6,2)=0 | (5,2)=1 & (6,2)=1\n"
        "cell diff: (5,2)=0 & (6,2)=1 | (5,2)=1 & (6,2)=0\n"
    )
    region, cells = parse_partition_text(text)
    assert len(region) == 2
    assert [label for label, _ in cells] == ["same", "diff"]
    p = dict(cells)["diff"]
    assert p({(5, 2): "1", (6, 2): "0"}) and not p({(5, 2): "1", (6, 2): "1"})


def test_partition_file_needs_cells():
    with pytest.raises(ValidationError):
        parse_partition_text("region (5,2)\n")
    with pytest.raises(ParseError):
        parse_partition_text("region (5,2)\ncell nocolon (5,2)=0\n")
