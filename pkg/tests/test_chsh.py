import itertools
import math
from fractions import Fraction

import pytest

from hvtcheck import chsh, zoo
from hvtcheck.errors import BadTable, NullSettings, UnsupportedAngle
from hvtcheck.exact import QSqrt2
from hvtcheck.wiring import AtPreparation, ThickSlices


def test_sixteen_local_strategies_hit_plus_minus_two():
    vals = chsh.local_strategy_values()
    assert len(vals) == 16
    assert set(vals) == {2, -2}
    assert chsh.chsh_local_bound() == 2


def test_correlation_of_a_deterministic_strategy():
    tab = chsh.deterministic_table({"a": 1, "a'": -1}, {"b": 1, "b'": 1})
    assert chsh.correlation(tab, "a", "b") == 1
    assert chsh.correlation(tab, "a'", "b") == -1


def pr_oracle():
    """P(A,B|x,y) = 1/2 when A xor B equals x and y, in bits."""
    table = {}
    for (i, x), (j, y) in itertools.product(enumerate(("a", "a'")), enumerate(("b", "b'"))):
        for A, B in itertools.product((1, -1), repeat=2):
            bitA, bitB = int(A == -1), int(B == -1)
            table[(x, y, A, B)] = Fraction(1, 2) if (bitA ^ bitB) == (i & j) else Fraction(0)
    return table


def test_pr_spacetime_reproduces_pr_table(pr):
    tab = chsh.model_to_table(pr.model, pr.wiring)
    assert tab.table == pr_oracle()
    assert chsh.chsh_value(tab) == 4


def test_singlet_exact_and_float():
    s = chsh.chsh_value(chsh.model_to_table(zoo.singlet_table().model, None))
    assert s == QSqrt2(0, -2)
    f = chsh.chsh_value(chsh.model_to_table(zoo.singlet_table(float_mode=True).model, None))
    assert math.isclose(f, -2 * math.sqrt(2), abs_tol=1e-12)


def test_singlet_in_radians_matches_quarter_units():
    rad = [k * math.pi / 4 for k in zoo.STANDARD_ANGLES]
    s = chsh.chsh_value(chsh.model_to_table(zoo.singlet_table(rad, unit="radian").model, None))
    assert s == QSqrt2(0, -2)


def test_off_grid_angle_needs_float_mode():
    with pytest.raises(UnsupportedAngle):
        zoo.singlet_table((0, 0.3, 1, 2), unit="radian")
    zoo.singlet_table((0, 0.3, 1, 2), unit="radian", float_mode=True)


def table_of(fn):
    return {(x, y, A, B): fn(x, y, A, B)
            for x in ("a", "a'") for y in ("b", "b'") for A in (1, -1) for B in (1, -1)}


@pytest.mark.parametrize(
    "table",
    [
        table_of(lambda *k: Fraction(1, 3)),
        table_of(lambda x, y, A, B: Fraction(1, 2) if A == B else Fraction(1, 2) * (-1 if A == 1 else 0)),
        {k: v for k, v in table_of(lambda *k: Fraction(1, 4)).items() if k[2] == 1},
    ],
)
def test_bad_tables_rejected(table):
    with pytest.raises(BadTable):
        chsh.chsh_value(chsh.CorrelationTable(table, ("a", "a'"), ("b", "b'")))


def test_missing_settings_pair_raises():
    e = zoo.reversible_ca("single")
    with pytest.raises(NullSettings):
        chsh.model_to_table(e.model, e.wiring)


def test_true_spin_per_lambda_bound(spin):
    tables = chsh.lambda_tables(spin.model, spin.wiring, AtPreparation())
    assert len(tables) == 16
    assert max(abs(chsh.chsh_value(t)) for t in tables.values()) == 2


def test_per_lambda_tables_need_every_settings_pair(rev):
    with pytest.raises(NullSettings):
        chsh.lambda_tables(rev.model, rev.wiring, ThickSlices())
