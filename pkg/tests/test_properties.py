"""Property-based checks of the exact arithmetic, probability layer and parsers."""

import itertools
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from hvtcheck import chsh, core, zoo
from hvtcheck.core import Alphabet, HVTModel, LocalDeterministic, LocalStochastic, enumerate_solutions
from hvtcheck.exact import QSqrt2, format_number, parse_number
from hvtcheck.modelfile import format_model, parse_model_text
from hvtcheck.predicates import pred
from hvtcheck.probability import CoarseEvent, Partition, ProbSpace, cond_prob, prob
from hvtcheck.spacetime import Lattice, Region
from hvtcheck.verdict import FAIL, PASS, VACUOUS, Verdict

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=40)
NBS = list(itertools.product("01", repeat=3))
LAT = Lattice(5, 2)


@given(fractions)
def test_fraction_text_round_trip(x):
    assert parse_number(format_number(x)) == x


@given(fractions, fractions.filter(lambda b: b != 0))
def test_surd_text_round_trip(a, b):
    q = QSqrt2(a, b)
    assert parse_number(format_number(q)) == q


@given(fractions, fractions, fractions, fractions)
def test_surd_arithmetic_tracks_floats(a, b, c, d):
    x, y = QSqrt2(a, b), QSqrt2(c, d)
    assert abs(float(x + y) - (float(x) + float(y))) < 1e-9
    assert abs(float(x * y) - float(x) * float(y)) < 1e-6
    if abs(float(x) - float(y)) > 1e-9:
        assert (x > y) == (float(x) > float(y))


@st.composite
def weights(draw, n):
    raw = draw(st.lists(st.integers(0, 5), min_size=n, max_size=n).filter(lambda w: sum(w) > 0))
    total = sum(raw)
    return [Fraction(w, total) for w in raw]


@st.composite
def stochastic_models(draw):
    kernel = {}
    for nb in NBS:
        p = draw(st.sampled_from([Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)]))
        kernel[nb] = {"0": 1 - p, "1": p}
    configs = list(itertools.product("01", repeat=5))
    chosen = draw(st.lists(st.sampled_from(configs), min_size=1, max_size=4, unique=True))
    ws = draw(weights(len(chosen)))
    measure = {c: w for c, w in zip(chosen, ws) if w}
    return HVTModel("random_stochastic", LAT, Alphabet("01"), LocalStochastic(kernel), measure)


@settings(max_examples=40, deadline=None)
@given(stochastic_models())
def test_solution_weights_normalize(model):
    sols = enumerate_solutions(model)
    assert sum(s.weight for s in sols) == 1
    assert all(s.weight > 0 for s in sols)


@settings(max_examples=40, deadline=None)
@given(stochastic_models(), st.sampled_from(list(LAT.points)), st.sampled_from(list(LAT.points)))
def test_law_of_total_probability(model, p, q):
    space = ProbSpace(enumerate_solutions(model), LAT)
    target = CoarseEvent(Region([p]), pred(f"({p.x},{p.t})=1"))
    part = Partition.complete(space, Region([q]))
    total = Fraction(0)
    for cell in part.cells:
        pc = prob(space, cell)
        if pc:
            total += cond_prob(space, target, cell) * pc
    assert total == prob(space, target)


@settings(max_examples=40, deadline=None)
@given(stochastic_models())
def test_model_file_round_trip(model):
    text = format_model(model)
    parsed, wiring = parse_model_text(text)
    assert wiring is None and parsed.measure == model.measure
    support = lambda k: {nb: {s: p for s, p in d.items() if p} for nb, d in k.items()}
    assert support(parsed.law.kernel) == support(model.law.kernel)
    assert format_model(parsed) == text


@settings(max_examples=30, deadline=None)
@given(st.dictionaries(st.sampled_from(NBS), st.sampled_from("01"), min_size=8, max_size=8))
def test_arbitrary_rules_obey_local_determinism_implies_determinism(table):
    measure = core.uniform_measure(itertools.product("01", repeat=5))
    model = HVTModel("r", LAT, Alphabet("01"), LocalDeterministic(table), measure)
    if core.check_locally_deterministic(model, "both").passed:
        assert core.check_deterministic(model).passed


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_random_reversible_models_are_locally_deterministic(seed):
    m = zoo.random_reversible(seed).model
    assert core.check_locally_deterministic(m, "both").passed
    assert core.check_deterministic(m).passed


@given(st.lists(st.integers(0, 6), min_size=16, max_size=16).filter(lambda w: sum(w) > 0))
def test_mixtures_of_local_strategies_respect_the_bound(raw):
    total = sum(raw)
    strategies = list(itertools.product((1, -1), repeat=4))
    table = {}
    for w, (fa, fa2, gb, gb2) in zip(raw, strategies):
        det = chsh.deterministic_table({"a": fa, "a'": fa2}, {"b": gb, "b'": gb2})
        for k, v in det.table.items():
            table[k] = table.get(k, 0) + Fraction(w, total) * v
    s = chsh.chsh_value(chsh.CorrelationTable(table, ("a", "a'"), ("b", "b'")))
    assert abs(s) <= 2


@given(st.lists(st.tuples(st.integers(0, 4), st.sampled_from("ab"), st.booleans()), min_size=1, max_size=4),
       st.lists(st.tuples(st.integers(0, 4), st.sampled_from("ab"), st.booleans()), min_size=1, max_size=3))
def test_predicate_matches_direct_evaluation(left, right):
    def conj(atoms):
        return " & ".join(f"({x},0){'!=' if neg else '='}{s}" for x, s, neg in atoms)

    def holds(atoms, d):
        return all((d[(x, 0)] != s) if neg else (d[(x, 0)] == s) for x, s, neg in atoms)

    p = pred(f"{conj(left)} | {conj(right)}")
    for vals in itertools.product("ab", repeat=5):
        d = {(x, 0): v for x, v in enumerate(vals)}
        assert p(d) == (holds(left, d) or holds(right, d))


@given(st.integers(0, 5), st.integers(0, 5), st.booleans())
def test_verdict_from_counts(checked, skipped, has_witness):
    v = Verdict.from_counts({"w": 1} if has_witness else None, checked, skipped)
    expected = FAIL if has_witness else (VACUOUS if checked == 0 else PASS)
    assert v.status == expected
