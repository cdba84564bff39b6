from fractions import Fraction

import pytest

from hvtcheck.core import RegionState, enumerate_solutions, restrict
from hvtcheck.errors import NullCondition, ParseError, PreconditionFailed
from hvtcheck.predicates import Predicate, pred
from hvtcheck.probability import (
    CoarseEvent,
    Partition,
    ProbSpace,
    chain_rule_holds,
    check_bridge_principle,
    coarse_union_independence_check,
    cond_prob,
    independent,
    prob,
    total_probability_holds,
)
from hvtcheck.spacetime import Region


@pytest.fixture(scope="module")
def space(stoch):
    return ProbSpace(enumerate_solutions(stoch.model), stoch.model.lattice)


def brute(space, pt, sym, given=None):
    """Oracle: sum weights straight off the solutions."""
    lat = space.lattice
    i = lat.index(pt)
    gi = None if given is None else (lat.index(given[0]), given[1])
    num = den = Fraction(0)
    for s in space.solutions:
        if gi is not None and s.values[gi[0]] != gi[1]:
            continue
        den += s.weight
        if s.values[i] == sym:
            num += s.weight
    return num / den


def ev(text, *pts):
    return CoarseEvent(Region(pts), pred(text), text)


def at(space, pt, k=-1):
    return space.solutions[k].values[space.lattice.index(pt)]


def test_marginals_match_oracle(space):
    sym = at(space, (5, 4))
    got = prob(space, ev(f"(5,4)={sym}", (5, 4)))
    assert 0 < got == brute(space, (5, 4), sym)


def test_conditional_matches_oracle(space):
    sym, out = at(space, (5, 1)), at(space, (5, 4))
    got = cond_prob(space, ev(f"(5,4)={out}", (5, 4)), ev(f"(5,1)={sym}", (5, 1)))
    assert 0 < got == brute(space, (5, 4), out, ((5, 1), sym))


def test_null_condition_raises(space):
    with pytest.raises(NullCondition):
        cond_prob(space, None, frozenset())


def test_trivial_event_is_independent(space):
    e = ev("(5,4)=Hr", (5, 4))
    assert independent(space, e, None)


def test_bridge_principle_on_determined_state(rev):
    space = ProbSpace(enumerate_solutions(rev.model), rev.model.lattice)
    s = space.solutions[0]
    lat = rev.model.lattice
    initial = restrict(s, lat.slice(0), lat)
    final = restrict(s, Region([(9, 5)]), lat)
    v = check_bridge_principle(space, initial, final)
    assert v.passed and v.details["cond_prob"] == "1/1" and v.details["antecedent"] == "all"


def test_union_of_disjoint_independent_events(rev):
    space = ProbSpace(enumerate_solutions(rev.model), rev.model.lattice)
    x = ev("(1,0)=0", (1, 0))
    x2 = ev("(1,0)=1", (1, 0))
    y = ev("(17,0)=1", (17, 0))
    if independent(space, x, y) and independent(space, x2, y):
        assert coarse_union_independence_check(space, x, x2, y).passed
    with pytest.raises(PreconditionFailed):
        coarse_union_independence_check(space, x, x, y)


def test_partition_must_cover_and_be_disjoint(space):
    r = Region([(5, 4)])
    full = Partition.by_label(space, r, lambda d: d[(5, 4)])
    assert sorted(full.labels()) == sorted(set(v[0] for v in space.realized_states(r)))
    assert "cells over 1 sites" in repr(full)
    with pytest.raises(PreconditionFailed):
        Partition([full.cells[0]], space)
    with pytest.raises(PreconditionFailed):
        Partition(list(full.cells) + [full.cells[0]], space)


def test_total_probability_and_chain_rule(space):
    r = Region([(5, 4)])
    part = Partition.complete(space, r)
    lat = space.lattice
    first = space.solutions[0].values
    a = ev(f"(13,4)={first[lat.index((13, 4))]}", (13, 4))
    b = ev(f"(5,4)={first[lat.index((5, 4))]}", (5, 4))
    assert total_probability_holds(space, a, part)
    assert chain_rule_holds(space, a, b, None)


def test_region_state_round_trip(rev):
    lat = rev.model.lattice
    sols = enumerate_solutions(rev.model)
    st = restrict(sols[0], Region([(5, 4), (6, 4)]), lat)
    assert isinstance(st, RegionState)
    hits = CoarseEvent.state(st).select(ProbSpace(sols, lat))
    assert 0 in hits
    assert all(restrict(sols[i], st.region, lat) == st for i in hits)


class TestPredicates:
    def test_parse_and_evaluate(self):
        p = Predicate.parse("(1,0)=a & (2,0)!=b | (3,1)=c")
        assert p({(1, 0): "a", (2, 0): "a", (3, 1): "z"})
        assert not p({(1, 0): "a", (2, 0): "b", (3, 1): "z"})
        assert p({(1, 0): "z", (2, 0): "b", (3, 1): "c"})
        assert {(pt.x, pt.t) for pt in p.points()} == {(1, 0), (2, 0), (3, 1)}

    def test_true(self):
        assert pred("true")({})

    def test_text_is_preserved(self):
        assert str(pred("(1,0)=a")) == "(1,0)=a"

    @pytest.mark.parametrize("bad", ["(1,0)", "x=1", "(1,0)=", "(1,0)=a &"])
    def test_syntax_errors(self, bad):
        with pytest.raises((ParseError, ValueError)):
            Predicate.parse(bad)
