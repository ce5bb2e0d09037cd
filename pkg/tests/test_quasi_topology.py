from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fsts.core import FSeqSet, FstsError, Space
from fsts.derived import enumerate_points
from fsts.quasi import WitnessIndex, q_fuzzy, q_point, q_sets, qw_point, qw_sets, qw_witnesses
from fsts.topology import (
    CapExceeded, ComponentFT, NotAnFST, base_condition_at, base_criterion, base_from_subbase, check_axioms,
    component, components_open, constants_family, finer, generate, is_base, lift, make_fst,
)

from conftest import GRID, P, S, sets_in, spaces


def test_q_needs_a_common_point(ab2):
    a = S(ab2, ("2/3", "1/3"), ("1/3", "2/3"), ("3/4", "3/4"))
    b = S(ab2, ("1/2", "2/3"), ("1/4", "3/7"), ("1/2", "1/2"))
    assert all(q_fuzzy(a.component(n), b.component(n)) for n in ab2.indices)
    assert not q_sets(a, b)
    assert qw_sets(a, b)


def test_q_skips_zero_components(ab2):
    a = S(ab2, (1, 0), (0, 0), (0, 0))
    b = S(ab2, ("1/2", 0), (1, 1), (0, 0))
    assert q_sets(a, b)
    assert not q_sets(FSeqSet.constant(ab2, 0), FSeqSet.constant(ab2, 1))


def test_witnesses(ab2):
    a = S(ab2, (1, 0), (0, 0), (0, "1/2"))
    b = S(ab2, ("1/2", 0), (1, 1), (0, 1))
    assert qw_witnesses(a, b) == [WitnessIndex("a", 1), WitnessIndex("b", 3)]


def test_point_q(ab2):
    a = S(ab2, ("1/2", 0), ("1/4", 0), (0, 0))
    p = P(ab2, "a", n1="3/4", n2="3/4")
    assert qw_point(p, a) and not q_point(p, a)


def test_generate_and_axioms(ab2):
    g = S(ab2, ("1/2", 0), ("1/2", 0), ("1/2", 0))
    h = S(ab2, (0, 1), (0, 1), (0, 1))
    t = generate(ab2, [g, h])
    assert len(t) == 5  # 0, 1, g, h, g | h
    assert check_axioms(t.opens).valid
    bad = check_axioms([FSeqSet.constant(ab2, 0), g, h])
    assert {v.clause for v in bad.violations} == {"constants", "join"}
    with pytest.raises(NotAnFST):
        make_fst([FSeqSet.constant(ab2, 0), g])


def test_generate_cap():
    sp = Space(("a", "b", "c"), 3)
    subbase = [FSeqSet.constant(sp, Fraction(i, 30)).join(S(sp, *[(Fraction(i, 31), 0, 0)] * 4)) for i in range(1, 25)]
    with pytest.raises(CapExceeded):
        generate(sp, subbase)


def test_finer_direction(ab2):
    g = S(ab2, ("1/2", 0), ("1/2", 0), ("1/2", 0))
    small = generate(ab2, [])
    big = generate(ab2, [g])
    assert finer(small, big) and not finer(big, small)


def test_lift_and_components(ab2):
    delta = ComponentFT(ab2, None, frozenset({(0, 0), (Fraction(1, 2), 0), (1, 1)}))
    prod = lift(ab2, delta, "product")
    const = lift(ab2, delta, "constant")
    assert len(prod) == 27 and len(const) == 3
    assert finer(const, prod)
    assert component(prod, 2).opens == delta.opens
    with pytest.raises(FstsError):
        lift(ab2, ComponentFT(ab2, None, frozenset({(0, 0)})), "product")


def test_open_components_converse():
    sp = Space(("x",), 3)
    t = make_fst(constants_family(sp, GRID))
    a = S(sp, ("1/4",), ("1/2",), ("3/4",), (1,))
    assert all(components_open(a, t)) and not t.is_open(a)


def test_base_checks():
    sp = Space(("x",), 2)
    delta = ComponentFT(sp, None, frozenset((g,) for g in GRID))
    t = lift(sp, delta, "product")
    beta = constants_family(sp, GRID)
    assert all(component(t, k).is_base([b.component(k) for b in beta]) for k in sp.indices)
    assert not is_base(t, beta) and not base_criterion(t, beta)
    assert is_base(t, list(t.opens)) and base_criterion(t, list(t.opens))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_base_criterion_matches_exhaustive_points(data):
    sp = data.draw(st.builds(Space, st.sampled_from([("a",), ("a", "b")]), st.integers(1, 2)))
    subbase = data.draw(st.lists(sets_in(sp, (0, Fraction(1, 2), 1)), max_size=3))
    t = generate(sp, subbase)
    keep = data.draw(st.lists(st.booleans(), min_size=len(t), max_size=len(t)))
    beta = [o for o, k in zip(t.opens, keep) if k]
    grid = sorted({1 - v for o in t.opens for row in o.rows for v in row} | set(GRID))
    everywhere = all(base_condition_at(t, beta, p) for p in enumerate_points(sp, grid, len(sp.indices)))
    assert base_criterion(t, beta) == is_base(t, beta) == everywhere


@given(st.data())
def test_generated_families_are_topologies(data):
    sp = data.draw(spaces)
    subbase = data.draw(st.lists(sets_in(sp, (0, Fraction(1, 2), 1)), max_size=3))
    t = generate(sp, subbase)
    assert check_axioms(t.opens).valid
    assert all(t.is_open(s) for s in subbase)
    assert len(base_from_subbase(sp, subbase)) <= 2 ** len(subbase)
    assert all(component(t, k).valid for k in sp.indices)
