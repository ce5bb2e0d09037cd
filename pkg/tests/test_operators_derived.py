from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fsts.core import FSeqSet, Space, join_all
from fsts.derived import (
    Semantics, accumulation_points, accumulation_profile, closedness_suite, count_points, derived_set,
    derived_set_oracle, enumerate_points, is_accumulation, is_adherent, threshold_grid,
)
from fsts.operators import closure, component_closure_gap, duality_checks, identity_suite, interior, nbd
from fsts.topology import constants_family, generate, make_fst

from conftest import P, S, sets_in

STRONG = Semantics("strong")
WEAK = Semantics("weak")


@pytest.fixture
def chain():
    sp = Space(("s", "o"), 3)
    grid = [Fraction(i, 6) for i in range(7)]
    return sp, make_fst(constants_family(sp, grid))


def test_closure_interior_constants(chain):
    sp, t = chain
    a = P(sp, "s", n1="1/6", n2="1/3", n3="7/18", tail="5/12").embed()
    assert closure(t, a) == FSeqSet.constant(sp, "1/2")
    assert interior(t, a) == FSeqSet.constant(sp, 0)
    gap = component_closure_gap(t, a)
    assert gap.holds and gap.strict == [1, 2]


def test_nbd_kinds(ab2):
    g = S(ab2, ("1/2", 0), ("1/2", 0), ("1/2", 0))
    t = generate(ab2, [g])
    p = P(ab2, "a", n1="1/2")
    q = P(ab2, "a", n1="2/3")
    assert nbd(t, g, p) and not nbd(t, g, q)
    assert nbd(t, g, q, "weak_qnbd") and not nbd(t, g, p, "qnbd")


def test_identities_hold_on_chain(chain):
    sp, t = chain
    a = S(sp, ("1/6", 0), ("1/3", 0), (0, 1), ("1/2", "1/2"))
    b = S(sp, (0, "1/3"), (1, 0), ("1/6", 0), (0, 0))
    res = identity_suite(t, a, b)
    assert all(v for k, v in res.items() if k != "xii")


def test_interior_of_join_can_grow():
    sp = Space(("a", "b"), 1)
    t = generate(sp, [])
    a = S(sp, (1, 0), (1, 0))
    res = identity_suite(t, a, ~a)
    assert not res["x"]  # interior of X1 is X1, each half has interior 0


def test_sandwich_first_link_fails_for_two_index_point():
    sp = Space(("a",), 2)
    t = generate(sp, [S(sp, (1,), (0,), (0,))])
    a = S(sp, (0,), (1,), (1,))
    p = P(sp, "a", n1="1/2", n2="1/2")
    links = {l.name: l.holds for l in duality_checks(t, a, p).links}
    assert not links["sandwich-1"] and links["sandwich-2"]


def test_interior_dual_boundary_case():
    sp = Space(("x",), 1)
    t = generate(sp, [FSeqSet.constant(sp, "1/2")])
    a = FSeqSet.constant(sp, "1/2")
    p = P(sp, "x", n1="1/2")
    links = {l.name: l.holds for l in duality_checks(t, a, p).links}
    assert not links["interior-dual"]


def test_dual_links_skipped_for_full_grades(ab2):
    t = generate(ab2, [])
    rep = duality_checks(t, FSeqSet.constant(ab2, 0), P(ab2, "a", n1=1))
    assert rep.holds and all(l.skipped for l in rep.links if l.name != "sandwich-1" and l.name != "sandwich-2")


def test_example_model_derived_sets():
    sp = Space(("a", "b"), 3)
    pt = P(sp, "a", n1="1/2", n2=1, n3="3/10")
    g = S(sp, (0, 1), (0, 1), (0, 1), (0, 1))
    t = generate(sp, [pt.embed(), g])
    q = P(sp, "a", n3="3/10").embed()
    d = derived_set(t, q)
    assert d == (pt.embed() | g).complement()
    assert t.is_closed(d)


def test_post_reduction_example():
    sp = Space(("a", "b"), 2)
    t = generate(sp, [S(sp, ("1/2", 0), ("1/2", 0), ("1/2", 0))])
    a = S(sp, ("2/3", "2/3"), ("2/3", "2/3"), (0, 0))
    p = P(sp, "a", n1="2/3", n2="2/3")
    for sem in (WEAK, STRONG):
        assert not is_accumulation(t, p, a, sem)
        assert all(is_accumulation(t, r, a, sem) for r in p.simple_reductions())


def test_strong_membership_breaks_reductions():
    sp = Space(("a",), 2)
    t = generate(sp, [])
    a = S(sp, ("1/2",), (0,), (0,))
    p = P(sp, "a", n1="1/2", n2="1/2")
    assert is_accumulation(t, p, a, STRONG) and not is_accumulation(t, p.reduce({1}), a, STRONG)
    assert not is_accumulation(t, p, a, WEAK)


def test_profile_intervals():
    sp = Space(("a",), 1)
    t = generate(sp, [FSeqSet.constant(sp, "1/2")])
    a = FSeqSet.constant(sp, "1/4")
    prof = accumulation_profile(t, a, "a", 1)
    assert prof.attains(Fraction(1, 4)) and not prof.attains(Fraction(3, 4))
    assert prof.max_grade == Fraction(1, 2)


def test_oracle_counts():
    sp = Space(("a", "b"), 2)
    assert count_points(sp, [0, Fraction(1, 2), 1], 2) == len(list(enumerate_points(sp, [0, Fraction(1, 2), 1], 2)))


def _model(data, width=("a", "b")):
    sp = Space(width, data.draw(st.integers(1, 2)))
    grid = (0, Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), 1)
    t = generate(sp, data.draw(st.lists(sets_in(sp, grid), max_size=3)))
    return sp, t, data.draw(sets_in(sp, grid))


@settings(max_examples=60, deadline=None)
@given(st.data(), st.sampled_from([WEAK, STRONG, Semantics("weak", "maximal")]))
def test_fast_oracle_matches_point_enumeration(data, sem):
    sp, t, a = _model(data)
    grid = threshold_grid(t, a)
    slow = join_all(sp, (p.embed() for p in accumulation_points(t, a, grid, 2, sem)))
    assert derived_set_oracle(t, a, grid, 2, sem) == slow


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_closed_form_matches_oracle(data):
    sp, t, a = _model(data)
    grid = threshold_grid(t, a)
    assert derived_set(t, a) == derived_set_oracle(t, a, grid, len(sp.indices))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_closure_is_set_join_derived(data):
    sp, t, a = _model(data)
    assert closure(t, a) == a | derived_set(t, a)
    assert closure(t, a) == a | derived_set(t, a, STRONG)
    rep = closedness_suite(t, a)
    assert rep.holds, rep.failed()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_adherence_is_closure_membership(data):
    sp, t, a = _model(data)
    for p in enumerate_points(sp, (Fraction(1, 3), Fraction(2, 3), 1), 2):
        assert is_adherent(t, p, a) == p.member(closure(t, a))
