from collections import Counter
from fractions import Fraction

import pytest

from fsts.derived import DEFAULT
from fsts.dsl import parse
from fsts.operators import closure
from fsts.propsuite import (
    BY_ID, CORPUS, REGISTRY, Case, GenParams, PropertyId, case_seed, gen_model, run, run_paper_corpus, shrink,
)
from fsts.propsuite.runner import _run_property
from fsts.topology import check_axioms

# Every statement the registry must cover, by stable id.
REQUIRED = (
    ["S1-lattice", "S1-order", "S1-points", "D2.1", "D2.2", "P2.1", "P2.1-c", "P2.2", "P2.3", "D2.4-2.11", "P2.4",
     "P2.5", "P2.5-w", "P2.6", "C2.1", "C2.2", "T2.1", "P2.7", "P2.8", "T2.2", "T2.3", "C2.3", "T2.4", "T2.4-c",
     "P2.10", "P2.11", "P2.12", "R2.1", "R2.2", "T2.5"]
    + [f"P2.9-{r}" for r in "i ii iii iv v vi vii viii ix x xi xii xiii xiv".split()]
    + [f"L2.1-{r}" for r in "i ii iii iv v".split()]
    + [f"L2.2-{r}" for r in "i ii iii".split()]
)
EXPERIMENTS = {"P2.5-w", "P2.9-xii"}


def test_registry_covers_every_statement():
    ids = [p.id for p in REGISTRY]
    assert len(ids) == len(set(ids))
    assert set(REQUIRED) <= set(ids)
    assert {i for i in REQUIRED if BY_ID[i].status == "experiment"} == EXPERIMENTS
    assert all(i.startswith(("X-", "ENG-")) for i in set(ids) - set(REQUIRED))


def test_every_corpus_file_is_claimed():
    claimed = {c for p in REGISTRY for c in p.corpus}
    assert claimed == set(CORPUS)
    assert all(p.check or p.corpus for p in REGISTRY)


def test_gen_model_is_deterministic():
    a, b = gen_model(99), gen_model(99)
    assert (a.fst, a.subbase, a.sets, a.points) == (b.fst, b.subbase, b.sets, b.points)
    assert gen_model(100).fst != a.fst or gen_model(100).sets != a.sets


def test_generated_topologies_pass_axioms():
    for i in range(100):
        case = gen_model(case_seed(5, i))
        assert check_axioms(case.fst.opens).valid
        assert len(case.space.universe) <= 4 and case.space.horizon <= 3 and len(case.grid) <= 6


def test_grade_histogram_covers_grids():
    seen: dict[int, Counter] = {}
    for i in range(1000):
        case = gen_model(case_seed(11, i))
        hist = seen.setdefault(len(case.grid) - 1, Counter())
        for s in case.sets:
            hist.update(v for row in s.rows for v in row)
        hist.update(g for p in case.points for _, g in p.grades)
    assert set(seen) == {2, 3, 4, 5}
    for d, hist in seen.items():
        assert {Fraction(i, d) for i in range(d + 1)} <= set(hist), d


def _all_closed(case, sem):
    for s in case.sets:
        if closure(case.fst, s) != s:
            return "sample set is not closed"
    return None


BROKEN = PropertyId("BROKEN", "every sample set is closed", "assert", _all_closed)


def _case_from_dsl(text):
    m = parse(text)
    t = m.topologies["T"].fst
    return Case(t, [], (), [s for k, s in m.sets.items() if k.startswith("S")], list(m.points.values()))


def test_corrupted_checker_reproduces_from_seed():
    cases = [gen_model(case_seed(3, i)) for i in range(20)]
    rep = _run_property(BROKEN, cases, 20, 3, 0, DEFAULT, True)
    assert rep.failing_cases and not rep.ok
    for f in rep.failures:
        assert _all_closed(gen_model(f.case_seed), DEFAULT)
        small = _case_from_dsl(f.model)
        assert _all_closed(small, DEFAULT)
        assert len(small.sets) == 1


def test_shrink_keeps_failure():
    for i in range(30):
        case = gen_model(case_seed(8, i))
        if _all_closed(case, DEFAULT):
            small, detail = shrink(BROKEN, case)
            assert detail and _all_closed(small, DEFAULT)
            assert len(small.subbase) <= len(case.subbase) and len(small.sets) <= len(case.sets)


def test_run_is_repeatable():
    a = [r.to_dict() for r in run(["P2.6", "T2.2"], trials=15, seed=4)]
    b = [r.to_dict() for r in run(["P2.6", "T2.2"], trials=15, seed=4)]
    assert a == b
    assert [r["property"] for r in a] == ["P2.6", "T2.2"]


def test_unknown_property_is_rejected():
    with pytest.raises(Exception):
        run(["nope"], trials=1)


def test_corpus_status():
    items = {it.name: it.passed for it in run_paper_corpus()}
    assert set(items) == set(CORPUS)
    assert all(v for k, v in items.items() if k not in ("example_2_1", "example_2_2"))
