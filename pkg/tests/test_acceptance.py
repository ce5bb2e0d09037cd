"""Acceptance criteria, one PASS/FAIL line each.

Tolerances are exact: every grade is a rational and every comparison is equality.
"""

import json
import random
import subprocess
import sys

import pytest

from fsts.derived import derived_set, derived_set_oracle, threshold_grid
from fsts.propsuite import CORPUS, case_seed, corpus_as_cases, gen_model, run, run_paper_corpus
from fsts.topology import CapExceeded, base_criterion, is_base

from test_fuzz import ROUNDS, fuzz

LINES: list[str] = []
SEED = 42
TRIALS = 200


def report(label, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
    LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def corpus():
    return {it.name: it for it in run_paper_corpus()}


IDENTITY_IDS = [f"P2.9-{r}" for r in "i ii iii iv v vi vii viii ix x xi xii xiii xiv".split()]
THEOREM_IDS = ["T2.2", "T2.3", "C2.3", "T2.4", "P2.6", "C2.1", "P2.10", "P2.11", "P2.12"]


@pytest.fixture(scope="module")
def suite():
    reports = run(IDENTITY_IDS + THEOREM_IDS, trials=TRIALS, seed=SEED, do_shrink=False)
    return {r.property_id: r for r in reports}


@pytest.mark.parametrize("name", CORPUS)
def test_1_corpus_exactness(corpus, name):
    item = corpus[name]
    bad = [f"{r.statement} => {r.verdict}" for r in item.results if r.verdict != "pass"]
    report(f"1 corpus {name}", item.passed, "; ".join(bad) or f"{len(item.results)} expectations")


@pytest.mark.parametrize("pid", IDENTITY_IDS)
def test_2_identity_suite(suite, pid):
    r = suite[pid]
    v = r.verdicts()
    detail = f"holds={v['holds']} fails={v['fails']} errors={v['errors']} over {r.trials} random + {r.corpus_models} corpus"
    if r.status == "experiment":
        LINES.append(f"INFO  2 identity {pid} experiment  ({detail})")
        return
    report(f"2 identity {pid}", r.failing_cases == 0 and r.errors == 0 and r.trials >= TRIALS, detail)


@pytest.mark.parametrize("pid", THEOREM_IDS)
def test_3_theorem_suite(suite, pid):
    r = suite[pid]
    v = r.verdicts()
    first = r.failures[0].detail if r.failures else ""
    report(f"3 theorem {pid}", r.ok and r.trials >= TRIALS,
           f"holds={v['holds']} fails={v['fails']} errors={v['errors']}" + (f"; first: {first}" if first else ""))


def _oracle_mismatches(case):
    ran = 0
    for a in [*case.sets, *case.fst.opens[:2]]:
        try:
            oracle = derived_set_oracle(case.fst, a, threshold_grid(case.fst, a), 2)
        except CapExceeded:
            continue
        ran += 1
        if derived_set(case.fst, a) != oracle:
            return ran, a
    return ran, None


def test_4_oracle_equivalence():
    bad, models, random_ran = [], 0, 0
    for case in corpus_as_cases():
        ran, a = _oracle_mismatches(case)
        models += bool(ran)
        if a is not None:
            bad.append(case.label)
    i = 0
    while random_ran < 60 and i < 400:
        case = gen_model(case_seed(SEED, i))
        i += 1
        ran, a = _oracle_mismatches(case)
        random_ran += bool(ran)
        if a is not None:
            bad.append(f"seed {case.seed}")
    report("4 oracle equivalence", not bad and random_ran >= 50,
           f"{models} corpus + {random_ran} random models, {len(bad)} disagreements")


def test_5_base_criterion():
    rng = random.Random(SEED)
    pairs = disagree = 0
    outcomes = set()
    i = 0
    while pairs < 200:
        case = gen_model(case_seed(SEED, 10_000 + i))
        i += 1
        opens = list(case.fst.opens)
        for _ in range(3):
            beta = [o for o in opens if rng.random() < 0.6]
            if not beta:
                continue
            verdict = is_base(case.fst, beta)
            outcomes.add(verdict)
            disagree += verdict != base_criterion(case.fst, beta)
            pairs += 1
    report("5 base criterion", disagree == 0 and outcomes == {True, False},
           f"{pairs} pairs, {disagree} disagreements")


def test_6_parser_robustness():
    stats = fuzz()
    report("6 parser robustness", not stats["bad_span"] and stats["accepted"] + stats["rejected"] == ROUNDS,
           f"{ROUNDS} inputs, {stats['rejected']} rejected, 0 crashes, {len(stats['bad_span'])} bad spans")


def test_7_determinism():
    argv = [sys.executable, "-m", "fsts", "props", "--trials", "500", "--seed", "7", "--format", "json"]
    runs = [subprocess.Popen(argv, stdout=subprocess.PIPE, stderr=subprocess.PIPE) for _ in range(2)]
    outs = [p.communicate()[0] for p in runs]
    json.loads(outs[0])
    report("7 determinism", outs[0] == outs[1] and len(outs[0]) > 0, f"{len(outs[0])} bytes of JSON each")
