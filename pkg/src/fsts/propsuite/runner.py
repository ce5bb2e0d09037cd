"""Run registry properties over seeded random models and the shipped corpus."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from ..core import FSeqSet, FstsError
from ..derived import DEFAULT, Semantics
from ..dsl.evaluate import evaluate
from ..dsl.model import Model, parse
from ..dsl.printer import print_point, print_set
from ..topology import FST, CapExceeded, generate
from .generators import Case, GenParams, gen_model, grid_of, sample_case
from .registry import PropertyId, select

SHOWN_FAILURES = 3
SHRINK_BUDGET = 150


def case_seed(seed: int, trial: int) -> int:
    return (seed * 1_000_003 + trial) % (2**32)


@dataclass
class Failure:
    case_seed: Optional[int]
    label: str
    detail: str
    model: str  # shrunk counterexample as a .fsts document

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class TrialReport:
    property_id: str
    status: str
    trials: int
    seed: int
    corpus_models: int = 0
    failing_cases: int = 0
    failures: list[Failure] = field(default_factory=list)
    errors: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "experiment" or (self.failing_cases == 0 and self.errors == 0)

    def verdicts(self) -> dict:
        total = self.trials + self.corpus_models
        return {"holds": total - self.failing_cases - self.errors, "fails": self.failing_cases, "errors": self.errors}

    def to_dict(self) -> dict:
        return {
            "property": self.property_id,
            "status": self.status,
            "trials": self.trials,
            "corpus_models": self.corpus_models,
            "seed": self.seed,
            "verdicts": self.verdicts(),
            "failures": [f.to_dict() for f in self.failures],
        }


# serialization and shrinking --------------------------------------------------------


def case_to_dsl(case: Case, property_id: str = "") -> str:
    space = case.space
    lines = []
    if property_id:
        lines.append(f"# counterexample for {property_id}" + (f" (seed {case.seed})" if case.seed is not None else ""))
    lines += [f"universe {' '.join(space.universe)};", f"horizon {space.horizon};"]
    names = []
    if case.subbase and _regenerates(case):
        for i, b in enumerate(case.subbase, 1):
            lines.append(f"fset B{i} = {print_set(b)};")
        names = [f"B{i}" for i in range(1, len(case.subbase) + 1)]
        topo = f"topology T = generate({', '.join(names) or 'X0, X1'});"
    else:
        opens = sorted(case.fst.opens, key=FSeqSet.sort_key)
        topo = "topology T = explicit(" + ", ".join(print_set(o) for o in opens) + ");"
    for i, s in enumerate(case.sets, 1):
        lines.append(f"fset S{i} = {print_set(s)};")
    for i, p in enumerate(case.points, 1):
        lines.append(print_point(f"P{i}", p))
    lines.append(topo)
    lines.append("check axioms(T);")
    return "\n".join(lines) + "\n"


def _regenerates(case: Case) -> bool:
    try:
        return generate(case.space, case.subbase) == case.fst
    except CapExceeded:
        return False


def _zeroed(s: FSeqSet, n: int, i: int) -> FSeqSet:
    rows = [list(r) for r in s.rows]
    rows[n][i] = type(rows[n][i])(0)
    return FSeqSet(s.space, tuple(tuple(r) for r in rows))


def _candidates(case: Case):
    """Smaller variants of a case, most aggressive first."""
    regen = bool(case.subbase) and _regenerates(case)
    if regen:
        for i in range(len(case.subbase)):
            sub = case.subbase[:i] + case.subbase[i + 1:]
            yield dataclasses.replace(case, subbase=sub, fst=generate(case.space, sub))
    for i in range(len(case.sets)):
        yield dataclasses.replace(case, sets=case.sets[:i] + case.sets[i + 1:])
    for i in range(len(case.points)):
        yield dataclasses.replace(case, points=case.points[:i] + case.points[i + 1:])
    for j, p in enumerate(case.points):
        if len(p.grades) > 1:
            for n in sorted(p.base):
                q = p.reduce(p.base - {n})
                yield dataclasses.replace(case, points=case.points[:j] + [q] + case.points[j + 1:])
    width = len(case.space.universe)
    for j, s in enumerate(case.sets):
        for n in range(len(s.rows)):
            for i in range(width):
                if s.rows[n][i]:
                    yield dataclasses.replace(case, sets=case.sets[:j] + [_zeroed(s, n, i)] + case.sets[j + 1:])
    if regen:
        for j, b in enumerate(case.subbase):
            for n in range(len(b.rows)):
                for i in range(width):
                    if b.rows[n][i]:
                        sub = case.subbase[:j] + [_zeroed(b, n, i)] + case.subbase[j + 1:]
                        try:
                            fst = generate(case.space, sub)
                        except CapExceeded:
                            continue
                        yield dataclasses.replace(case, subbase=sub, fst=fst)


def _fails(prop: PropertyId, case: Case, semantics: Semantics) -> Optional[str]:
    try:
        return prop.check(case, semantics)
    except CapExceeded:
        return None


def shrink(prop: PropertyId, case: Case, semantics: Semantics = DEFAULT, budget: int = SHRINK_BUDGET):
    """Greedy shrink; every accepted step still fails ``prop``."""
    detail = _fails(prop, case, semantics)
    steps = 0
    improved = True
    while improved and steps < budget:
        improved = False
        for cand in _candidates(case):
            steps += 1
            d = _fails(prop, cand, semantics)
            if d:
                case, detail, improved = cand, d, True
                break
            if steps >= budget:
                break
    return case, detail


# running -----------------------------------------------------------------------------


def _run_property(prop: PropertyId, cases: list[Case], trials: int, seed: int, corpus_count: int,
                  semantics: Semantics, do_shrink: bool) -> TrialReport:
    rep = TrialReport(prop.id, prop.status, trials, seed, corpus_count)
    if prop.check is None:
        # statements witnessed only by examples: their expectation blocks decide
        rep.trials, rep.corpus_models = 0, len(prop.corpus)
        for name in prop.corpus:
            bad = [r for r in evaluate(load_corpus(name), semantics) if r.kind == "expect" and r.verdict != "pass"]
            if bad:
                rep.failing_cases += 1
                detail = "; ".join(f"{r.statement} => {r.verdict}" for r in bad)
                rep.failures.append(Failure(None, name, detail, corpus_text(name)))
        return rep
    for case in cases:
        try:
            detail = prop.check(case, semantics)
        except CapExceeded:
            continue
        except FstsError as exc:
            rep.errors += 1
            detail = None
            if len(rep.failures) < SHOWN_FAILURES:
                rep.failures.append(Failure(case.seed, case.label, f"error: {exc}", case_to_dsl(case, prop.id)))
        if not detail:
            continue
        rep.failing_cases += 1
        if len(rep.failures) < SHOWN_FAILURES:
            small, small_detail = (shrink(prop, case, semantics) if do_shrink and prop.status == "assert" else (case, detail))
            rep.failures.append(Failure(case.seed, case.label, small_detail, case_to_dsl(small, prop.id)))
    return rep


def run(ids=None, trials: int = 200, seed: int = 42, semantics: Semantics = DEFAULT,
        params: GenParams = GenParams(), corpus: bool = True, do_shrink: bool = True) -> list[TrialReport]:
    """Run the selected properties; reports come back sorted by property id."""
    props = select(ids)
    cases = [gen_model(case_seed(seed, i), params) for i in range(trials)]
    corpus_cases = corpus_as_cases() if corpus else []
    reports = [
        _run_property(p, cases + corpus_cases, trials, seed, len(corpus_cases), semantics, do_shrink)
        for p in props
    ]
    return sorted(reports, key=lambda r: r.property_id)


def run_on_fst(t: FST, trials: int = 200, seed: int = 42, semantics: Semantics = DEFAULT,
               ids=None) -> list[TrialReport]:
    """Properties with random samples against one fixed topology."""
    props = [p for p in select(ids) if p.check is not None]
    cases = [sample_case(t, case_seed(seed, i)) for i in range(trials)]
    return sorted(
        (_run_property(p, cases, trials, seed, 0, semantics, False) for p in props),
        key=lambda r: r.property_id,
    )


# corpus --------------------------------------------------------------------------------


CORPUS = (
    "prop_2_4",
    "cor_2_2",
    "prop_2_3_converse",
    "prop_2_7_converse",
    "post_prop_2_8",
    "post_prop_2_10",
    "example_2_1",
    "example_2_2",
)


def corpus_text(name: str) -> str:
    return resources.files("fsts.corpus").joinpath(f"{name}.fsts").read_text(encoding="utf-8")


def load_corpus(name: str) -> Model:
    return parse(corpus_text(name))


def corpus_as_cases() -> list[Case]:
    cases = []
    for name in CORPUS:
        m = load_corpus(name)
        for tname, topo in m.topologies.items():
            if topo.fst is None:
                continue
            pts = list(m.points.values())
            cases.append(Case(topo.fst, [], grid_of(topo.fst), list(m.sets.values()), pts, None, f"{name}:{tname}"))
    return cases


@dataclass
class CorpusItem:
    name: str
    passed: bool
    results: list  # evaluate() results of the expectation statements

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": "pass" if self.passed else "fail",
                "results": [r.to_dict() for r in self.results]}


def run_paper_corpus(semantics: Semantics = DEFAULT) -> list[CorpusItem]:
    items = []
    for name in CORPUS:
        results = [r for r in evaluate(load_corpus(name), semantics) if r.kind == "expect"]
        items.append(CorpusItem(name, bool(results) and all(r.verdict == "pass" for r in results), results))
    return items


__all__ = [
    "CORPUS", "CorpusItem", "Failure", "TrialReport", "case_seed", "case_to_dsl", "corpus_as_cases",
    "load_corpus", "run", "run_on_fst", "run_paper_corpus", "shrink",
]
