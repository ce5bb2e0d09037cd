"""Random models, the property registry and the example corpus."""

from .generators import Case, GenParams, gen_model, sample_case
from .registry import BY_ID, REGISTRY, PropertyId, select
from .runner import (
    CORPUS, CorpusItem, Failure, TrialReport, case_seed, case_to_dsl, corpus_as_cases, load_corpus, run,
    run_on_fst, run_paper_corpus, shrink,
)

__all__ = [
    "BY_ID", "CORPUS", "Case", "CorpusItem", "Failure", "GenParams", "PropertyId", "REGISTRY", "TrialReport",
    "case_seed", "case_to_dsl", "corpus_as_cases", "gen_model", "load_corpus", "run", "run_on_fst",
    "run_paper_corpus", "sample_case", "select", "shrink",
]
