"""Exact-arithmetic engine for fuzzy sequential sets and topologies."""

from .core import (
    FSeqPoint,
    FSeqSet,
    FstsError,
    GradeError,
    ModelMismatch,
    PointError,
    Space,
    format_point,
    format_set,
    grade,
    join_all,
    meet_all,
    simple_point,
)
from .derived import (
    Semantics,
    accumulation_profile,
    derived_set,
    derived_set_oracle,
    is_accumulation,
    is_adherent,
)
from .operators import closure, interior, nbd
from .quasi import q_point, q_sets, qw_point, qw_sets, qw_witnesses
from .topology import FST, CapExceeded, base_criterion, check_axioms, finer, generate, is_base, lift, make_fst

__version__ = "0.1.0"
