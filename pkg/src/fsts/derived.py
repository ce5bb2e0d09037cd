"""Adherence and accumulation points, derived sets and the closedness checks.

Accumulation has two knobs, bundled in :class:`Semantics`:

``membership``
    When the extra "meets the set elsewhere" clause applies: as soon as the
    point lies in the set weakly (``weak``, the default) or only when it lies
    in it outright (``strong``).  Under ``weak`` every reduction of an
    accumulation point is again one, so the derived set is the join of
    simple accumulation points; under ``strong`` a point that leaves the set
    at one index escapes the clause at all the others.
``witness``
    What counts as meeting the set elsewhere.  ``per_index``: a coincidence
    pair ``(z, n)`` with ``z`` off the support or ``n`` off the base.
    ``maximal``: at each ``z`` the full set ``L`` of coincidence indices is
    compared with the base.

A tail witness stands for every index past the horizon; it is "off the
base" unless the base itself contains the tail.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .core import ONE, ZERO, FSeqPoint, FSeqSet, FstsError, Grade, _same_space, join_all
from .operators import closure
from .quasi import qw_point, qw_sets
from .topology import FST, CapExceeded


@dataclass(frozen=True)
class Semantics:
    membership: str = "weak"
    witness: str = "per_index"

    def __post_init__(self):
        if self.membership not in ("strong", "weak"):
            raise ValueError(f"membership must be strong or weak, not {self.membership!r}")
        if self.witness not in ("per_index", "maximal"):
            raise ValueError(f"witness must be per_index or maximal, not {self.witness!r}")


DEFAULT = Semantics(membership="weak")


@lru_cache(maxsize=4096)
def _open_hits(t: FST, a: FSeqSet) -> tuple[tuple[FSeqSet, tuple[frozenset, ...]], ...]:
    """For each open ``B``: per universe point, the indices where ``B`` and ``a`` coincide."""
    space = a.space
    out = []
    for b in t.opens:
        hits = tuple(
            frozenset(n for n in space.indices if a.rows[n - 1][i] + b.rows[n - 1][i] > 1)
            for i in range(len(space.universe))
        )
        out.append((b, hits))
    return tuple(out)


def is_adherent(t: FST, p: FSeqPoint, a: FSeqSet) -> bool:
    """Every open weak Q-neighbourhood of ``p`` weakly meets ``a``.

    Open sets suffice: anything above a set that meets ``a`` meets it too.
    """
    _same_space(p, a)
    return all(any(hits) for b, hits in _open_hits(t, a) if qw_point(p, b))


def _qualifying(hits: tuple[frozenset, ...], p: FSeqPoint, how: str) -> bool:
    return _qualifying_at(hits, p.space.position(p.support), p.base, how)


def _qualifying_at(hits: tuple[frozenset, ...], at: int, base: frozenset, how: str) -> bool:
    for i, h in enumerate(hits):
        if not h:
            continue
        if i != at:
            return True
        if how == "per_index":
            if h - base:
                return True
        elif h != base:
            return True
    return False


def is_accumulation(t: FST, p: FSeqPoint, a: FSeqSet, semantics: Semantics = DEFAULT) -> bool:
    _same_space(p, a)
    nbhds = [hits for b, hits in _open_hits(t, a) if qw_point(p, b)]
    if not all(any(h) for h in nbhds):
        return False
    if not p.member(a, semantics.membership):
        return True
    return all(_qualifying(h, p, semantics.witness) for h in nbhds)


# closed-form engine --------------------------------------------------------------


@dataclass(frozen=True)
class AccumulationProfile:
    """Which grades make the simple point at ``(x, k)`` an accumulation point of ``A``.

    ``m1`` is the largest ``B^k(x)`` over opens ``B`` that miss ``A``; ``m2``
    the largest over opens meeting ``A`` nowhere except at ``(x, k)``.
    """

    support: str
    index: int
    level: Grade  # A^k(x)
    m1: Grade
    m2: Grade
    intervals: tuple[tuple[Grade, Grade], ...]  # half-open (low, high]

    @property
    def max_grade(self) -> Grade:
        return max((hi for _, hi in self.intervals), default=ZERO)

    def attains(self, g: Grade) -> bool:
        return any(lo < g <= hi for lo, hi in self.intervals)


def accumulation_profile(t: FST, a: FSeqSet, x: str, k: int) -> AccumulationProfile:
    space = _same_space(t, a)
    i = space.position(x)
    level = a.rows[k - 1][i]
    m1 = m2 = ZERO
    for b in t.opens:
        bk = b.rows[k - 1][i]
        hits = [(j, n) for j in range(len(space.universe)) for n in space.indices
                if a.rows[n - 1][j] + b.rows[n - 1][j] > 1]
        if not hits:
            m1 = max(m1, bk)
        if all(h == (i, k) for h in hits):
            m2 = max(m2, bk)
    intervals = []
    inside = min(level, ONE - m2)
    if inside > 0:
        intervals.append((ZERO, inside))
    if ONE - m1 > level:
        intervals.append((level, ONE - m1))
    return AccumulationProfile(x, k, level, m1, m2, tuple(intervals))


@lru_cache(maxsize=16384)
def _derived(t: FST, a: FSeqSet, semantics: Semantics) -> FSeqSet:
    space = t.space
    if semantics.witness != "per_index":
        grid = threshold_grid(t, a)
        return derived_set_oracle(t, a, grid, max_base=space.horizon + 1, semantics=semantics,
                                  cap=2_000_000)
    cl = closure(t, a)
    rows = [list(r) for r in a.rows]
    for i, x in enumerate(space.universe):
        room = [n for n in space.indices if cl.rows[n - 1][i] > a.rows[n - 1][i]]
        for k in space.indices:
            best = accumulation_profile(t, a, x, k).max_grade
            if semantics.membership == "strong" and any(j != k for j in room):
                # a two-index point outside A only has to be adherent
                best = max(best, cl.rows[k - 1][i])
            rows[k - 1][i] = best
    return FSeqSet(space, tuple(tuple(r) for r in rows))


def derived_set(t: FST, a: FSeqSet, semantics: Semantics = DEFAULT) -> FSeqSet:
    """Join of all accumulation points of ``a``, computed exactly."""
    _same_space(t, a)
    return _derived(t, a, semantics)


# brute-force oracle ---------------------------------------------------------


def threshold_grid(t: FST, a: FSeqSet) -> tuple[Grade, ...]:
    """Grades ``v`` and ``1 - v`` for every value in the opens and in ``a``, plus 0 and 1."""
    vals = {ZERO, ONE}
    for s in (*t.opens, a):
        for row in s.rows:
            for v in row:
                vals.add(v)
                vals.add(ONE - v)
    return tuple(sorted(vals))


def enumerate_points(space, grid: Sequence[Grade], max_base: int) -> Iterator[FSeqPoint]:
    positive = [g for g in grid if g > 0]
    for x in space.universe:
        for size in range(1, max_base + 1):
            for base in itertools.combinations(space.indices, size):
                for grades in itertools.product(positive, repeat=size):
                    yield FSeqPoint(space, x, tuple(zip(base, grades)))


def count_points(space, grid: Sequence[Grade], max_base: int) -> int:
    pos = sum(1 for g in grid if g > 0)
    m = len(space.indices)
    return len(space.universe) * sum(
        len(list(itertools.combinations(range(m), s))) * pos**s for s in range(1, max_base + 1)
    )


def accumulation_points(
    t: FST, a: FSeqSet, grid: Sequence[Grade], max_base: int, semantics: Semantics = DEFAULT,
    cap: int = 200_000,
) -> list[FSeqPoint]:
    if max_base < 1:
        raise FstsError("max_base must be at least 1")
    total = count_points(t.space, grid, max_base)
    if total > cap:
        raise CapExceeded(f"oracle would enumerate {total} points (cap {cap})")
    return [p for p in enumerate_points(t.space, grid, max_base) if is_accumulation(t, p, a, semantics)]


def derived_set_oracle(
    t: FST, a: FSeqSet, grid: Sequence[Grade], max_base: int = 2, semantics: Semantics = DEFAULT,
    cap: int = 200_000,
) -> FSeqSet:
    """Join of every enumerated accumulation point with grades from ``grid``.

    Same enumeration and the same definition as :func:`accumulation_points`,
    run on integers scaled by the common denominator instead of on point
    objects.
    """
    space = _same_space(t, a)
    if max_base < 1:
        raise FstsError("max_base must be at least 1")
    total = count_points(space, grid, max_base)
    if total > cap:
        raise CapExceeded(f"oracle would enumerate {total} points (cap {cap})")
    hits_by_open = _open_hits(t, a)
    values = set(grid) | {v for row in a.rows for v in row}
    values |= {v for b, _ in hits_by_open for row in b.rows for v in row}
    den = math.lcm(*(v.denominator for v in values))

    def scale(v):
        return v.numerator * (den // v.denominator)

    positive = [scale(g) for g in grid if g > 0]
    m = len(space.indices)
    best = [[0] * len(space.universe) for _ in range(m)]
    for i in range(len(space.universe)):
        # qw with open b at index n  <=>  g > den - b(n)
        limits = [[den - scale(b.rows[n][i]) for n in range(m)] for b, _ in hits_by_open]
        col_a = [scale(a.rows[n][i]) for n in range(m)]
        for size in range(1, max_base + 1):
            for base_idx in itertools.combinations(range(m), size):
                base = frozenset(n + 1 for n in base_idx)
                for grades in itertools.product(positive, repeat=size):
                    pairs = list(zip(base_idx, grades))
                    nbhds = [
                        hits for (b, hits), lim in zip(hits_by_open, limits)
                        if any(g > lim[n] for n, g in pairs)
                    ]
                    if not all(any(h) for h in nbhds):
                        continue
                    if semantics.membership == "strong":
                        inside = all(g <= col_a[n] for n, g in pairs)
                    else:
                        inside = any(g <= col_a[n] for n, g in pairs)
                    if inside and not all(_qualifying_at(h, i, base, semantics.witness) for h in nbhds):
                        continue
                    for n, g in pairs:
                        if g > best[n][i]:
                            best[n][i] = g
    rows = tuple(tuple(Fraction(v, den) for v in row) for row in best)
    return FSeqSet(space, rows)


# closedness checks ----------------------------------------------------------


@dataclass
class Check:
    name: str
    holds: bool
    detail: str = ""


@dataclass
class ClosednessReport:
    checks: list[Check] = field(default_factory=list)
    scope: str = "restricted to representable (eventually constant, finite-universe) sets"

    def add(self, name, holds, detail=""):
        self.checks.append(Check(name, bool(holds), detail))

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.holds]

    def __getitem__(self, name) -> bool:
        for c in self.checks:
            if c.name == name:
                return c.holds
        raise KeyError(name)


def is_closed_derived(t: FST, a: FSeqSet, semantics: Semantics = DEFAULT) -> bool:
    return t.is_closed(derived_set(t, a, semantics))


def _seq_at(s: FSeqSet, x: str) -> tuple[Grade, ...]:
    return s.eval(x)


def closedness_suite(t: FST, a: FSeqSet | FSeqPoint, semantics: Semantics = DEFAULT) -> ClosednessReport:
    """Closure/derived-set relations for a set, plus the point-specific ones for a point."""
    report = ClosednessReport()
    point = a if isinstance(a, FSeqPoint) else None
    s = point.embed() if point else a
    d = derived_set(t, s, semantics)
    cl = closure(t, s)
    report.add("closure-is-join-with-derived", cl == s.join(d))
    report.add("closed-iff-contains-derived", t.is_closed(s) == d.leq(s))
    report.add("derived-below-closure", d.leq(cl))
    if point is None:
        return report

    space = t.space
    x = point.support
    reductions = point.simple_reductions()
    red_derived = [derived_set(t, r.embed(), semantics) for r in reductions]
    report.add("point-derived-is-join-of-simple", d == join_all(space, red_derived))
    simple_closed = all(t.is_closed(rd) for rd in red_derived)
    report.add("simple-closed-implies-point-closed", (not simple_closed) or t.is_closed(d))

    r = tuple(point.r(n) for n in space.indices)
    cl_x, d_x = _seq_at(cl, x), _seq_at(d, x)
    zero_seq = (ZERO,) * len(space.indices)
    report.add("L2.1-i", all(_seq_at(cl, y) == _seq_at(d, y) for y in space.universe if y != x))
    strict = [n for n in point.base if cl_x[n - 1] > r[n - 1]]
    report.add("L2.1-ii", all(cl_x[n - 1] == d_x[n - 1] for n in strict))
    if all(cl_x[n - 1] > r[n - 1] for n in point.base):
        report.add("L2.1-iii", cl_x == d_x)
    else:
        report.add("L2.1-iii", True, "premise false")
    if d_x == zero_seq:
        report.add("L2.1-iv", cl_x == r)
    else:
        report.add("L2.1-iv", True, "premise false")
    if point.is_simple and cl_x == r:
        report.add("L2.1-v", d_x == zero_seq)
    else:
        report.add("L2.1-v", True, "premise false or point not simple")

    if point.is_simple:
        (k, rk), = point.grades
        if d_x != zero_seq:
            report.add("L2.2-i", cl == d)
        else:
            report.add("L2.2-i", True, "premise false")
        if d_x == zero_seq:
            ones = (ONE,) * len(space.indices)
            others = [y for y in space.universe if y != x]
            exists = any(
                _seq_at(b, x) == ones
                and all(_seq_at(b, y) == tuple(ONE - v for v in _seq_at(cl, y)) for y in others)
                for b in t.opens
            )
            report.add("L2.2-ii", t.is_closed(d) == exists)
        else:
            report.add("L2.2-ii", True, "premise false")
        target = tuple(ONE - rk if n == k else ONE for n in space.indices)
        exists = any(_seq_at(b, x) == target for b in t.opens)
        report.add("L2.2-iii", (d_x == zero_seq) == exists)
    return report


def simple_points(space, grid: Sequence[Grade]) -> Iterable[FSeqPoint]:
    return enumerate_points(space, grid, 1)


def theorem_closed_derived(
    t: FST, sets: Sequence[FSeqSet], grid: Sequence[Grade], semantics: Semantics = DEFAULT
) -> Check:
    """All derived sets closed iff all simple points' derived sets closed (on the given samples)."""
    simple_ok = all(is_closed_derived(t, p.embed(), semantics) for p in simple_points(t.space, grid))
    sets_ok = all(is_closed_derived(t, s, semantics) for s in sets)
    # necessity is immediate: simple points are sets themselves
    holds = sets_ok or not simple_ok
    return Check("T2.5", holds, f"simple points closed={simple_ok}, sampled sets closed={sets_ok}")
