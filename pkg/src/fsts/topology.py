"""Finite fuzzy sequential topologies: validation, generation, components, bases.

Every represented family is finite, so closure under arbitrary joins is the
same as closure under pairwise joins (the empty join being the zero set).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    FSeqPoint,
    FSeqSet,
    FstsError,
    Grade,
    Space,
    join_all,
)
from .quasi import qw_point


class CapExceeded(FstsError):
    pass


class NotAnFST(FstsError):
    pass


def _canonical(sets: Iterable[FSeqSet]) -> tuple[FSeqSet, ...]:
    return tuple(sorted(set(sets), key=FSeqSet.sort_key))


@dataclass(frozen=True)
class FST:
    """A validated fuzzy sequential topology; ``opens`` is sorted and duplicate free."""

    space: Space
    opens: tuple[FSeqSet, ...]
    _hash: int = field(default=0, init=False, repr=False, compare=False)
    _members: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "opens", _canonical(self.opens))
        object.__setattr__(self, "_members", frozenset(self.opens))
        object.__setattr__(self, "_hash", hash((self.space, self.opens)))

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.opens)

    def is_open(self, a: FSeqSet) -> bool:
        return a in self._members

    def is_closed(self, a: FSeqSet) -> bool:
        return a.complement() in self._members

    @property
    def closed_sets(self) -> list[FSeqSet]:
        return [o.complement() for o in self.opens]

    @property
    def zero(self) -> FSeqSet:
        return FSeqSet.constant(self.space, 0)

    @property
    def one(self) -> FSeqSet:
        return FSeqSet.constant(self.space, 1)


@dataclass
class Violation:
    clause: str
    message: str
    witness: tuple[FSeqSet, ...] = ()


@dataclass
class AxiomReport:
    violations: list[Violation]
    fst: FST | None = None

    @property
    def valid(self) -> bool:
        return not self.violations


def check_axioms(family: Sequence[FSeqSet]) -> AxiomReport:
    """Check the three open-set clauses on a finite family.

    Each violated clause is reported once, with the first witness found.
    """
    family = list(family)
    if not family:
        raise FstsError("cannot check an empty family")
    space = family[0].space
    for s in family:
        if s.space != space:
            raise FstsError("family members belong to different models")
    members = set(family)
    canon = _canonical(family)
    violations = []
    zero, one = FSeqSet.constant(space, 0), FSeqSet.constant(space, 1)
    missing = [c for c in (zero, one) if c not in members]
    if missing:
        violations.append(Violation("constants", "the constant sets 0 and 1 must be open", tuple(missing)))
    for a, b in itertools.combinations(canon, 2):
        if a.meet(b) not in members:
            violations.append(Violation("meet", "family is not closed under meets", (a, b, a.meet(b))))
            break
    for a, b in itertools.combinations(canon, 2):
        if a.join(b) not in members:
            violations.append(Violation("join", "family is not closed under joins", (a, b, a.join(b))))
            break
    report = AxiomReport(violations)
    if report.valid:
        report.fst = FST(space, canon)
    return report


def make_fst(family: Sequence[FSeqSet]) -> FST:
    report = check_axioms(family)
    if not report.valid:
        raise NotAnFST("; ".join(v.message for v in report.violations))
    return report.fst


def _close(seed: Iterable[FSeqSet], op, cap: int | None, what: str) -> set[FSeqSet]:
    out = set(seed)
    frontier = list(out)
    while frontier:
        fresh = []
        current = list(out)
        for a in frontier:
            for b in current:
                c = op(a, b)
                if c not in out:
                    out.add(c)
                    fresh.append(c)
                    if cap is not None and len(out) > cap:
                        raise CapExceeded(f"{what} grew beyond {cap} members")
        frontier = fresh
    return out


def base_from_subbase(space: Space, subbase: Iterable[FSeqSet], cap: int = 20) -> list[FSeqSet]:
    """All finite meets of the subbase, the constant 1 being the empty meet."""
    base = _close([FSeqSet.constant(space, 1), *subbase], FSeqSet.meet, None, "base")
    if len(base) > cap:
        raise CapExceeded(f"base has {len(base)} members (cap {cap}); joins would need up to 2^{len(base)} subfamilies")
    return sorted(base, key=FSeqSet.sort_key)


def generate(space: Space, subbase: Iterable[FSeqSet], cap: int = 20, max_opens: int = 5000) -> FST:
    """Topology generated by ``subbase``: joins of finite meets."""
    base = base_from_subbase(space, subbase, cap)
    opens = _close([FSeqSet.constant(space, 0), *base], FSeqSet.join, max_opens, "topology")
    return FST(space, tuple(opens))


def finer(coarse: FST, fine: FST) -> bool:
    """True when ``fine`` is finer than ``coarse`` (its opens include all of ``coarse``'s)."""
    if coarse.space != fine.space:
        raise FstsError("topologies belong to different models")
    return fine._members >= coarse._members


# component fuzzy topologies -------------------------------------------------


@dataclass(frozen=True)
class ComponentFT:
    """An ordinary fuzzy topology on the universe, given by its open rows."""

    space: Space
    index: int | None
    opens: frozenset[tuple[Grade, ...]]

    def validate(self) -> list[str]:
        width = len(self.space.universe)
        problems = []
        zero, one = (Grade(0),) * width, (Grade(1),) * width
        if zero not in self.opens or one not in self.opens:
            problems.append("missing constant 0 or 1")
        for u, v in itertools.combinations(self.opens, 2):
            if tuple(map(min, u, v)) not in self.opens:
                problems.append("not closed under min")
                break
        for u, v in itertools.combinations(self.opens, 2):
            if tuple(map(max, u, v)) not in self.opens:
                problems.append("not closed under max")
                break
        return problems

    @property
    def valid(self) -> bool:
        return not self.validate()

    def closure(self, row: Sequence[Grade]) -> tuple[Grade, ...]:
        width = len(row)
        out = [Grade(1)] * width
        for o in self.opens:
            c = [1 - v for v in o]
            if all(a <= b for a, b in zip(row, c)):
                out = [min(a, b) for a, b in zip(out, c)]
        return tuple(out)

    def is_base(self, rows: Iterable[Sequence[Grade]]) -> bool:
        rows = [tuple(r) for r in rows]
        width = len(self.space.universe)
        for o in self.opens:
            acc = [Grade(0)] * width
            for r in rows:
                if all(a <= b for a, b in zip(r, o)):
                    acc = [max(a, b) for a, b in zip(acc, r)]
            if tuple(acc) != o:
                return False
        return True


def component(t: FST, k: int) -> ComponentFT:
    t.space.check_index(k)
    return ComponentFT(t.space, k, frozenset(o.component(k) for o in t.opens))


def components_open(a: FSeqSet, t: FST) -> tuple[bool, ...]:
    return tuple(a.component(k) in component(t, k).opens for k in t.space.indices)


def components_closed(a: FSeqSet, t: FST) -> tuple[bool, ...]:
    return tuple(
        tuple(1 - v for v in a.component(k)) in component(t, k).opens for k in t.space.indices
    )


def lift(space: Space, delta: ComponentFT, kind: str, max_opens: int = 5000) -> FST:
    """Lift an ordinary fuzzy topology to sequences.

    ``product`` takes every choice of members for the explicit indices and the
    tail; ``constant`` takes only constant-in-n sequences.
    """
    problems = delta.validate()
    if problems:
        raise FstsError("component topology invalid: " + ", ".join(problems))
    members = sorted(delta.opens)
    if kind == "constant":
        opens = [FSeqSet(space, (row,) * (space.horizon + 1)) for row in members]
    elif kind == "product":
        count = len(members) ** (space.horizon + 1)
        if count > max_opens:
            raise CapExceeded(f"product would have {count} opens (cap {max_opens})")
        opens = [FSeqSet(space, rows) for rows in itertools.product(members, repeat=space.horizon + 1)]
    else:
        raise ValueError(f"unknown lift kind {kind!r}")
    # meets and joins act row by row, so both lifts are closed under them
    return FST(space, _canonical(opens))


def constants_family(space: Space, levels: Iterable) -> list[FSeqSet]:
    return [FSeqSet.constant(space, g) for g in levels]


# bases --------------------------------------------------------------------


def _check_sub(t: FST, beta: Sequence[FSeqSet]):
    for b in beta:
        if not t.is_open(b):
            raise FstsError("beta must be a subfamily of the topology")


def covered_join(t: FST, beta: Sequence[FSeqSet], a: FSeqSet) -> FSeqSet:
    return join_all(t.space, (b for b in beta if b.leq(a)))


def is_base(t: FST, beta: Sequence[FSeqSet]) -> bool:
    _check_sub(t, beta)
    return all(covered_join(t, beta, a) == a for a in t.opens)


def critical_points(t: FST, beta: Sequence[FSeqSet]) -> list[tuple[FSeqSet, FSeqPoint]]:
    """Points built from gaps between each open and the join of base members below it.

    For an open ``A`` whose covered join ``O`` falls strictly below it at a
    point ``x`` on the index set ``M``, the point at ``x`` with grades
    ``1 - O`` on ``M`` is weakly quasi-coincident with ``A``.
    """
    out = []
    space = t.space
    for a in t.opens:
        o = covered_join(t, beta, a)
        for x in space.universe:
            gap = {n: 1 - o.at(x, n) for n in space.indices if o.at(x, n) < a.at(x, n)}
            if gap:
                out.append((a, FSeqPoint.make(space, x, gap)))
    return out


def base_criterion(t: FST, beta: Sequence[FSeqSet]) -> bool:
    """Weak-Q-neighbourhood base test evaluated at the critical points."""
    _check_sub(t, beta)
    for a, p in critical_points(t, beta):
        if not any(qw_point(p, b) and b.leq(a) for b in beta):
            return False
    return True


def base_condition_at(t: FST, beta: Sequence[FSeqSet], p: FSeqPoint) -> bool:
    """For every open weak Q-neighbourhood of ``p`` some base member sits between."""
    for a in t.opens:
        if qw_point(p, a) and not any(qw_point(p, b) and b.leq(a) for b in beta):
            return False
    return True
