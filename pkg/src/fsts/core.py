"""Exact grades, eventually-constant fuzzy sequential sets and points.

A fuzzy sequential set is an N-indexed sequence of fuzzy sets.  Every object
here is eventually constant: a model fixes a horizon ``H`` and indices
``1..H`` are stored explicitly while a single *tail* component stands for
every index ``n > H``.  Internally the tail is addressed as index ``H + 1``,
so quantifiers over N become loops over ``space.indices``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Grade = Fraction
GradeLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)

_DECIMAL = re.compile(r"^\d+(\.\d+)?$")
_RATIO = re.compile(r"^\d+\s*/\s*\d+$")


class FstsError(Exception):
    """Base class for every error raised by this package."""


class ModelMismatch(FstsError):
    """Operands live in different universes or horizons."""


class GradeError(FstsError, ValueError):
    pass


class PointError(FstsError, ValueError):
    pass


def grade(value: GradeLike) -> Grade:
    """Convert ``value`` to an exact grade in [0, 1].

    Strings may be integers, ratios (``"3/10"``) or finite decimals
    (``"0.3"``).  Floats are refused: they are not exact.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise GradeError(f"grades must be exact, got {value!r}")
    if isinstance(value, str):
        text = value.strip()
        if not (_DECIMAL.match(text) or _RATIO.match(text)):
            raise GradeError(f"not an exact grade literal: {value!r}")
        if "/" in text:
            num, den = (int(p) for p in text.split("/"))
            if den == 0:
                raise GradeError(f"zero denominator in {value!r}")
            g = Fraction(num, den)
        else:
            g = Fraction(text)
    else:
        g = Fraction(value)
    if g < 0 or g > 1:
        raise GradeError(f"grade {g} outside [0, 1]")
    return g


def fmt_grade(g: Grade) -> str:
    return str(g.numerator) if g.denominator == 1 else f"{g.numerator}/{g.denominator}"


@dataclass(frozen=True)
class Space:
    """A finite universe together with the model-wide horizon."""

    universe: tuple[str, ...]
    horizon: int

    def __post_init__(self):
        if not self.universe:
            raise FstsError("universe must be nonempty")
        if len(set(self.universe)) != len(self.universe):
            raise FstsError("universe point names must be unique")
        if self.horizon < 1:
            raise FstsError("horizon must be >= 1")

    @property
    def tail(self) -> int:
        return self.horizon + 1

    @property
    def indices(self) -> range:
        """Explicit indices followed by the tail index."""
        return range(1, self.horizon + 2)

    def is_tail(self, n: int) -> bool:
        return n == self.horizon + 1

    def index_name(self, n: int) -> str:
        return "tail" if self.is_tail(n) else str(n)

    def position(self, x: str) -> int:
        try:
            return self.universe.index(x)
        except ValueError:
            raise FstsError(f"unknown point {x!r}") from None

    def check_index(self, n: int) -> int:
        if not 1 <= n <= self.horizon + 1:
            raise FstsError(f"index {n} outside 1..{self.horizon} and tail")
        return n


def _same_space(*objs) -> Space:
    space = objs[0].space
    for o in objs[1:]:
        if o.space != space:
            raise ModelMismatch("operands belong to different universes/horizons")
    return space


@dataclass(frozen=True)
class FSeqSet:
    """Fuzzy sequential set stored as ``H + 1`` rows (last row = tail).

    ``rows[n - 1][i]`` is the grade of universe point ``i`` at index ``n``.
    """

    space: Space
    rows: tuple[tuple[Grade, ...], ...]
    _hash: int | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.rows) != self.space.horizon + 1:
            raise FstsError("need one row per explicit index plus a tail row")
        width = len(self.space.universe)
        for row in self.rows:
            if len(row) != width:
                raise FstsError("every row must cover the whole universe")

    def __hash__(self):
        if self._hash is None:
            # Fractions are normalised, so (numerator, denominator) pairs hash
            # consistently with equality and skip Fraction's modular hash
            flat = tuple((g.numerator, g.denominator) for row in self.rows for g in row)
            object.__setattr__(self, "_hash", hash((self.space, flat)))
        return self._hash

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, space: Space, level: GradeLike) -> "FSeqSet":
        g = grade(level)
        row = (g,) * len(space.universe)
        return cls(space, (row,) * (space.horizon + 1))

    @classmethod
    def from_components(
        cls,
        space: Space,
        components: Mapping[int, Mapping[str, GradeLike]],
        tail: Mapping[str, GradeLike] | None = None,
    ) -> "FSeqSet":
        """Build from ``{index: {point: grade}}``.

        Missing points are 0; missing explicit indices repeat the tail.
        """
        tail_map = tail if tail is not None else components.get(space.tail, {})

        def row_of(mapping):
            for x in mapping:
                space.position(x)
            return tuple(grade(mapping.get(x, 0)) for x in space.universe)

        tail_row = row_of(tail_map)
        rows = []
        for n in range(1, space.horizon + 1):
            rows.append(row_of(components[n]) if n in components else tail_row)
        rows.append(tail_row)
        return cls(space, tuple(rows))

    # access ---------------------------------------------------------------

    def at(self, x: str, n: int) -> Grade:
        return self.rows[n - 1][self.space.position(x)]

    def component(self, n: int) -> tuple[Grade, ...]:
        return self.rows[self.space.check_index(n) - 1]

    def eval(self, x: str) -> tuple[Grade, ...]:
        """Grade sequence at ``x`` (explicit indices then tail)."""
        i = self.space.position(x)
        return tuple(row[i] for row in self.rows)

    def is_zero_component(self, n: int) -> bool:
        return not any(self.rows[n - 1])

    # lattice --------------------------------------------------------------

    def _zip(self, other, op):
        _same_space(self, other)
        return FSeqSet(
            self.space,
            tuple(tuple(op(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
        )

    def join(self, other: "FSeqSet") -> "FSeqSet":
        return self._zip(other, max)

    def meet(self, other: "FSeqSet") -> "FSeqSet":
        return self._zip(other, min)

    def complement(self) -> "FSeqSet":
        return FSeqSet(self.space, tuple(tuple(1 - a for a in r) for r in self.rows))

    __or__ = join
    __and__ = meet
    __invert__ = complement

    # order ----------------------------------------------------------------

    def leq(self, other: "FSeqSet") -> bool:
        _same_space(self, other)
        return all(a <= b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def leq_weak(self, other: "FSeqSet") -> bool:
        """Some single component is dominated as a whole fuzzy set."""
        _same_space(self, other)
        return any(all(a <= b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))

    def __le__(self, other):
        return self.leq(other)

    def sort_key(self):
        return self.rows

    def __repr__(self):
        return f"FSeqSet({format_set(self)})"


def join_all(space: Space, sets: Iterable[FSeqSet]) -> FSeqSet:
    out = FSeqSet.constant(space, 0)
    for s in sets:
        out = out.join(s)
    return out


def meet_all(space: Space, sets: Iterable[FSeqSet]) -> FSeqSet:
    out = FSeqSet.constant(space, 1)
    for s in sets:
        out = out.meet(s)
    return out


def order(a: FSeqSet, b: FSeqSet, kind: str = "leq") -> bool:
    if kind == "leq":
        return a.leq(b)
    if kind == "leq_weak":
        return a.leq_weak(b)
    if kind == "eq":
        _same_space(a, b)
        return a == b
    raise ValueError(f"unknown order kind {kind!r}")


def lattice(a: FSeqSet, b: FSeqSet, kind: str) -> FSeqSet:
    if kind == "join":
        return a.join(b)
    if kind == "meet":
        return a.meet(b)
    raise ValueError(f"unknown lattice kind {kind!r}")


def compare_on(s: Sequence[Grade], t: Sequence[Grade], indices: Iterable[int], rel: str) -> bool:
    """Compare two grade sequences at every index of ``indices`` (1-based)."""
    test = {"gt": lambda a, b: a > b, "eq": lambda a, b: a == b, "geq": lambda a, b: a >= b}[rel]
    return all(test(s[n - 1], t[n - 1]) for n in indices)


@dataclass(frozen=True)
class FSeqPoint:
    """Fuzzy sequential point supported at ``support`` with grades on ``base``.

    ``grades`` maps each index of the base (tail = ``H + 1``) to a nonzero
    grade; the base is exactly the support of the grade sequence.
    """

    space: Space
    support: str
    grades: tuple[tuple[int, Grade], ...]

    def __post_init__(self):
        self.space.position(self.support)
        if not self.grades:
            raise PointError("a point needs a nonempty base")
        seen = set()
        for n, g in self.grades:
            self.space.check_index(n)
            if n in seen:
                raise PointError(f"index {n} repeated in point base")
            seen.add(n)
            if not (0 < g <= 1):
                raise PointError(f"point grades must lie in (0, 1], got {g}")
        object.__setattr__(self, "grades", tuple(sorted(self.grades)))

    @classmethod
    def make(cls, space: Space, support: str, grades: Mapping[int, GradeLike]) -> "FSeqPoint":
        return cls(space, support, tuple((n, grade(g)) for n, g in grades.items()))

    @property
    def base(self) -> frozenset[int]:
        return frozenset(n for n, _ in self.grades)

    @property
    def grade_map(self) -> dict[int, Grade]:
        return dict(self.grades)

    def r(self, n: int) -> Grade:
        return self.grade_map.get(n, ZERO)

    @property
    def is_simple(self) -> bool:
        return len(self.grades) == 1

    @property
    def is_complete(self) -> bool:
        return self.base == frozenset(self.space.indices)

    def embed(self) -> FSeqSet:
        i = self.space.position(self.support)
        gm = self.grade_map
        width = len(self.space.universe)
        rows = []
        for n in self.space.indices:
            row = [ZERO] * width
            row[i] = gm.get(n, ZERO)
            rows.append(tuple(row))
        return FSeqSet(self.space, tuple(rows))

    def reduce(self, sub: Iterable[int]) -> "FSeqPoint":
        sub = frozenset(sub)
        if not sub:
            raise PointError("cannot reduce to an empty base")
        if not sub <= self.base:
            raise PointError("reduction base must be a subset of the base")
        return FSeqPoint(self.space, self.support, tuple((n, g) for n, g in self.grades if n in sub))

    def simple_reductions(self) -> list["FSeqPoint"]:
        return [self.reduce({n}) for n in sorted(self.base)]

    def dual(self) -> "FSeqPoint":
        """Point with grades ``1 - r`` on the part of the base where ``r < 1``."""
        kept = tuple((n, 1 - g) for n, g in self.grades if g < 1)
        if not kept:
            raise PointError("the dual of a point with all grades 1 is not a point")
        return FSeqPoint(self.space, self.support, kept)

    def member(self, a: FSeqSet, kind: str = "strong") -> bool:
        _same_space(self, a)
        i = self.space.position(self.support)
        if kind == "strong":
            return all(g <= a.rows[n - 1][i] for n, g in self.grades)
        if kind == "weak":
            return any(g <= a.rows[n - 1][i] for n, g in self.grades)
        raise ValueError(f"unknown membership kind {kind!r}")

    def __repr__(self):
        return f"FSeqPoint({format_point(self)})"


def simple_point(space: Space, x: str, n: int, g: GradeLike) -> FSeqPoint:
    return FSeqPoint.make(space, x, {n: g})


def format_fuzzy(space: Space, row: Sequence[Grade]) -> str:
    return "{" + ", ".join(f"{x}: {fmt_grade(g)}" for x, g in zip(space.universe, row)) + "}"


def format_set(a: FSeqSet) -> str:
    sp = a.space
    parts = [f"n{n}: {format_fuzzy(sp, a.rows[n - 1])}" for n in range(1, sp.horizon + 1)]
    parts.append(f"tail: {format_fuzzy(sp, a.rows[-1])}")
    return "[" + ", ".join(parts) + "]"


def format_point(p: FSeqPoint) -> str:
    sp = p.space
    base = ", ".join(sp.index_name(n) for n, _ in p.grades)
    grades = ", ".join(fmt_grade(g) for _, g in p.grades)
    return f"({p.support}; base {{{base}}}; grades [{grades}])"
