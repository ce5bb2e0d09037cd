import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from fsts.core import FSeqPoint, FSeqSet, Space

GRID = tuple(Fraction(i, 4) for i in range(5))


def S(space, *rows):
    """Set from per-index rows of grades; the last row is the tail."""
    return FSeqSet(space, tuple(tuple(Fraction(v) for v in r) for r in rows))


def P(space, x, **grades):
    """Point from keyword grades: n1=..., n2=..., tail=..."""
    pairs = []
    for key, g in grades.items():
        n = space.tail if key == "tail" else int(key[1:])
        pairs.append((n, Fraction(g)))
    return FSeqPoint(space, x, tuple(sorted(pairs)))


@pytest.fixture
def ab2():
    return Space(("a", "b"), 2)


spaces = st.builds(
    Space,
    st.sampled_from([("a",), ("a", "b"), ("a", "b", "c")]),
    st.integers(1, 3),
)


@st.composite
def sets_in(draw, space, grid=GRID):
    rows = tuple(
        tuple(draw(st.sampled_from(grid)) for _ in space.universe) for _ in space.indices
    )
    return FSeqSet(space, rows)


@st.composite
def points_in(draw, space, grid=GRID):
    positive = [g for g in grid if g > 0]
    base = draw(st.lists(st.sampled_from(list(space.indices)), min_size=1, max_size=3, unique=True))
    x = draw(st.sampled_from(space.universe))
    return FSeqPoint(space, x, tuple(sorted((n, draw(st.sampled_from(positive))) for n in base)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
