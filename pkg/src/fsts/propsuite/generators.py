"""Seeded random models: a generated topology plus sample sets and points."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..core import FSeqPoint, FSeqSet, Grade, Space
from ..topology import FST, CapExceeded, generate


@dataclass(frozen=True)
class GenParams:
    max_points: int = 4
    max_horizon: int = 3
    max_grid: int = 6
    max_subbase: int = 4
    n_sets: int = 3
    n_points: int = 3
    base_cap: int = 20


@dataclass
class Case:
    """One randomized model together with the samples checked against it."""

    fst: FST
    subbase: list[FSeqSet]
    grid: tuple[Grade, ...]
    sets: list[FSeqSet] = field(default_factory=list)
    points: list[FSeqPoint] = field(default_factory=list)
    seed: int | None = None
    label: str = ""

    @property
    def space(self) -> Space:
        return self.fst.space


def make_grid(denominator: int) -> tuple[Grade, ...]:
    return tuple(Fraction(i, denominator) for i in range(denominator + 1))


def random_set(rng: random.Random, space: Space, grid) -> FSeqSet:
    rows = []
    for _ in space.indices:
        rows.append(tuple(rng.choice(grid) if rng.random() < 0.7 else grid[0] for _ in space.universe))
    return FSeqSet(space, tuple(rows))


def random_point(rng: random.Random, space: Space, grid) -> FSeqPoint:
    positive = [g for g in grid if g > 0]
    size = rng.randint(1, min(3, len(space.indices)))
    base = rng.sample(list(space.indices), size)
    x = rng.choice(space.universe)
    return FSeqPoint(space, x, tuple((n, rng.choice(positive)) for n in base))


def gen_model(seed: int, params: GenParams = GenParams()) -> Case:
    """Deterministic in ``seed``; subbases whose base overflows the cap are redrawn."""
    rng = random.Random(seed)
    n = rng.randint(1, params.max_points)
    space = Space(tuple("abcdefgh"[:n]), rng.randint(1, params.max_horizon))
    grid = make_grid(rng.randint(2, params.max_grid - 1))
    while True:
        subbase = [random_set(rng, space, grid) for _ in range(rng.randint(0, params.max_subbase))]
        try:
            fst = generate(space, subbase, cap=params.base_cap)
        except CapExceeded:
            continue
        break
    sets, points = _samples(rng, fst, grid, params)
    return Case(fst, subbase, grid, sets, points, seed)


def _samples(rng: random.Random, fst: FST, grid, params: GenParams):
    space = fst.space
    sets = []
    for _ in range(params.n_sets):
        roll = rng.random()
        if roll < 0.5 or len(fst) <= 2:
            sets.append(random_set(rng, space, grid))
        elif roll < 0.75:
            sets.append(rng.choice(fst.opens))
        else:
            sets.append(rng.choice(fst.opens).complement())
    points = [random_point(rng, space, grid) for _ in range(params.n_points)]
    return sets, points


def grid_of(fst: FST, limit: int = 6) -> tuple[Grade, ...]:
    """Grades occurring in the opens and their complements, thinned to ``limit`` values."""
    vals = sorted({v for o in fst.opens for row in o.rows for v in row} | {Fraction(0), Fraction(1)})
    vals = sorted(set(vals) | {1 - v for v in vals})
    if len(vals) > limit:
        step = (len(vals) - 1) / (limit - 1)
        vals = sorted({vals[round(i * step)] for i in range(limit)})
    return tuple(vals)


def sample_case(fst: FST, seed: int, params: GenParams = GenParams(), label: str = "") -> Case:
    """Random samples against a fixed topology."""
    rng = random.Random(seed)
    grid = grid_of(fst, params.max_grid)
    sets, points = _samples(rng, fst, grid, params)
    return Case(fst, [], grid, sets, points, seed, label)
