"""Quasi-coincidence predicates between sets and points."""

from __future__ import annotations

from dataclasses import dataclass

from .core import FSeqPoint, FSeqSet, _same_space


@dataclass(frozen=True, order=True)
class WitnessIndex:
    """A (point, index) pair where two sets weakly quasi-coincide."""

    z: str
    index: int


def q_sets(a: FSeqSet, b: FSeqSet) -> bool:
    """Strong quasi-coincidence of two sets.

    Only indices where both components are not identically zero take part.
    With no such index the answer is False (the zero set coincides with
    nothing).
    """
    space = _same_space(a, b)
    live = [n for n in space.indices if not a.is_zero_component(n) and not b.is_zero_component(n)]
    if not live:
        return False
    for i in range(len(space.universe)):
        if all(a.rows[n - 1][i] + b.rows[n - 1][i] > 1 for n in live):
            return True
    return False


def qw_witnesses(a: FSeqSet, b: FSeqSet) -> list[WitnessIndex]:
    space = _same_space(a, b)
    out = []
    for i, z in enumerate(space.universe):
        for n in space.indices:
            if a.rows[n - 1][i] + b.rows[n - 1][i] > 1:
                out.append(WitnessIndex(z, n))
    return out


def qw_sets(a: FSeqSet, b: FSeqSet) -> bool:
    _same_space(a, b)
    return any(
        x + y > 1 for r, s in zip(a.rows, b.rows) for x, y in zip(r, s)
    )


def q_point(p: FSeqPoint, a: FSeqSet) -> bool:
    _same_space(p, a)
    i = p.space.position(p.support)
    return all(g + a.rows[n - 1][i] > 1 for n, g in p.grades)


def qw_point(p: FSeqPoint, a: FSeqSet) -> bool:
    _same_space(p, a)
    i = p.space.position(p.support)
    return any(g + a.rows[n - 1][i] > 1 for n, g in p.grades)


def q_fuzzy(u, v) -> bool:
    """Quasi-coincidence of two ordinary fuzzy sets (rows)."""
    return any(a + b > 1 for a, b in zip(u, v))
