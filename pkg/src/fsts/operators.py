"""Neighbourhoods, closure, interior and the duality/identity checks built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .core import FSeqPoint, FSeqSet, PointError, _same_space, join_all, meet_all
from .quasi import q_point, qw_point, qw_sets
from .topology import FST, component

NBD_KINDS = ("nbd", "weak_nbd", "qnbd", "weak_qnbd")


def _relation(kind):
    if kind == "nbd":
        return lambda p, b: p.member(b, "strong")
    if kind == "weak_nbd":
        return lambda p, b: p.member(b, "weak")
    if kind == "qnbd":
        return q_point
    if kind == "weak_qnbd":
        return qw_point
    raise ValueError(f"unknown neighbourhood kind {kind!r}")


def nbd(t: FST, n: FSeqSet, p: FSeqPoint, kind: str = "nbd") -> bool:
    """Is ``n`` a neighbourhood of ``p`` of the given kind?

    The four kinds ask for an open set ``B <= n`` that contains ``p``,
    weakly contains it, is quasi-coincident with it, or weakly so.
    """
    _same_space(n, p)
    rel = _relation(kind)
    return any(b.leq(n) and rel(p, b) for b in t.opens)


def open_nbds(t: FST, p: FSeqPoint, kind: str) -> list[FSeqSet]:
    rel = _relation(kind)
    return [b for b in t.opens if rel(p, b)]


@lru_cache(maxsize=65536)
def closure(t: FST, a: FSeqSet) -> FSeqSet:
    _same_space(t, a)
    return meet_all(t.space, (c for c in t.closed_sets if a.leq(c)))


@lru_cache(maxsize=65536)
def interior(t: FST, a: FSeqSet) -> FSeqSet:
    _same_space(t, a)
    return join_all(t.space, (o for o in t.opens if o.leq(a)))


@dataclass
class GapReport:
    sequential: list[tuple]  # per index, closure component in the sequential space
    componentwise: list[tuple]  # per index, closure in the component topology
    leq: list[bool]
    strict: list[int]

    @property
    def holds(self) -> bool:
        return all(self.leq)


def component_closure_gap(t: FST, a: FSeqSet) -> GapReport:
    cl = closure(t, a)
    seq, comp, leq, strict = [], [], [], []
    for k in t.space.indices:
        c_k = component(t, k).closure(a.component(k))
        s_k = cl.component(k)
        seq.append(s_k)
        comp.append(c_k)
        leq.append(all(u <= v for u, v in zip(c_k, s_k)))
        if c_k != s_k:
            strict.append(k)
    return GapReport(seq, comp, leq, strict)


@dataclass
class Link:
    name: str
    holds: bool
    detail: str = ""
    skipped: bool = False


@dataclass
class DualityReport:
    links: list[Link] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(link.holds for link in self.links)

    def failed(self) -> list[Link]:
        return [link for link in self.links if not link.holds]


def duality_checks(t: FST, a: FSeqSet, p: FSeqPoint) -> DualityReport:
    """Evaluate the closure sandwich and the two dual-point equivalences for ``p``."""
    report = DualityReport()
    in_cl = p.member(closure(t, a))
    q_nbds = open_nbds(t, p, "qnbd")
    wq_nbds = open_nbds(t, p, "weak_qnbd")
    all_q = all(qw_sets(b, a) for b in q_nbds)
    all_wq = all(qw_sets(b, a) for b in wq_nbds)
    report.links.append(
        Link("sandwich-1", (not all_q) or in_cl,
             "" if (not all_q) or in_cl else "every open Q-nbd meets A but the point is outside the closure")
    )
    report.links.append(
        Link("sandwich-2", (not in_cl) or all_wq,
             "" if (not in_cl) or all_wq else "point in closure but an open weak Q-nbd misses A")
    )
    try:
        d = p.dual()
    except PointError:
        for name in ("interior-dual", "closure-dual-nbd", "qnbd-equals-dual-nbd"):
            report.links.append(Link(name, True, "all grades are 1; the dual is not a point", skipped=True))
        return report
    in_int = p.member(interior(t, a))
    dual_out = not d.member(closure(t, a.complement()))
    report.links.append(
        Link("interior-dual", in_int == dual_out,
             f"point in interior={in_int}, dual outside closure of complement={dual_out}")
    )
    nbds_of_dual = open_nbds(t, d, "nbd")
    cor = in_cl == all(qw_sets(b, a) for b in nbds_of_dual)
    report.links.append(
        Link("closure-dual-nbd", cor, f"point in closure={in_cl}")
    )
    # an open set is its own witness and both relations are monotone, so for
    # open B "B is a Q-nbd of p" is just p q B, and likewise for the dual
    mismatch = [b for b in t.opens if q_point(p, b) != d.member(b)]
    report.links.append(
        Link("qnbd-equals-dual-nbd", not mismatch,
             f"{len(mismatch)} open sets separate Q-nbds of the point from nbds of its dual")
    )
    return report


def identity_suite(t: FST, a: FSeqSet, b: FSeqSet) -> dict[str, bool]:
    """Closure/interior identities on one pair of sets, keyed by clause number."""
    cl, it = (lambda s: closure(t, s)), (lambda s: interior(t, s))
    zero, one = t.zero, t.one
    ca = a.complement()
    return {
        "i": cl(zero) == zero and cl(one) == one,
        "ii": t.is_closed(a) == (cl(a) == a),
        "iii": cl(cl(a)) == cl(a),
        "iv": cl(a.join(b)) == cl(a).join(cl(b)),
        "v": cl(a.meet(b)).leq(cl(a).meet(cl(b))),
        "vi": it(zero) == zero and it(one) == one,
        "vii": t.is_open(a) == (it(a) == a),
        "viii": it(it(a)) == it(a),
        "ix": it(a.meet(b)) == it(a).meet(it(b)),
        "x": it(a.join(b)) == it(a).join(it(b)),
        "xi": it(a) == cl(ca).complement(),
        "xii": cl(a) == cl(it(ca)),
        "xiii": cl(a).complement() == it(ca),
        "xiv": cl(ca) == it(a).complement(),
    }
