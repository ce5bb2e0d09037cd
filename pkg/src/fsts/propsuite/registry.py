"""One checker per statement about the engine's objects.

A checker takes a :class:`Case` and returns ``None`` when the statement holds
on every sample (or is vacuous there) and a short failure description
otherwise. ``experiment`` entries are reported as verdict counts and never
fail a run.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Optional

from ..core import FstsError, format_point, format_set, join_all
from ..derived import (
    Semantics,
    closedness_suite,
    derived_set,
    derived_set_oracle,
    is_accumulation,
    is_adherent,
    theorem_closed_derived,
    threshold_grid,
)
from ..operators import closure, component_closure_gap, duality_checks, identity_suite, nbd
from ..quasi import q_fuzzy, q_point, q_sets, qw_point, qw_sets
from ..topology import (
    CapExceeded,
    base_criterion,
    base_from_subbase,
    check_axioms,
    component,
    components_closed,
    components_open,
    finer,
    generate,
    is_base,
    lift,
)
from .generators import Case

LIFT_CAP = 64
ORACLE_CAP = 8000  # enumerated points; larger cases are skipped by the oracle checks  # product lifts above this size are skipped in random trials

Checker = Callable[[Case, Semantics], Optional[str]]


@dataclass(frozen=True)
class PropertyId:
    id: str
    statement: str
    status: str  # assert or experiment
    check: Optional[Checker] = None  # None: covered by the corpus only
    corpus: tuple[str, ...] = ()


def _pairs(case: Case):
    sets = case.sets
    return [(a, b) for a in sets for b in sets]


def _sp(a, p):
    return f"A={format_set(a)}, P={format_point(p)}"


# definitions and basic structure ---------------------------------------------------


def check_lattice(case: Case, sem) -> Optional[str]:
    for a, b in _pairs(case):
        j, m = a.join(b), a.meet(b)
        if not (a.leq(j) and b.leq(j) and m.leq(a) and m.leq(b)):
            return f"join/meet not bounds for {format_set(a)}, {format_set(b)}"
        if j.complement() != a.complement().meet(b.complement()):
            return f"De Morgan fails for {format_set(a)}, {format_set(b)}"
    return None


def check_order(case: Case, sem) -> Optional[str]:
    for a, b in _pairs(case):
        if a.leq(b) and not a.leq_weak(b):
            return "strong order without weak order"
        if (a == b) != (a.leq(b) and b.leq(a)):
            return "equality is not mutual order"
    for a in case.sets:
        if a.complement().complement() != a:
            return "complement is not an involution"
    return None


def check_points(case: Case, sem) -> Optional[str]:
    for p in case.points:
        for a in case.sets:
            if p.member(a) != p.embed().leq(a):
                return f"membership differs from order: {_sp(a, p)}"
            if p.member(a) and not p.member(a, "weak"):
                return f"strong membership without weak: {_sp(a, p)}"
        for sub in p.simple_reductions():
            if not sub.embed().leq(p.embed()):
                return f"reduction not below its point: {format_point(p)}"
    return None


def check_axioms_hold(case: Case, sem) -> Optional[str]:
    rep = check_axioms(case.fst.opens)
    return None if rep.valid else "; ".join(v.message for v in rep.violations)


def check_finer(case: Case, sem) -> Optional[str]:
    if not finer(case.fst, case.fst):
        return "a topology is not finer than itself"
    for i in range(len(case.subbase)):
        try:
            weaker = generate(case.space, case.subbase[:i] + case.subbase[i + 1:])
        except CapExceeded:
            continue
        if not finer(weaker, case.fst):
            return f"dropping subbase element {i} gave a topology not weaker than the original"
    return None


def _lifted(case: Case, kind: str):
    out = []
    for k in case.space.indices:
        try:
            out.append(lift(case.space, component(case.fst, k), kind, max_opens=LIFT_CAP))
        except CapExceeded:
            continue
    return out


def check_product(case: Case, sem) -> Optional[str]:
    for t in _lifted(case, "product"):
        if not check_axioms(t.opens).valid:
            return "product of a component topology fails the axioms"
    return None


def check_constant(case: Case, sem) -> Optional[str]:
    for k in case.space.indices:
        delta = component(case.fst, k)
        const = lift(case.space, delta, "constant")
        if not check_axioms(const.opens).valid:
            return f"constant lift of component {k} fails the axioms"
        try:
            prod = lift(case.space, delta, "product", max_opens=LIFT_CAP)
        except CapExceeded:
            continue
        if not finer(const, prod):
            return f"constant lift of component {k} not weaker than the product"
    return None


def check_components_ft(case: Case, sem) -> Optional[str]:
    for k in case.space.indices:
        problems = component(case.fst, k).validate()
        if problems:
            return f"component {k}: {', '.join(problems)}"
    return None


def check_open_components(case: Case, sem) -> Optional[str]:
    for o in case.fst.opens:
        if not all(components_open(o, case.fst)):
            return f"open set with a non-open component: {format_set(o)}"
        if not all(components_closed(o.complement(), case.fst)):
            return f"closed set with a non-closed component: {format_set(o.complement())}"
    return None


# quasi-coincidence and neighbourhoods -----------------------------------------------


def check_q_components(case: Case, sem) -> Optional[str]:
    space = case.space
    for a, b in _pairs(case):
        if not q_sets(a, b):
            continue
        for n in space.indices:
            if a.is_zero_component(n) or b.is_zero_component(n):
                continue
            if not q_fuzzy(a.component(n), b.component(n)):
                return f"q holds but component {space.index_name(n)} does not: {format_set(a)}, {format_set(b)}"
    return None


def check_q_point_components(case: Case, sem) -> Optional[str]:
    space = case.space
    for p in case.points:
        i = space.position(p.support)
        for a in case.sets:
            by_index = all(g + a.rows[n - 1][i] > 1 for n, g in p.grades)
            if q_point(p, a) != by_index:
                return _sp(a, p)
    return None


def check_order_vs_qw(case: Case, sem) -> Optional[str]:
    for a, b in _pairs(case):
        if a.leq(b) == qw_sets(a, b.complement()):
            return f"order vs weak q disagree: {format_set(a)}, {format_set(b)}"
    for p in case.points:
        for a in case.sets:
            if p.member(a) == qw_point(p, a.complement()):
                return f"membership vs weak q disagree: {_sp(a, p)}"
    return None


def check_weak_order_vs_q(case: Case, sem) -> Optional[str]:
    for a, b in _pairs(case):
        if a.leq_weak(b) == q_sets(a, b.complement()):
            return f"weak order vs q disagree: {format_set(a)}, {format_set(b)}"
    for p in case.points:
        for a in case.sets:
            if p.member(a, "weak") == q_point(p, a.complement()):
                return f"weak membership vs q disagree: {_sp(a, p)}"
    return None


def _families(case: Case):
    fams = [list(f) for f in itertools.combinations(case.sets, 2)]
    fams.append(list(case.sets))
    fams.append(list(case.fst.opens))
    return [f for f in fams if f]


def check_qw_join(case: Case, sem) -> Optional[str]:
    for fam in _families(case):
        j = join_all(case.space, fam)
        for p in case.points:
            if qw_point(p, j) != any(qw_point(p, a) for a in fam):
                return f"P={format_point(p)}, join={format_set(j)}"
    return None


def check_q_join(case: Case, sem) -> Optional[str]:
    for fam in _families(case):
        j = join_all(case.space, fam)
        for p in case.points:
            if any(q_point(p, a) for a in fam) and not q_point(p, j):
                return f"P={format_point(p)}, join={format_set(j)}"
    return None


def check_nbd_hierarchy(case: Case, sem) -> Optional[str]:
    t = case.fst
    for p in case.points:
        for n in (*case.sets, *t.opens):
            if nbd(t, n, p, "nbd") and not nbd(t, n, p, "weak_nbd"):
                return f"nbd but not weak nbd: {_sp(n, p)}"
            if nbd(t, n, p, "qnbd") and not nbd(t, n, p, "weak_qnbd"):
                return f"Q-nbd but not weak Q-nbd: {_sp(n, p)}"
    return None


# bases ---------------------------------------------------------------------------------


def _random_betas(case: Case, count: int = 4):
    rng = random.Random(case.seed if case.seed is not None else 0)
    opens = list(case.fst.opens)
    betas = [opens]
    for _ in range(count):
        betas.append([o for o in opens if rng.random() < 0.5])
    if case.subbase:
        try:
            betas.append(base_from_subbase(case.space, case.subbase))
        except CapExceeded:
            pass
    return betas


def check_base_criterion(case: Case, sem) -> Optional[str]:
    for beta in _random_betas(case):
        if is_base(case.fst, beta) != base_criterion(case.fst, beta):
            return f"disagreement on a family of {len(beta)} opens"
    return None


def check_component_bases(case: Case, sem) -> Optional[str]:
    t = case.fst
    for beta in _random_betas(case):
        if not is_base(t, beta):
            continue
        for k in case.space.indices:
            if not component(t, k).is_base([b.component(k) for b in beta]):
                return f"component {k} of a base is not a base"
    return None


# closure and interior -------------------------------------------------------------


def check_component_closure(case: Case, sem) -> Optional[str]:
    for a in case.sets:
        if not component_closure_gap(case.fst, a).holds:
            return f"component closure above sequential closure for {format_set(a)}"
    return None


def _identity(clause: str) -> Checker:
    def check(case: Case, sem) -> Optional[str]:
        for a, b in _pairs(case):
            if not identity_suite(case.fst, a, b)[clause]:
                return f"A={format_set(a)}, B={format_set(b)}"
        return None

    check.__name__ = f"check_identity_{clause}"
    return check


def _links(*names: str) -> Checker:
    def check(case: Case, sem) -> Optional[str]:
        for a in case.sets:
            for p in case.points:
                for link in duality_checks(case.fst, a, p).links:
                    if link.name in names and not link.holds:
                        return f"{link.name}: {_sp(a, p)}"
        return None

    return check


# derived sets --------------------------------------------------------------------------


def check_reduced_accumulation(case: Case, sem) -> Optional[str]:
    for a in case.sets:
        for p in case.points:
            if not is_accumulation(case.fst, p, a, sem):
                continue
            base = sorted(p.base)
            for size in range(1, len(base)):
                for sub in itertools.combinations(base, size):
                    r = p.reduce(sub)
                    if not is_accumulation(case.fst, r, a, sem):
                        return f"reduction {format_point(r)} is not an accumulation point: {_sp(a, p)}"
    return None


def _set_targets(case: Case):
    return [*case.sets, *(p.embed() for p in case.points)]


def _closedness(name: str, points_only: bool = False, simple: bool = False) -> Checker:
    def check(case: Case, sem) -> Optional[str]:
        if points_only:
            targets = list(case.points)
            if simple:
                targets = [r for p in case.points for r in p.simple_reductions()]
        else:
            targets = _set_targets(case)
        for target in targets:
            rep = closedness_suite(case.fst, target, sem)
            if not rep[name]:
                shown = format_point(target) if points_only else format_set(target)
                return f"{shown}"
        return None

    return check


def check_closed_derived(case: Case, sem) -> Optional[str]:
    grid = case.grid
    c = theorem_closed_derived(case.fst, _set_targets(case), grid, sem)
    return None if c.holds else c.detail


def check_oracle(case: Case, sem) -> Optional[str]:
    for a in _set_targets(case):
        grid = threshold_grid(case.fst, a)
        try:
            oracle = derived_set_oracle(case.fst, a, grid, 2, sem, cap=ORACLE_CAP)
        except CapExceeded:
            continue
        fast = derived_set(case.fst, a, sem)
        if fast != oracle:
            return f"A={format_set(a)}: closed form {format_set(fast)}, oracle {format_set(oracle)}"
    return None


# experiments ---------------------------------------------------------------------------


def exp_witness(case: Case, sem) -> Optional[str]:
    whole = Semantics(sem.membership, "maximal")
    per = Semantics(sem.membership, "per_index")
    for a in _set_targets(case):
        grid = threshold_grid(case.fst, a)
        try:
            wide = derived_set_oracle(case.fst, a, grid, len(case.space.indices), whole, cap=ORACLE_CAP // 4)
        except CapExceeded:
            continue
        if derived_set(case.fst, a, per) != wide:
            return f"witness readings differ for {format_set(a)}"
    return None


def exp_membership(case: Case, sem) -> Optional[str]:
    other = Semantics("strong" if sem.membership == "weak" else "weak", sem.witness)
    for a in _set_targets(case):
        if derived_set(case.fst, a, sem) != derived_set(case.fst, a, other):
            return f"membership readings differ for {format_set(a)}"
    return None


def exp_derived_monotone(case: Case, sem) -> Optional[str]:
    for a, b in _pairs(case):
        if a.leq(b) and not derived_set(case.fst, a, sem).leq(derived_set(case.fst, b, sem)):
            return f"{format_set(a)} <= {format_set(b)} but derived sets are not ordered"
    return None


def exp_closure_adherence(case: Case, sem) -> Optional[str]:
    t = case.fst
    for a in case.sets:
        for p in case.points:
            if is_adherent(t, p, a) != p.member(closure(t, a)):
                return f"adherence differs from closure membership: {_sp(a, p)}"
    return None


# the registry ----------------------------------------------------------------------------

A, E = "assert", "experiment"

REGISTRY: tuple[PropertyId, ...] = (
    PropertyId("S1-lattice", "Join and meet are the componentwise least upper and greatest lower bounds; complement turns joins into meets.", A, check_lattice),
    PropertyId("S1-order", "Strong order implies weak order; equality is two-sided order; complement is an involution.", A, check_order),
    PropertyId("S1-points", "A point belongs to a set exactly when its embedding lies below it; strong membership implies weak; reductions lie below the point.", A, check_points),
    PropertyId("D2.1", "A generated family contains both constants and is closed under finite meets and joins.", A, check_axioms_hold),
    PropertyId("D2.2", "Every topology is finer than itself and than the one generated by fewer subbase sets.", A, check_finer),
    PropertyId("P2.1", "The sequence power of an ordinary fuzzy topology is a sequential topology.", A, check_product),
    PropertyId("P2.1-c", "The constant sequences over an ordinary fuzzy topology form a sequential topology weaker than its power.", A, check_constant),
    PropertyId("P2.2", "Each index slice of a sequential topology is an ordinary fuzzy topology.", A, check_components_ft),
    PropertyId("P2.3", "Components of open (closed) sets are open (closed) in the slice topologies.", A, check_open_components,
               ("prop_2_3_converse",)),
    PropertyId("D2.4-2.11", "Neighbourhoods imply weak neighbourhoods; Q-neighbourhoods imply weak Q-neighbourhoods.", A, check_nbd_hierarchy),
    PropertyId("P2.4", "Quasi-coincident sets are quasi-coincident at every index where both components are nonzero.", A, check_q_components,
               ("prop_2_4",)),
    PropertyId("C2.1", "A point is quasi-coincident with a set exactly when it is so at every index of its base.", A, check_q_point_components),
    PropertyId("P2.5", "A <= B iff A is not weakly quasi-coincident with the complement of B; likewise for point membership.", A, check_order_vs_qw),
    PropertyId("P2.5-w", "A <=_w B iff A is not quasi-coincident with the complement of B; likewise for weak membership.", E, check_weak_order_vs_q),
    PropertyId("P2.6", "A point weakly meets a join iff it weakly meets one of the joined sets.", A, check_qw_join),
    PropertyId("C2.2", "Quasi-coincidence with one member implies quasi-coincidence with the join.", A, check_q_join,
               ("cor_2_2",)),
    PropertyId("T2.1", "A subfamily of opens is a base iff it separates every open weak Q-neighbourhood of every point.", A, check_base_criterion),
    PropertyId("P2.7", "The slices of a base are bases of the slice topologies.", A, check_component_bases,
               ("prop_2_7_converse",)),
    PropertyId("P2.8", "Slice closure lies below the slice of the sequential closure.", A, check_component_closure,
               ("post_prop_2_8",)),
    *(
        PropertyId(f"P2.9-{c}", f"Closure/interior identity ({c}).", E if c == "xii" else A, _identity(c))
        for c in ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii", "xiii", "xiv")
    ),
    PropertyId("T2.2", "If every open Q-neighbourhood of a point weakly meets A the point is in the closure; then every open weak Q-neighbourhood weakly meets A.", A,
               _links("sandwich-1", "sandwich-2")),
    PropertyId("T2.3", "A point lies in the interior of A iff its dual is outside the closure of the complement.", A, _links("interior-dual")),
    PropertyId("C2.3", "A point is in the closure of A iff every open neighbourhood of its dual weakly meets A.", A, _links("closure-dual-nbd")),
    PropertyId("X-qnbd-dual", "Open Q-neighbourhoods of a point coincide with open neighbourhoods of its dual.", E, _links("qnbd-equals-dual-nbd")),
    PropertyId("P2.10", "Every reduction of an accumulation point is an accumulation point.", A, check_reduced_accumulation,
               ("post_prop_2_10",)),
    PropertyId("T2.4", "Closure equals the join of a set with its derived set.", A, _closedness("closure-is-join-with-derived")),
    PropertyId("T2.4-c", "A set is closed iff it contains its derived set.", A, _closedness("closed-iff-contains-derived")),
    PropertyId("R2.1", "A derived set need not be closed.", A, None, ("example_2_1",)),
    PropertyId("P2.11", "The derived set of a point is the join of the derived sets of its simple reductions.", A,
               _closedness("point-derived-is-join-of-simple", points_only=True)),
    PropertyId("P2.12", "If every simple reduction has a closed derived set, so does the point.", A,
               _closedness("simple-closed-implies-point-closed", points_only=True)),
    PropertyId("R2.2", "A point can have a closed derived set while a simple reduction does not.", A, None, ("example_2_2",)),
    *(
        PropertyId(f"L2.1-{c}", f"Closure versus derived set of a point, clause ({c}).", A,
                   _closedness(f"L2.1-{c}", points_only=True))
        for c in ("i", "ii", "iii", "iv", "v")
    ),
    *(
        PropertyId(f"L2.2-{c}", f"Closure versus derived set of a simple point, clause ({c}).", A,
                   _closedness(f"L2.2-{c}", points_only=True, simple=True))
        for c in ("i", "ii", "iii")
    ),
    PropertyId("T2.5", "Derived sets of all sets are closed iff derived sets of all simple points are closed.", A, check_closed_derived),
    PropertyId("ENG-oracle", "The closed-form derived set matches brute-force enumeration over the threshold grid.", A, check_oracle),
    PropertyId("X-witness", "Per-index and whole-base witness readings give the same derived sets.", E, exp_witness),
    PropertyId("X-membership", "Strong and weak membership readings give the same derived sets.", E, exp_membership),
    PropertyId("X-derived-monotone", "Derived sets are monotone in the set.", E, exp_derived_monotone),
    PropertyId("X-closure-adherence", "Adherence points are exactly the points of the closure.", E, exp_closure_adherence),
)

BY_ID = {p.id: p for p in REGISTRY}


def select(ids=None) -> list[PropertyId]:
    if not ids:
        return list(REGISTRY)
    unknown = [i for i in ids if i not in BY_ID]
    if unknown:
        raise FstsError(f"unknown property id(s): {', '.join(unknown)}")
    return [BY_ID[i] for i in ids]
