"""Evaluate the query/check/expect statements of a resolved model."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..core import FSeqPoint, FSeqSet, FstsError, fmt_grade, format_point, format_set
from ..derived import (
    DEFAULT,
    Semantics,
    accumulation_profile,
    closedness_suite,
    derived_set,
    derived_set_oracle,
    is_accumulation,
    is_adherent,
    threshold_grid,
)
from ..operators import closure, component_closure_gap, duality_checks, identity_suite, interior, nbd
from ..quasi import q_fuzzy, q_point, q_sets, qw_point, qw_sets, qw_witnesses
from ..topology import FST, component, components_open, critical_points, finer, is_base, base_criterion
from .model import Model, ResolveError, Resolver
from .parser import Call, CheckStmt, DslError, Expect, Name, Num, Query, Span


class EvalError(DslError):
    kind = "evaluation"


@dataclass
class Result:
    id: str
    span: Span
    kind: str  # query, check, expect
    statement: str
    verdict: str
    witness: Any = None

    @property
    def failed(self) -> bool:
        return self.kind in ("check", "expect") and self.verdict != "pass" or self.verdict == "error"

    def to_dict(self) -> dict:
        out = {"id": self.id, "span": self.span.to_dict(), "kind": self.kind, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


# argument helpers -----------------------------------------------------------------


def _resolver(model: Model) -> Resolver:
    r = Resolver()
    r.universe, r.horizon, r.space = model.space.universe, model.space.horizon, model.space
    r.sets, r.points, r.topologies = model.sets, model.points, model.topologies
    r.names = set(model.sets) | set(model.points) | set(model.topologies)
    return r


def eval_set(model: Model, e) -> FSeqSet:
    if isinstance(e, Call) and e.fn in ("closure", "interior", "derived", "complement"):
        if e.fn == "complement":
            _arity(e, 1)
            return eval_set(model, e.args[0]).complement()
        _arity(e, 2)
        t = topology_arg(model, e.args[0])
        a = eval_set(model, e.args[1])
        return {"closure": closure, "interior": interior, "derived": derived_set}[e.fn](t, a)
    return _resolver(model).set_expr(e)


def _arity(call: Call, n: int):
    if len(call.args) != n:
        raise EvalError(f"{call.fn} takes {n} argument(s), got {len(call.args)}", call.span)


def topology_arg(model: Model, e) -> FST:
    if not isinstance(e, Name) or e.name not in model.topologies:
        raise EvalError("expected a topology name", e.span)
    topo = model.topologies[e.name]
    if topo.fst is None:
        raise EvalError(f"{e.name} does not satisfy the topology axioms", e.span)
    return topo.fst


def point_arg(model: Model, e) -> FSeqPoint:
    if isinstance(e, Name) and e.name in model.points:
        return model.points[e.name]
    if isinstance(e, Call) and e.fn == "dual":
        _arity(e, 1)
        try:
            return point_arg(model, e.args[0]).dual()
        except FstsError as exc:
            raise EvalError(str(exc), e.span) from None
    raise EvalError("expected a point name", e.span)


def _is_point(model: Model, e) -> bool:
    return (isinstance(e, Name) and e.name in model.points) or (isinstance(e, Call) and e.fn == "dual")


def universe_arg(model: Model, e) -> str:
    if isinstance(e, Name) and e.name in model.space.universe:
        return e.name
    raise EvalError("expected a universe point", e.span)


def index_arg(model: Model, e) -> int:
    space = model.space
    if isinstance(e, Name) and e.name == "tail":
        return space.tail
    if isinstance(e, Num) and e.value.denominator == 1 and 1 <= e.value <= space.horizon:
        return int(e.value)
    raise EvalError(f"expected an index 1..{space.horizon} or tail", e.span)


# rendering ---------------------------------------------------------------------------


def render(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, FSeqSet):
        return format_set(value)
    if isinstance(value, FSeqPoint):
        return format_point(value)
    if isinstance(value, Fraction):
        return fmt_grade(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(render(v) for v in value) + "]"
    return str(value)


# queries -----------------------------------------------------------------------------


def run_query(model: Model, call: Call, semantics: Semantics = DEFAULT):
    fn, args = call.fn, call.args
    space = model.space
    if fn in ("closure", "interior", "derived", "complement"):
        return eval_set(model, call)
    if fn == "derived_oracle":
        _arity(call, 2)
        t, a = topology_arg(model, args[0]), eval_set(model, args[1])
        return derived_set_oracle(t, a, threshold_grid(t, a), 2, semantics)
    if fn in ("q", "qw"):
        _arity(call, 2)
        if _is_point(model, args[0]):
            p, a = point_arg(model, args[0]), eval_set(model, args[1])
            return q_point(p, a) if fn == "q" else qw_point(p, a)
        a, b = eval_set(model, args[0]), eval_set(model, args[1])
        return q_sets(a, b) if fn == "q" else qw_sets(a, b)
    if fn == "q_components":
        _arity(call, 2)
        a, b = eval_set(model, args[0]), eval_set(model, args[1])
        live = [n for n in space.indices if not a.is_zero_component(n) and not b.is_zero_component(n)]
        return all(q_fuzzy(a.component(n), b.component(n)) for n in live)
    if fn == "witnesses":
        _arity(call, 2)
        ws = qw_witnesses(eval_set(model, args[0]), eval_set(model, args[1]))
        return [f"({w.z}, {space.index_name(w.index)})" for w in ws]
    if fn in ("leq", "leq_weak", "eq"):
        _arity(call, 2)
        a, b = eval_set(model, args[0]), eval_set(model, args[1])
        return {"leq": a.leq, "leq_weak": a.leq_weak, "eq": a.__eq__}[fn](b)
    if fn in ("member", "member_weak"):
        _arity(call, 2)
        return point_arg(model, args[0]).member(eval_set(model, args[1]), "weak" if fn == "member_weak" else "strong")
    if fn in ("adherent", "accumulation"):
        _arity(call, 3)
        t, p, a = topology_arg(model, args[0]), point_arg(model, args[1]), eval_set(model, args[2])
        return is_adherent(t, p, a) if fn == "adherent" else is_accumulation(t, p, a, semantics)
    if fn in ("nbd", "weak_nbd", "qnbd", "weak_qnbd"):
        _arity(call, 3)
        t, n, p = topology_arg(model, args[0]), eval_set(model, args[1]), point_arg(model, args[2])
        return nbd(t, n, p, fn)
    if fn == "dual":
        return point_arg(model, call)
    if fn in ("open", "closed"):
        _arity(call, 2)
        t, a = topology_arg(model, args[0]), eval_set(model, args[1])
        return t.is_open(a) if fn == "open" else t.is_closed(a)
    if fn in ("components_open", "all_components_open"):
        _arity(call, 2)
        flags = components_open(eval_set(model, args[1]), topology_arg(model, args[0]))
        return list(flags) if fn == "components_open" else all(flags)
    if fn == "component_gap":
        _arity(call, 2)
        gap = component_closure_gap(topology_arg(model, args[0]), eval_set(model, args[1]))
        return [space.index_name(k) for k in gap.strict]
    if fn == "strict_gap":
        _arity(call, 3)
        gap = component_closure_gap(topology_arg(model, args[0]), eval_set(model, args[1]))
        return index_arg(model, args[2]) in gap.strict
    if fn == "finer":
        _arity(call, 2)
        return finer(topology_arg(model, args[0]), topology_arg(model, args[1]))
    if fn in ("is_base", "base_criterion", "component_bases"):
        if not args:
            raise EvalError(f"{fn} needs a topology", call.span)
        t = topology_arg(model, args[0])
        beta = [eval_set(model, a) for a in args[1:]]
        try:
            if fn == "is_base":
                return is_base(t, beta)
            if fn == "base_criterion":
                return base_criterion(t, beta)
        except FstsError as exc:
            raise EvalError(str(exc), call.span) from None
        return all(component(t, k).is_base([b.component(k) for b in beta]) for k in space.indices)
    if fn == "eval":
        _arity(call, 2)
        return list(eval_set(model, args[0]).eval(universe_arg(model, args[1])))
    if fn == "profile":
        _arity(call, 4)
        t, a = topology_arg(model, args[0]), eval_set(model, args[1])
        prof = accumulation_profile(t, a, universe_arg(model, args[2]), index_arg(model, args[3]))
        ivals = ", ".join(f"({fmt_grade(lo)}, {fmt_grade(hi)}]" for lo, hi in prof.intervals)
        return f"m1={fmt_grade(prof.m1)} m2={fmt_grade(prof.m2)} attainable={{{ivals}}} max={fmt_grade(prof.max_grade)}"
    raise EvalError(f"unknown operation {fn!r}", call.span)


# checks ------------------------------------------------------------------------------


def run_check(model: Model, call: Call, semantics: Semantics = DEFAULT) -> tuple[bool, Any]:
    fn, args = call.fn, call.args
    if fn == "axioms":
        _arity(call, 1)
        if not isinstance(args[0], Name) or args[0].name not in model.topologies:
            raise EvalError("expected a topology name", args[0].span)
        report = model.topologies[args[0].name].report
        return report.valid, [f"{v.clause}: {v.message}" for v in report.violations] or None
    if fn == "identities":
        _arity(call, 3)
        t = topology_arg(model, args[0])
        res = identity_suite(t, eval_set(model, args[1]), eval_set(model, args[2]))
        bad = [k for k, v in res.items() if not v and k != "xii"]
        return not bad, {"failed": bad, "xii (experiment)": res["xii"]}
    if fn == "closedness":
        _arity(call, 2)
        t = topology_arg(model, args[0])
        target = point_arg(model, args[1]) if _is_point(model, args[1]) else eval_set(model, args[1])
        rep = closedness_suite(t, target, semantics)
        return rep.holds, [c.name for c in rep.failed()] or None
    if fn == "duality":
        _arity(call, 3)
        t = topology_arg(model, args[0])
        rep = duality_checks(t, eval_set(model, args[1]), point_arg(model, args[2]))
        return rep.holds, [f"{l.name}: {l.detail}" for l in rep.failed()] or None
    if fn == "props":
        _arity(call, 1)
        from ..propsuite.runner import run_on_fst

        t = topology_arg(model, args[0])
        opts = dict(call.options)
        unknown = set(opts) - {"trials", "seed"}
        if unknown:
            raise EvalError(f"unknown option(s) {sorted(unknown)}", call.span)
        reports = run_on_fst(t, trials=opts.get("trials", 200), seed=opts.get("seed", 42), semantics=semantics)
        failed = [r.property_id for r in reports if r.status == "assert" and r.failures]
        return not failed, {"failed": failed} if failed else None
    value = run_query(model, call, semantics)
    if isinstance(value, bool):
        return value, None
    raise EvalError(f"{fn} does not produce a verdict", call.span)


# expectations ---------------------------------------------------------------------


def _expected(model: Model, e):
    if isinstance(e, Name) and e.name in ("true", "false"):
        return e.name == "true"
    return eval_set(model, e)


def _statement_text(stmt) -> str:
    from .printer import print_call, print_expr

    if isinstance(stmt, Expect):
        return f"expect {print_call(stmt.call)} = {print_expr(stmt.value)}"
    word = "query" if isinstance(stmt, Query) else "check"
    return f"{word} {print_call(stmt.call)}"


def evaluate(model: Model, semantics: Semantics = DEFAULT, only_checks: bool = False) -> list[Result]:
    """Evaluate each statement in order; engine errors become ``error`` verdicts."""
    results = []
    for i, stmt in enumerate(model.statements, 1):
        if only_checks and isinstance(stmt, Query):
            continue
        kind = "query" if isinstance(stmt, Query) else "check" if isinstance(stmt, CheckStmt) else "expect"
        rid = f"s{i}"
        text = _statement_text(stmt)
        try:
            if kind == "query":
                results.append(Result(rid, stmt.span, kind, text, render(run_query(model, stmt.call, semantics))))
            elif kind == "check":
                ok, witness = run_check(model, stmt.call, semantics)
                results.append(Result(rid, stmt.span, kind, text, "pass" if ok else "fail", witness))
            else:
                actual = run_query(model, stmt.call, semantics)
                ok = actual == _expected(model, stmt.value)
                results.append(Result(rid, stmt.span, kind, text, "pass" if ok else "fail",
                                      None if ok else {"actual": render(actual)}))
        except DslError as exc:
            results.append(Result(rid, stmt.span, kind, text, "error", {"message": exc.render()}))
        except FstsError as exc:
            results.append(Result(rid, stmt.span, kind, text, "error", {"message": str(exc)}))
    return results


__all__ = ["EvalError", "Result", "eval_set", "evaluate", "render", "run_check", "run_query", "ResolveError", "critical_points"]
