"""Canonical text for a resolved model.

Sets are written out as literals and topologies as explicit families, so
``parse(print_model(m)) == m`` whatever forms the source used.
"""

from __future__ import annotations

from ..core import FSeqPoint, FSeqSet, fmt_grade
from .model import Model
from .parser import Binary, Call, ConstSet, Fuzzy, Name, Num, SetLit, Unary


def print_set(s: FSeqSet) -> str:
    space = s.space
    parts = []
    for n in space.indices:
        label = "tail" if space.is_tail(n) else f"n{n}"
        row = s.rows[n - 1]
        entries = ", ".join(f"{x}: {fmt_grade(g)}" for x, g in zip(space.universe, row))
        parts.append(f"{label}: {{{entries}}}")
    return "[" + ", ".join(parts) + "]"


def print_point(name: str, p: FSeqPoint) -> str:
    space = p.space
    base = ", ".join(space.index_name(n) for n, _ in p.grades)
    grades = ", ".join(fmt_grade(g) for _, g in p.grades)
    return f"point {name} = ({p.support}; base {{{base}}}; grades [{grades}]);"


def _fuzzy(f: Fuzzy) -> str:
    return "{" + ", ".join(f"{x}: {fmt_grade(g)}" for x, g in f.entries) + "}"


def print_expr(e) -> str:
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Num):
        return fmt_grade(e.value)
    if isinstance(e, ConstSet):
        return f"X({fmt_grade(e.level)})"
    if isinstance(e, SetLit):
        return "[" + ", ".join(f"{label}: {_fuzzy(f)}" for label, f in e.components) + "]"
    if isinstance(e, Unary):
        return "~" + print_expr(e.operand)
    if isinstance(e, Binary):
        op = "∨" if e.op == "join" else "∧"
        return f"({print_expr(e.left)} {op} {print_expr(e.right)})"
    if isinstance(e, Call):
        return print_call(e)
    raise TypeError(f"cannot print {type(e).__name__}")


def print_call(c: Call) -> str:
    inner = ", ".join(print_expr(a) for a in c.args)
    for key, value in c.options:
        inner += f"; {key}={value}"
    return f"{c.fn}({inner})"


def print_model(m: Model) -> str:
    from .parser import CheckStmt, Expect, Query

    lines = [f"universe {' '.join(m.space.universe)};", f"horizon {m.space.horizon};"]
    for name, s in m.sets.items():
        lines.append(f"fset {name} = {print_set(s)};")
    for name, p in m.points.items():
        lines.append(print_point(name, p))
    for name, topo in m.topologies.items():
        family = sorted(set(topo.family), key=FSeqSet.sort_key)
        lines.append(f"topology {name} = explicit(" + ", ".join(print_set(s) for s in family) + ");")
    for st in m.statements:
        if isinstance(st, Query):
            lines.append(f"query {print_call(st.call)};")
        elif isinstance(st, CheckStmt):
            lines.append(f"check {print_call(st.call)};")
        elif isinstance(st, Expect):
            lines.append(f"expect {print_call(st.call)} = {print_expr(st.value)};")
    return "\n".join(lines) + "\n"
