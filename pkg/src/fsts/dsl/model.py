"""Name resolution: turn parsed statements into an evaluable :class:`Model`."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..core import FSeqPoint, FSeqSet, FstsError, Space
from ..topology import FST, AxiomReport, ComponentFT, check_axioms, constants_family, generate, lift
from .parser import (
    Binary,
    Call,
    CheckStmt,
    ConstSet,
    DslError,
    Expect,
    FsetDecl,
    Fuzzy,
    Horizon,
    Name,
    Num,
    PointDecl,
    Query,
    SetLit,
    Span,
    TopologyDecl,
    Unary,
    Universe,
    parse_statements,
)

RESERVED = {"X", "X0", "X1", "true", "false", "tail"}

# set-valued functions usable inside expressions: name -> needs topology first
SET_FUNCTIONS = {"closure": True, "interior": True, "derived": True, "complement": False}


class ResolveError(DslError):
    kind = "resolution"


class ModelConsistencyError(DslError):
    kind = "model"


@dataclass
class Topology:
    """A declared family of opens; ``fst`` is set only when it satisfies the axioms."""

    name: str
    family: tuple[FSeqSet, ...]
    report: AxiomReport
    span: Span | None = field(default=None, compare=False)

    @property
    def fst(self) -> FST | None:
        return self.report.fst

    def __eq__(self, other):
        return isinstance(other, Topology) and (self.name, set(self.family)) == (other.name, set(other.family))


@dataclass
class Model:
    space: Space
    sets: dict[str, FSeqSet]
    points: dict[str, FSeqPoint]
    topologies: dict[str, Topology]
    statements: list  # Query | CheckStmt | Expect

    def __eq__(self, other):
        return isinstance(other, Model) and (
            self.space, self.sets, self.points, self.topologies, self.statements
        ) == (other.space, other.sets, other.points, other.topologies, other.statements)


def _labels(space: Space):
    return {f"n{n}": n for n in range(1, space.horizon + 1)} | {"tail": space.tail}


class Resolver:
    def __init__(self):
        self.universe: tuple[str, ...] | None = None
        self.horizon: int | None = None
        self.space: Space | None = None
        self.sets: dict[str, FSeqSet] = {}
        self.points: dict[str, FSeqPoint] = {}
        self.topologies: dict[str, Topology] = {}
        self.statements = []
        self.names: set[str] = set()

    def need_space(self, span) -> Space:
        if self.space is None:
            if self.universe is None or self.horizon is None:
                raise ModelConsistencyError("universe and horizon must be declared first", span)
            self.space = Space(self.universe, self.horizon)
        return self.space

    def declare(self, name, span):
        if name in RESERVED:
            raise ResolveError(f"{name!r} is reserved", span)
        if name in self.names:
            raise ResolveError(f"name {name!r} already declared", span)
        self.names.add(name)

    # declarations
    def run(self, stmts) -> Model:
        for s in stmts:
            if isinstance(s, Universe):
                if self.universe is not None:
                    raise ModelConsistencyError("universe declared twice", s.span)
                if len(set(s.names)) != len(s.names):
                    raise ModelConsistencyError("universe point names must be unique", s.span)
                self.universe = s.names
            elif isinstance(s, Horizon):
                if self.horizon is not None:
                    raise ModelConsistencyError("horizon declared twice", s.span)
                if s.value < 1:
                    raise ModelConsistencyError("horizon must be at least 1", s.span)
                if s.value > 64:
                    raise ModelConsistencyError("horizon above 64 is not supported", s.span)
                self.horizon = s.value
            elif isinstance(s, FsetDecl):
                self.need_space(s.span)
                self.declare(s.name, s.span)
                self.sets[s.name] = self.set_expr(s.expr)
            elif isinstance(s, PointDecl):
                self.need_space(s.span)
                self.declare(s.name, s.span)
                self.points[s.name] = self.point(s)
            elif isinstance(s, TopologyDecl):
                self.need_space(s.span)
                self.declare(s.name, s.span)
                self.topologies[s.name] = self.topology(s)
            else:
                self.need_space(s.span)
                self.check_refs(s.call if not isinstance(s, Expect) else s.call)
                if isinstance(s, Expect):
                    self.check_refs(s.value)
                self.statements.append(s)
        space = self.need_space(Span(1, 1, 0, 0))
        return Model(space, self.sets, self.points, self.topologies, self.statements)

    def check_refs(self, node):
        if isinstance(node, Name):
            if node.name not in self.names and node.name not in RESERVED and node.name not in self.universe:
                raise ResolveError(f"unknown name {node.name!r}", node.span)
        elif isinstance(node, (Unary,)):
            self.check_refs(node.operand)
        elif isinstance(node, Binary):
            self.check_refs(node.left)
            self.check_refs(node.right)
        elif isinstance(node, Call):
            for a in node.args:
                self.check_refs(a)
        elif isinstance(node, SetLit):
            self.set_literal(node)

    def point(self, s: PointDecl) -> FSeqPoint:
        space = self.space
        if s.support not in space.universe:
            raise ResolveError(f"unknown universe point {s.support!r}", s.span)
        if len(s.base) != len(s.grades):
            raise ModelConsistencyError(
                f"base has {len(s.base)} indices but {len(s.grades)} grades were given", s.span)
        idx = []
        for label in s.base:
            n = space.tail if label == "tail" else int(label)
            if not 1 <= n <= space.tail:
                raise ModelConsistencyError(f"index {label} beyond horizon {space.horizon}", s.span)
            idx.append(n)
        if len(set(idx)) != len(idx):
            raise ModelConsistencyError("repeated index in point base", s.span)
        pairs = sorted(zip(idx, s.grades))
        try:
            return FSeqPoint(space, s.support, tuple(pairs))
        except FstsError as exc:
            raise ModelConsistencyError(str(exc), s.span) from None

    def fuzzy_row(self, f: Fuzzy) -> tuple[Fraction, ...]:
        values = {}
        for pt, g in f.entries:
            if pt not in self.space.universe:
                raise ResolveError(f"unknown universe point {pt!r}", f.span)
            if pt in values:
                raise ModelConsistencyError(f"point {pt!r} given twice", f.span)
            if g > 1:
                raise ModelConsistencyError(f"grade {g} exceeds 1", f.span)
            values[pt] = g
        return tuple(values.get(x, Fraction(0)) for x in self.space.universe)

    def set_literal(self, lit: SetLit) -> FSeqSet:
        space = self.space
        labels = _labels(space)
        rows = {}
        for label, fz in lit.components:
            if label not in labels:
                raise ModelConsistencyError(f"index label {label} beyond horizon {space.horizon}", fz.span)
            n = labels[label]
            if n in rows:
                raise ModelConsistencyError(f"component {label} given twice", fz.span)
            rows[n] = self.fuzzy_row(fz)
        if space.tail not in rows:
            raise ModelConsistencyError("a set literal needs a tail component", lit.span)
        full = tuple(rows.get(n, rows[space.tail]) for n in space.indices)
        return FSeqSet(space, full)

    def set_expr(self, e) -> FSeqSet:
        """Resolve a set expression that does not need a topology."""
        space = self.space
        if isinstance(e, SetLit):
            return self.set_literal(e)
        if isinstance(e, ConstSet):
            if e.level > 1:
                raise ModelConsistencyError(f"grade {e.level} exceeds 1", e.span)
            return FSeqSet.constant(space, e.level)
        if isinstance(e, Name):
            if e.name == "X0":
                return FSeqSet.constant(space, 0)
            if e.name == "X1":
                return FSeqSet.constant(space, 1)
            if e.name in self.sets:
                return self.sets[e.name]
            if e.name in self.points:
                return self.points[e.name].embed()
            raise ResolveError(f"unknown set {e.name!r}", e.span)
        if isinstance(e, Unary):
            return self.set_expr(e.operand).complement()
        if isinstance(e, Binary):
            l, r = self.set_expr(e.left), self.set_expr(e.right)
            return l.join(r) if e.op == "join" else l.meet(r)
        if isinstance(e, Call) and e.fn in SET_FUNCTIONS:
            from .evaluate import eval_set  # operators that need a topology

            return eval_set(self.partial_model(), e)
        raise ResolveError("expected a fuzzy sequential set", e.span)

    def partial_model(self) -> Model:
        return Model(self.space, self.sets, self.points, self.topologies, [])

    def topology(self, s: TopologyDecl) -> Topology:
        space = self.space
        try:
            if s.kind in ("generate", "explicit"):
                family = [self.set_expr(a) for a in s.args]
                if s.kind == "generate":
                    fst = generate(space, family)
                    return Topology(s.name, fst.opens, AxiomReport([], fst), s.span)
                if not family:
                    raise ModelConsistencyError("explicit topology needs at least one set", s.span)
                return Topology(s.name, tuple(family), check_axioms(family), s.span)
            if s.kind == "grid":
                levels = [a.value for a in s.args]
                if any(v > 1 for v in levels):
                    raise ModelConsistencyError("grid levels must lie in [0, 1]", s.span)
                family = constants_family(space, levels)
                return Topology(s.name, tuple(family), check_axioms(family), s.span)
            rows = frozenset(self.fuzzy_row(f) for f in s.args)
            fst = lift(space, ComponentFT(space, None, rows), s.kind)
            return Topology(s.name, fst.opens, AxiomReport([], fst), s.span)
        except DslError:
            raise
        except FstsError as exc:
            raise ModelConsistencyError(str(exc), s.span) from None


def resolve(stmts) -> Model:
    return Resolver().run(stmts)


def parse(text: str) -> Model:
    """Parse and resolve a ``.fsts`` document.

    Every failure is a :class:`DslError` carrying a source span.
    """
    stmts = parse_statements(text)
    try:
        return resolve(stmts)
    except DslError:
        raise
    except FstsError as exc:
        span = getattr(stmts[0], "span", None) if stmts else None
        raise ModelConsistencyError(str(exc), span or Span(1, 1, 0, 0)) from None
