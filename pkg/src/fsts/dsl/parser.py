"""Lexer, AST and recursive-descent parser for ``.fsts`` documents.

Grammar (informal)::

    document   := statement*
    statement  := 'universe' NAME+ ';'
                | 'horizon' INT ';'
                | 'fset' NAME '=' (setlit | expr) ';'
                | 'point' NAME '=' '(' NAME ';' 'base' '{' idx,* '}' ';' 'grades' '[' grade,* ']' ')' ';'
                | 'topology' NAME '=' topo ';'
                | 'query' call ';'
                | 'check' call ';'
                | 'expect' expectation ';'
                | 'expect' '{' (expectation ';')* '}'
    expectation:= call '=' (expr | 'true' | 'false')
    setlit     := '[' (label ':' fuzzy),+ ']'        label := nK | tail
    fuzzy      := '{' (NAME ':' grade),* '}'
    topo       := ('generate' | 'explicit') '(' expr,* ')'
                | 'grid' '(' grade,+ ')'
                | ('product' | 'constant') '(' fuzzy,+ ')'
    expr       := term (('∨' | '|') term)*
    term       := unary (('∧' | '&') unary)*
    unary      := ('~' | '¬') unary | atom
    atom       := '(' expr ')' | setlit | 'X' '(' grade ')' | NAME ['(' args ')'] | grade
    call       := NAME '(' args [';' option (';' option)*] ')'    option := NAME '=' INT
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from ..core import FstsError

MAX_DEPTH = 100


@dataclass(frozen=True)
class Span:
    line: int
    column: int
    start: int  # byte offsets into the UTF-8 source
    end: int

    def to_dict(self):
        return {"line": self.line, "column": self.column, "start": self.start, "end": self.end}

    def cover(self, other: "Span") -> "Span":
        return Span(self.line, self.column, self.start, max(self.end, other.end))


class DslError(FstsError):
    """A located diagnostic; ``kind`` is lexical, syntax, resolution or model."""

    kind = "error"

    def __init__(self, message: str, span: Span, expected: tuple[str, ...] = ()):
        self.message = message
        self.span = span
        self.expected = tuple(expected)
        super().__init__(self.render())

    def render(self) -> str:
        msg = f"{self.span.line}:{self.span.column}: {self.kind} error: {self.message}"
        if self.expected:
            msg += " (expected " + ", ".join(sorted(self.expected)) + ")"
        return msg


class LexError(DslError):
    kind = "lexical"


class ParseError(DslError):
    kind = "syntax"


# tokens -------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>∨|∧|¬|[;,:=()\[\]{}~&|/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # number, name, op, eof
    text: str
    span: Span


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    byte = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            span = Span(line, pos - line_start + 1, byte, byte + len(text[pos].encode("utf-8")))
            raise LexError(f"unexpected character {text[pos]!r}", span)
        lexeme = m.group()
        nbytes = len(lexeme.encode("utf-8"))
        kind = m.lastgroup
        if kind == "number" and m.end() < len(text) and text[m.end()] == ".":
            span = Span(line, pos - line_start + 1, byte, byte + nbytes + 1)
            raise LexError("only finite decimal expansions are allowed", span)
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, lexeme, Span(line, pos - line_start + 1, byte, byte + nbytes)))
        for i, ch in enumerate(lexeme):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
        byte += nbytes
    tokens.append(Token("eof", "", Span(line, pos - line_start + 1, byte, byte)))
    return tokens


# AST ----------------------------------------------------------------------------

_SPAN = dict(compare=False, repr=False, default=None)


@dataclass(frozen=True)
class Num:
    value: Fraction
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class Name:
    name: str
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class ConstSet:
    level: Fraction
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class Fuzzy:
    entries: tuple[tuple[str, Fraction], ...]
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class SetLit:
    components: tuple[tuple[str, Fuzzy], ...]  # label is "nK" or "tail"
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class Binary:
    op: str  # "join" or "meet"
    left: "Expr"
    right: "Expr"
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple["Expr", ...]
    options: tuple[tuple[str, int], ...] = ()
    span: Span = field(**_SPAN)


Expr = Union[Num, Name, ConstSet, SetLit, Unary, Binary, Call]


@dataclass(frozen=True)
class Universe:
    names: tuple[str, ...]
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class Horizon:
    value: int
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class FsetDecl:
    name: str
    expr: Expr
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class PointDecl:
    name: str
    support: str
    base: tuple[str, ...]  # "1", "2", ..., "tail"
    grades: tuple[Fraction, ...]
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class TopologyDecl:
    name: str
    kind: str  # generate, explicit, grid, product, constant
    args: tuple = ()
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class Query:
    call: Call
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class CheckStmt:
    call: Call
    span: Span = field(**_SPAN)


@dataclass(frozen=True)
class Expect:
    call: Call
    value: Expr  # a Name "true"/"false" or a set expression
    span: Span = field(**_SPAN)


Statement = Union[Universe, Horizon, FsetDecl, PointDecl, TopologyDecl, Query, CheckStmt, Expect]

TOPOLOGY_KINDS = ("generate", "explicit", "grid", "product", "constant")
KEYWORDS = ("universe", "horizon", "fset", "point", "topology", "query", "check", "expect")


# parser -------------------------------------------------------------------------


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.depth = 0

    # helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, expected=()) -> ParseError:
        return ParseError(message, self.tok.span, tuple(expected))

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "name") and self.tok.text == text

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            t = self.tok
            self.pos += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            got = self.tok.text or "end of input"
            raise self.error(f"unexpected {got!r}", (repr(text),))
        return t

    def name(self, what="name") -> Token:
        if self.tok.kind != "name":
            got = self.tok.text or "end of input"
            raise self.error(f"unexpected {got!r}", (what,))
        t = self.tok
        self.pos += 1
        return t

    def integer(self) -> tuple[int, Span]:
        t = self.tok
        if t.kind != "number" or "." in t.text:
            raise self.error(f"unexpected {t.text or 'end of input'!r}", ("integer",))
        self.pos += 1
        return int(t.text), t.span

    def grade(self) -> tuple[Fraction, Span]:
        t = self.tok
        if t.kind != "number":
            raise self.error(f"unexpected {t.text or 'end of input'!r}", ("grade",))
        self.pos += 1
        span = t.span
        value = Fraction(t.text)
        if self.at("/"):
            self.pos += 1
            if "." in t.text:
                raise ParseError("a ratio needs integer numerator and denominator", t.span)
            den, dspan = self.integer()
            if den == 0:
                raise ParseError("zero denominator", dspan)
            value = Fraction(int(t.text), den)
            span = span.cover(dspan)
        return value, span

    def comma_list(self, item, close: str):
        out = []
        if self.at(close):
            return out
        out.append(item())
        while self.accept(","):
            out.append(item())
        return out

    # document
    def document(self) -> list[Statement]:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
        return stmts

    def statement(self) -> Statement:
        start = self.tok
        if start.kind != "name" or start.text not in KEYWORDS:
            raise self.error(f"unexpected {start.text!r}", tuple(KEYWORDS))
        self.pos += 1
        kw = start.text
        if kw == "universe":
            names = [self.name("point name").text]
            while self.tok.kind == "name":
                names.append(self.name().text)
            node = Universe(tuple(names), start.span)
        elif kw == "horizon":
            value, _ = self.integer()
            node = Horizon(value, start.span)
        elif kw == "fset":
            name = self.name("set name").text
            self.expect("=")
            expr = self.setlit() if self.at("[") else self.expr()
            node = FsetDecl(name, expr, start.span)
        elif kw == "point":
            node = self.point_decl(start)
        elif kw == "topology":
            node = self.topology_decl(start)
        elif kw == "query":
            node = Query(self.call(), start.span)
        elif kw == "check":
            node = CheckStmt(self.call(), start.span)
        else:
            if self.accept("{"):
                items = []
                while not self.at("}"):
                    items.append(self.expectation(start))
                    self.expect(";")
                self.expect("}")
                self.accept(";")
                return _Block(tuple(items))
            node = self.expectation(start)
        end = self.expect(";")
        return _with_span(node, start.span.cover(end.span))

    def expectation(self, start) -> Expect:
        first = self.tok
        call = self.call()
        self.expect("=")
        value = self.expr()
        return Expect(call, value, first.span.cover(self.tokens[self.pos - 1].span))

    def point_decl(self, start) -> PointDecl:
        name = self.name("point name").text
        self.expect("=")
        self.expect("(")
        support = self.name("support point").text
        self.expect(";")
        self.expect("base")
        self.expect("{")
        base = self.comma_list(self.index_label, "}")
        self.expect("}")
        self.expect(";")
        self.expect("grades")
        self.expect("[")
        grades = self.comma_list(lambda: self.grade()[0], "]")
        self.expect("]")
        self.expect(")")
        return PointDecl(name, support, tuple(base), tuple(grades), start.span)

    def index_label(self) -> str:
        if self.accept("tail"):
            return "tail"
        value, _ = self.integer()
        return str(value)

    def topology_decl(self, start) -> TopologyDecl:
        name = self.name("topology name").text
        self.expect("=")
        kind_tok = self.name("topology form")
        kind = kind_tok.text
        if kind not in TOPOLOGY_KINDS:
            raise ParseError(f"unknown topology form {kind!r}", kind_tok.span, TOPOLOGY_KINDS)
        self.expect("(")
        if kind in ("generate", "explicit"):
            args = self.comma_list(self.expr, ")")
        elif kind == "grid":
            args = [Num(g, s) for g, s in [self.grade()]]
            while self.accept(","):
                g, s = self.grade()
                args.append(Num(g, s))
        else:
            args = [self.fuzzy()]
            while self.accept(","):
                args.append(self.fuzzy())
        self.expect(")")
        return TopologyDecl(name, kind, tuple(args), start.span)

    def call(self) -> Call:
        t = self.name("operation name")
        self.expect("(")
        args = self.comma_list(self.expr, ")") if not self.at(";") else []
        options = []
        while self.accept(";"):
            key = self.name("option name")
            self.expect("=")
            value, _ = self.integer()
            options.append((key.text, value))
        end = self.expect(")")
        return Call(t.text, tuple(args), tuple(options), t.span.cover(end.span))

    def setlit(self) -> SetLit:
        start = self.expect("[")
        comps = []
        while True:
            label = self.name("index label (nK or tail)")
            if label.text != "tail" and not re.fullmatch(r"n[1-9]\d*", label.text):
                raise ParseError(f"bad index label {label.text!r}", label.span, ("nK", "tail"))
            self.expect(":")
            comps.append((label.text, self.fuzzy()))
            if not self.accept(","):
                break
        end = self.expect("]")
        return SetLit(tuple(comps), start.span.cover(end.span))

    def fuzzy(self) -> Fuzzy:
        start = self.expect("{")

        def entry():
            pt = self.name("point name").text
            self.expect(":")
            return pt, self.grade()[0]

        entries = self.comma_list(entry, "}")
        end = self.expect("}")
        return Fuzzy(tuple(entries), start.span.cover(end.span))

    # expressions
    def expr(self) -> Expr:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error("expression nested too deeply")
        try:
            left = self.term()
            while self.at("∨") or self.at("|"):
                self.pos += 1
                right = self.term()
                left = Binary("join", left, right, left.span.cover(right.span))
            return left
        finally:
            self.depth -= 1

    def term(self) -> Expr:
        left = self.unary()
        while self.at("∧") or self.at("&"):
            self.pos += 1
            right = self.unary()
            left = Binary("meet", left, right, left.span.cover(right.span))
        return left

    def unary(self) -> Expr:
        t = self.tok
        if self.at("~") or self.at("¬"):
            self.pos += 1
            self.depth += 1
            if self.depth > MAX_DEPTH:
                raise self.error("expression nested too deeply")
            try:
                operand = self.unary()
            finally:
                self.depth -= 1
            return Unary("complement", operand, t.span.cover(operand.span))
        return self.atom()

    def atom(self) -> Expr:
        t = self.tok
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "number":
            value, span = self.grade()
            return Num(value, span)
        if self.at("["):
            return self.setlit()
        if t.kind == "name":
            self.pos += 1
            if t.text == "X" and self.at("("):
                self.pos += 1
                value, _ = self.grade()
                end = self.expect(")")
                return ConstSet(value, t.span.cover(end.span))
            if self.at("("):
                self.pos += 1
                args = self.comma_list(self.expr, ")")
                end = self.expect(")")
                return Call(t.text, tuple(args), (), t.span.cover(end.span))
            return Name(t.text, t.span)
        raise self.error(f"unexpected {t.text or 'end of input'!r}", ("expression",))


@dataclass(frozen=True)
class _Block:
    items: tuple[Expect, ...]


def _with_span(node, span):
    object.__setattr__(node, "span", span)
    return node


def parse_statements(text: str) -> list[Statement]:
    parser = Parser(text)
    try:
        raw = parser.document()
    except RecursionError:
        raise ParseError("input nested too deeply", parser.tok.span) from None
    out = []
    for s in raw:
        if isinstance(s, _Block):
            out.extend(s.items)
        else:
            out.append(s)
    return out
