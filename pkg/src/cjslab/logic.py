"""Quantifier-free language over 0, 1, +, <= and C.

Concrete syntax (ASCII)::

    formula := iff
    iff     := imp {"<->" imp}
    imp     := or ["->" imp]
    or      := and {"|" and}
    and     := unary {"&" unary}
    unary   := "~" unary | "(" formula ")" | atom
    atom    := term ("<=" | "C" | "=") term
    term    := factor {"+" factor}
    factor  := "0" | "1" | identifier | "(" term ")"

A parenthesis after ``~`` or at the start of a conjunct is first tried as
the start of an atom; on failure the parser backtracks and reads a
parenthesised formula.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

from .structures import FiniteJoinStructure


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


Term = Union[Zero, One, Var, Join]


@dataclass(frozen=True)
class Atom:
    lhs: Term
    rel: str  # "<=", "C" or "="
    rhs: Term


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Not, And, Or, Implies, Iff]

RELATIONS = ("<=", "C", "=")
_BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def render_term(t: Term) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Var):
        return t.name
    return f"({render_term(t.left)} + {render_term(t.right)})"


def render(f: Formula) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(f, Atom):
        return f"{render_term(f.lhs)} {f.rel} {render_term(f.rhs)}"
    if isinstance(f, Not):
        return f"~({render(f.sub)})"
    return f"({render(f.left)} {_BINARY[type(f)]} {render(f.right)})"


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_TOKEN = re.compile(r"\s*(?:(<->|->|<=|[~&|()+=])|([A-Za-z_][A-Za-z0-9_]*)|([01])(?![0-9A-Za-z_]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("op", m.group(1), start))
        elif m.group(2):
            kind = "C" if m.group(2) == "C" else "id"
            toks.append((kind, m.group(2), start))
        else:
            toks.append(("const", m.group(3), start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def at(self, value: str) -> bool:
        kind, v, _ = self.peek()
        return kind in ("op", "C") and v == value

    def expect(self, value: str):
        if not self.at(value):
            self.error(f"expected {value!r}")
        self.i += 1

    def error(self, msg: str):
        kind, v, pos = self.peek()
        what = "end of input" if kind == "eof" else repr(v)
        raise ParseError(f"{msg}, found {what}", pos)

    def formula(self) -> Formula:
        left = self.imp()
        while self.at("<->"):
            self.i += 1
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.at("|"):
            self.i += 1
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.at("&"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.at("~"):
            self.i += 1
            return Not(self.unary())
        if self.at("("):
            mark = self.i
            try:
                return self.atom()
            except ParseError as atom_err:
                self.i = mark
                self.i += 1
                try:
                    f = self.formula()
                    self.expect(")")
                    return f
                except ParseError as formula_err:
                    # report whichever attempt got further
                    raise max(atom_err, formula_err, key=lambda e: e.offset) from None
        return self.atom()

    def atom(self) -> Atom:
        lhs = self.term()
        kind, v, _ = self.peek()
        if v not in RELATIONS or kind not in ("op", "C"):
            self.error("expected '<=', 'C' or '='")
        self.i += 1
        return Atom(lhs, v, self.term())

    def term(self) -> Term:
        t = self.factor()
        while self.at("+"):
            self.i += 1
            t = Join(t, self.factor())
        return t

    def factor(self) -> Term:
        kind, v, _ = self.peek()
        if kind == "const":
            self.i += 1
            return Zero() if v == "0" else One()
        if kind == "id":
            self.i += 1
            return Var(v)
        if self.at("("):
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        self.error("expected a term")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    if p.peek()[0] == "eof":
        raise ParseError("empty input", 0)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.error("unexpected token")
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] != "eof":
        p.error("unexpected token")
    return t


# ---------------------------------------------------------------------------
# variables and evaluation


def variables(f: Formula | Term) -> list[str]:
    """Variable names in order of first occurrence."""
    out: list[str] = []

    def walk(node):
        if isinstance(node, Var):
            if node.name not in out:
                out.append(node.name)
        elif isinstance(node, (Zero, One)):
            pass
        elif isinstance(node, Atom):
            walk(node.lhs)
            walk(node.rhs)
        elif isinstance(node, Not):
            walk(node.sub)
        else:
            walk(node.left)
            walk(node.right)

    walk(f)
    return out


def eval_term(S: FiniteJoinStructure, v: Mapping[str, str], t: Term) -> int:
    """Index of the value of ``t``; unmapped variables take the value 0."""
    if isinstance(t, Zero):
        return S.zero
    if isinstance(t, One):
        return S.one
    if isinstance(t, Var):
        return S.idx(v[t.name]) if t.name in v else S.zero
    return S.join[eval_term(S, v, t.left)][eval_term(S, v, t.right)]


def eval_formula(S: FiniteJoinStructure, v: Mapping[str, str], f: Formula) -> bool:
    if isinstance(f, Atom):
        a, b = eval_term(S, v, f.lhs), eval_term(S, v, f.rhs)
        if f.rel == "<=":
            return S.leq[a][b]
        if f.rel == "C":
            return S.contact_matrix[a][b]
        return S.leq[a][b] and S.leq[b][a]
    if isinstance(f, Not):
        return not eval_formula(S, v, f.sub)
    left = eval_formula(S, v, f.left)
    if isinstance(f, And):
        return left and eval_formula(S, v, f.right)
    if isinstance(f, Or):
        return left or eval_formula(S, v, f.right)
    if isinstance(f, Implies):
        return (not left) or eval_formula(S, v, f.right)
    return left == eval_formula(S, v, f.right)


def compile_formula(f: Formula, names: Sequence[str]) -> Callable[[FiniteJoinStructure, Sequence[int]], bool]:
    """Closure ``g(S, values)`` with ``values[k]`` the index assigned to ``names[k]``.

    Same semantics as :func:`eval_formula`, without per-call dispatch; used
    by the decider's inner loop.
    """
    slot = {n: k for k, n in enumerate(names)}

    def term(t):
        if isinstance(t, Zero):
            return lambda S, vs: S.zero
        if isinstance(t, One):
            return lambda S, vs: S.one
        if isinstance(t, Var):
            if t.name not in slot:
                return lambda S, vs: S.zero
            k = slot[t.name]
            return lambda S, vs: vs[k]
        l, r = term(t.left), term(t.right)
        return lambda S, vs: S.join[l(S, vs)][r(S, vs)]

    def form(g):
        if isinstance(g, Atom):
            l, r = term(g.lhs), term(g.rhs)
            if g.rel == "<=":
                return lambda S, vs: S.leq[l(S, vs)][r(S, vs)]
            if g.rel == "C":
                return lambda S, vs: S.contact_matrix[l(S, vs)][r(S, vs)]

            def eq(S, vs):
                a, b = l(S, vs), r(S, vs)
                return S.leq[a][b] and S.leq[b][a]
            return eq
        if isinstance(g, Not):
            s = form(g.sub)
            return lambda S, vs: not s(S, vs)
        l, r = form(g.left), form(g.right)
        if isinstance(g, And):
            return lambda S, vs: l(S, vs) and r(S, vs)
        if isinstance(g, Or):
            return lambda S, vs: l(S, vs) or r(S, vs)
        if isinstance(g, Implies):
            return lambda S, vs: (not l(S, vs)) or r(S, vs)
        return lambda S, vs: l(S, vs) == r(S, vs)

    return form(f)
