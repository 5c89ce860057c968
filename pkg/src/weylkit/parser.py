"""Recursive-descent parser for operator expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' uint)?
    atom   := rational | symbol | 'X' idx? | 'D' idx? | '(' expr ')' | '-' atom

Juxtaposition is not multiplication.  ``X2`` and ``D2`` are the letters of
mode 2; any other identifier is a coefficient parameter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

from .coeffs import Poly
from .weyl import Kind, Letter, OperatorPolynomial

MAX_EXPONENT = 4096

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)
_LETTER = re.compile(r"([XD])(\d*)\Z")
_JUXTAPOSED = re.compile(r"(?:[XD]\d*){2,}\Z")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"syntax error at byte {offset}: {message}")
        self.offset = offset


# AST -------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Let:
    kind: Kind
    mode: int


@dataclass(frozen=True)
class Sum:
    terms: Tuple["Node", ...]


@dataclass(frozen=True)
class Prod:
    factors: Tuple["Node", ...]


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


@dataclass(frozen=True)
class Neg:
    arg: "Node"


Node = Union[Num, Sym, Let, Sum, Prod, Pow, Neg]


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    data = text.encode("utf-8")
    src = data.decode("ascii", errors="replace")
    toks = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            bad = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ParseError(f"unexpected character {src[bad]!r}", bad)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(data)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val, off = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val or 'end of input'!r}", off)

    def expr(self) -> Node:
        terms = [self.term()]
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                terms.append(Neg(t) if val == "-" else t)
            else:
                break
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self) -> Node:
        factors = [self.factor()]
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def factor(self) -> Node:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, off = self.take()
            if kind != "num" or "/" in val:
                raise ParseError("exponent must be a nonnegative integer", off)
            e = int(val)
            if e > MAX_EXPONENT:
                raise ParseError(f"exponent {e} exceeds the limit {MAX_EXPONENT}", off)
            return Pow(base, e)
        return base

    def atom(self) -> Node:
        kind, val, off = self.take()
        if kind == "num":
            return Num(Fraction(val))
        if kind == "name":
            m = _LETTER.match(val)
            if m:
                mode = int(m.group(2)) if m.group(2) else 0
                return Let(Kind.RAISE if m.group(1) == "X" else Kind.LOWER, mode)
            if _JUXTAPOSED.match(val):
                raise ParseError(f"{val!r} reads as juxtaposed letters; write products with '*'", off)
            return Sym(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "op" and val == "-":
            return Neg(self.atom())
        raise ParseError(f"unexpected {val or 'end of input'!r}", off)


def parse_expression(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    kind, val, off = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r} (products need an explicit '*')", off)
    return node


def symbols_of(node: Node) -> set:
    if isinstance(node, Sym):
        return {node.name}
    if isinstance(node, (Sum, Prod)):
        kids = node.terms if isinstance(node, Sum) else node.factors
        return set().union(*(symbols_of(k) for k in kids))
    if isinstance(node, Pow):
        return symbols_of(node.base)
    if isinstance(node, Neg):
        return symbols_of(node.arg)
    return set()


def max_mode(node: Node) -> int:
    if isinstance(node, Let):
        return node.mode
    if isinstance(node, (Sum, Prod)):
        kids = node.terms if isinstance(node, Sum) else node.factors
        return max(max_mode(k) for k in kids)
    if isinstance(node, Pow):
        return max_mode(node.base)
    if isinstance(node, Neg):
        return max_mode(node.arg)
    return -1


def to_operator(node: Node, q=1, params: Tuple[str, ...] = None, modes: int = None) -> OperatorPolynomial:
    """Evaluate an AST to an :class:`OperatorPolynomial`.

    Parameters are declared in alphabetical order unless ``params`` is given.
    """
    if params is None:
        params = tuple(sorted(symbols_of(node)))
    gens = dict(zip(params, Poly.symbols(params))) if params else {}
    if modes is None:
        modes = max(max_mode(node) + 1, 1)

    def ev(n: Node) -> OperatorPolynomial:
        if isinstance(n, Num):
            return OperatorPolynomial.scalar(_lift(n.value), modes, q)
        if isinstance(n, Sym):
            if n.name not in gens:
                raise KeyError(f"undeclared parameter {n.name!r}")
            return OperatorPolynomial.scalar(gens[n.name], modes, q)
        if isinstance(n, Let):
            return OperatorPolynomial({(Letter(n.kind, n.mode),): _lift(1)}, modes, q)
        if isinstance(n, Sum):
            out = ev(n.terms[0])
            for t in n.terms[1:]:
                out = out + ev(t)
            return out
        if isinstance(n, Prod):
            out = ev(n.factors[0])
            for f in n.factors[1:]:
                out = out * ev(f)
            return out
        if isinstance(n, Pow):
            return ev(n.base) ** n.exp
        if isinstance(n, Neg):
            return -ev(n.arg)
        raise TypeError(n)

    def _lift(c):
        c = c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c
        return Poly.const(c, params) if params else c

    return ev(node)


def to_coefficient(node: Node, params: Tuple[str, ...]):
    """Evaluate a letter-free AST to a coefficient in the given context."""
    if max_mode(node) >= 0:
        raise ValueError("coefficient expressions may not contain X or D")
    op = to_operator(node, 1, params, 1)
    c = op.terms.get((), 0)
    if isinstance(c, Poly) and not params:
        c = c.constant_value()
    return c


def parse_operator(text: str, q=1, extra_params=()) -> OperatorPolynomial:
    node = parse_expression(text)
    params = tuple(sorted(symbols_of(node) | set(extra_params)))
    return to_operator(node, q, params)
