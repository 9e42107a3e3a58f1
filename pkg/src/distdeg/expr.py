"""Rational expressions over named symbols: parsing, rendering, evaluation.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := INT | NAME | '(' expr ')'

Names are letters, digits, ``_`` and ``@`` (``w@3`` is a shifted generator).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:@\d+)?")
_INT = re.compile(r"\d+")


def _tokenize(text, line, col0):
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _INT.match(text, pos)
        if m:
            toks.append(("int", m.group(), pos))
            pos = m.end()
            continue
        m = _NAME.match(text, pos)
        if m:
            toks.append(("name", m.group(), pos))
            pos = m.end()
            continue
        ch = text[pos]
        if ch not in "+-*/^()":
            raise ParseError(f"unexpected character {ch!r}", line, col0 + pos, ("operator", "name", "integer"))
        toks.append((ch, ch, pos))
        pos += 1
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text, line, col0):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.line = line
        self.col0 = col0

    def peek(self):
        return self.toks[self.i][0]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected):
        kind, val, pos = self.toks[self.i]
        what = "end of expression" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", self.line, self.col0 + pos, expected)

    def expr(self):
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek() == "-":
            self.take()
            return Neg(self.unary())
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            if self.peek() != "int":
                self.fail(("integer",))
            e = int(self.take()[1])
            node = Pow(node, -e if neg else e)
        return node

    def atom(self):
        kind = self.peek()
        if kind == "int":
            return Num(int(self.take()[1]))
        if kind == "name":
            return Sym(self.take()[1])
        if kind == "(":
            self.take()
            node = self.expr()
            if self.peek() != ")":
                self.fail((")",))
            self.take()
            return node
        self.fail(("integer", "name", "("))


def parse_expr(text, line=1, col=1):
    """Parse an infix rational expression; ``col`` is the column of text[0]."""
    p = _Parser(text, line, col)
    if p.peek() == "end":
        p.fail(("integer", "name", "("))
    node = p.expr()
    if p.peek() != "end":
        p.fail(("operator", "end of expression"))
    return node


def symbols(node):
    if isinstance(node, Sym):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, BinOp):
        return symbols(node.left) | symbols(node.right)
    if isinstance(node, Neg):
        return symbols(node.arg)
    return symbols(node.base)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def render(node, prec=0):
    """Canonical text of an expression; parse(render(e)) == e."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Neg):
        s = "-" + render(node.arg, 3)
        return f"({s})" if prec > 1 else s
    if isinstance(node, Pow):
        s = f"{render(node.base, 4)}^{node.exp}"
        return f"({s})" if prec > 3 else s
    p = _PREC[node.op]
    s = f"{render(node.left, p)} {node.op} {render(node.right, p + 1)}"
    return f"({s})" if prec > p else s


def evaluate(node, env, const):
    """Evaluate with symbol values from ``env``; integers go through ``const``."""
    if isinstance(node, Num):
        return const(node.value)
    if isinstance(node, Sym):
        try:
            return env[node.name]
        except KeyError:
            raise KeyError(node.name) from None
    if isinstance(node, Neg):
        return -evaluate(node.arg, env, const)
    if isinstance(node, Pow):
        base = evaluate(node.base, env, const)
        if node.exp < 0:
            return const(1) / base ** (-node.exp)
        return base**node.exp
    a = evaluate(node.left, env, const)
    b = evaluate(node.right, env, const)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a / b


def as_expr(x):
    if isinstance(x, str):
        return parse_expr(x)
    return x


# -- building expressions from exact values ---------------------------------


def _sum(terms):
    if not terms:
        return Num(0)
    node = terms[0]
    for t in terms[1:]:
        if isinstance(t, Neg):
            node = BinOp("-", node, t.arg)
        else:
            node = BinOp("+", node, t)
    return node


def _monomial(coeff, names, exps):
    factors = [Sym(n) if e == 1 else Pow(Sym(n), e) for n, e in zip(names, exps) if e]
    c = Fraction(coeff)
    neg = c < 0
    c = abs(c)
    node = None
    if c.numerator != 1 or not factors:
        node = Num(c.numerator)
    for f in factors:
        node = f if node is None else BinOp("*", node, f)
    if c.denominator != 1:
        node = BinOp("/", node, Num(c.denominator))
    return Neg(node) if neg else node


def poly_expr(d, names):
    """Expression for a polynomial given as {exponent tuple: rational}."""
    keys = sorted(d, key=lambda e: (sum(e), e[::-1]), reverse=True)
    return _sum([_monomial(d[e], names, e) for e in keys])


def ratfunc_expr(x, names):
    num = poly_expr(x.numer.to_dict(), names)
    den = x.denom.to_dict()
    if den == {(0,) * len(names): 1}:
        return num
    return BinOp("/", num, poly_expr(den, names))


def rename(node, mapping):
    """Copy of node with symbols renamed through mapping (others kept)."""
    if isinstance(node, Sym):
        return Sym(mapping.get(node.name, node.name))
    if isinstance(node, BinOp):
        return BinOp(node.op, rename(node.left, mapping), rename(node.right, mapping))
    if isinstance(node, Neg):
        return Neg(rename(node.arg, mapping))
    if isinstance(node, Pow):
        return Pow(rename(node.base, mapping), node.exp)
    return node


def product(factors):
    node = None
    for f in factors:
        node = f if node is None else BinOp("*", node, f)
    return Num(1) if node is None else node
