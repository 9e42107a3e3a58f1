"""Coefficient domains: the rationals and prime fields.

A domain is a small stateless object that knows how to combine raw values.
Raw values are plain Python objects (``Fraction`` for QQ, ``int`` in
``[0, p)`` for GF(p)) so they hash, compare and pickle cheaply.
"""

from __future__ import annotations

from fractions import Fraction


class QQ_Domain:
    """The field of rational numbers, raw values are ``Fraction``."""

    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, QQ_Domain)

    def __hash__(self):
        return hash("QQ")

    def convert(self, x):
        return Fraction(x)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def div(self, x, y):
        if not y:
            raise ZeroDivisionError("division by zero in QQ")
        return x / y

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero in QQ")
        return 1 / x

    def pow(self, x, n):
        return x**n

    def is_zero(self, x):
        return not x

    def is_one(self, x):
        return x == 1

    def to_str(self, x):
        return str(x)


class GF:
    """Prime field GF(p); raw values are canonical residues in ``[0, p)``."""

    def __init__(self, p: int):
        p = int(p)
        if p < 2:
            raise ValueError(f"not a prime modulus: {p}")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def convert(self, x):
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return int(x) % self.p

    def add(self, x, y):
        s = x + y
        return s - self.p if s >= self.p else s

    def sub(self, x, y):
        s = x - y
        return s + self.p if s < 0 else s

    def neg(self, x):
        return (self.p - x) if x else 0

    def mul(self, x, y):
        return (x * y) % self.p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError(f"inverse of zero in GF({self.p})")
        return pow(x, -1, self.p)

    def div(self, x, y):
        return (x * self.inv(y)) % self.p

    def pow(self, x, n):
        if n < 0:
            return pow(self.inv(x), -n, self.p)
        return pow(x, n, self.p)

    def is_zero(self, x):
        return x == 0

    def is_one(self, x):
        return x == 1

    def to_str(self, x):
        return str(x)


QQ = QQ_Domain()


def domain_for(characteristic: int):
    """Return QQ for characteristic 0 and GF(p) otherwise."""
    return QQ if characteristic == 0 else GF(characteristic)
