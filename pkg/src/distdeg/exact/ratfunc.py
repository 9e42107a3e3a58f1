"""Rational function fields K(v1, ..., vn)."""

from __future__ import annotations

from fractions import Fraction

from . import dmp as D
from .domains import QQ
from .mpoly import MPoly, PolyRing, format_poly


class RatFunc:
    """An element num/den of a FractionField, kept in canonical form.

    gcd(num, den) = 1 and den has ground leading coefficient 1, so equality
    is equality of representations.
    """

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den and self.field == other.field
        if isinstance(other, (int, Fraction)):
            return self == self.field.convert(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def _c(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.convert(other)
        if isinstance(other, MPoly):
            return self.field.from_poly(other)
        return NotImplemented

    def __add__(self, other):
        o = self._c(other)
        return o if o is NotImplemented else self.field.add(self, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._c(other)
        return o if o is NotImplemented else self.field.sub(self, o)

    def __rsub__(self, other):
        o = self._c(other)
        return o if o is NotImplemented else self.field.sub(o, self)

    def __mul__(self, other):
        o = self._c(other)
        return o if o is NotImplemented else self.field.mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._c(other)
        return o if o is NotImplemented else self.field.div(self, o)

    def __rtruediv__(self, other):
        o = self._c(other)
        return o if o is NotImplemented else self.field.div(o, self)

    def __neg__(self):
        return self.field.neg(self)

    def __pow__(self, e):
        return self.field.pow(self, e)

    def __bool__(self):
        return bool(self.num)

    @property
    def numer(self) -> MPoly:
        return MPoly(self.field.ring, self.num)

    @property
    def denom(self) -> MPoly:
        return MPoly(self.field.ring, self.den)

    def is_polynomial(self):
        return self.den == self.field.ring.one

    def __str__(self):
        return self.field.to_str(self)

    __repr__ = __str__


class FractionField:
    """K(vars) as a domain whose raw values are RatFunc objects."""

    def __init__(self, variables, K=QQ):
        self.ring = PolyRing(variables, K)
        self.vars = self.ring.vars
        self.n = self.ring.n
        self.K = K
        self.characteristic = K.characteristic
        self.zero = RatFunc(self, self.ring.zero, self.ring.one)
        self.one = RatFunc(self, self.ring.one, self.ring.one)

    def __repr__(self):
        return f"FractionField({', '.join(self.vars)}; {self.K!r})"

    def __eq__(self, other):
        return isinstance(other, FractionField) and other.ring == self.ring

    def __hash__(self):
        return hash(("frac", self.ring))

    # construction
    def _make(self, num, den):
        n, K = self.n, self.K
        if D.dmp_is_zero(num, n, K):
            return self.zero
        one = self.ring.one
        if den != one:
            g = D.dmp_gcd(num, den, n, K)
            if g != one:
                num = D.dmp_exquo(num, g, n, K)
                den = D.dmp_exquo(den, g, n, K)
            lc = D.dmp_ground_lc(den, n, K)
            if not K.is_one(lc):
                inv = K.inv(lc)
                num = D.dmp_mul_ground(num, inv, n, K)
                den = D.dmp_mul_ground(den, inv, n, K)
        return RatFunc(self, num, den)

    def convert(self, x):
        if isinstance(x, RatFunc):
            if x.field != self:
                raise TypeError("rational function from a different field")
            return x
        if isinstance(x, MPoly):
            return self.from_poly(x)
        return RatFunc(self, self.ring.ground(x), self.ring.one)

    def from_poly(self, p: MPoly):
        if p.ring != self.ring:
            raise TypeError("polynomial over a different ring")
        return RatFunc(self, p.rep, self.ring.one)

    def from_ring(self, rep):
        return RatFunc(self, rep, self.ring.one)

    def from_fraction(self, num, den):
        if D.dmp_is_zero(den, self.n, self.K):
            raise ZeroDivisionError("zero denominator")
        return self._make(num, den)

    def gen(self, name):
        return self.from_poly(self.ring.gen(name))

    # domain interface
    def add(self, x, y):
        n, K, one = self.n, self.K, self.ring.one
        if x.den == one and y.den == one:
            return RatFunc(self, D.dmp_add(x.num, y.num, n, K), one)
        if x.den == y.den:
            return self._make(D.dmp_add(x.num, y.num, n, K), x.den)
        num = D.dmp_add(D.dmp_mul(x.num, y.den, n, K), D.dmp_mul(y.num, x.den, n, K), n, K)
        return self._make(num, D.dmp_mul(x.den, y.den, n, K))

    def neg(self, x):
        return RatFunc(self, D.dmp_neg(x.num, self.n, self.K), x.den)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        n, K, one = self.n, self.K, self.ring.one
        if not x.num or not y.num:
            return self.zero
        if x.den == one and y.den == one:
            return RatFunc(self, D.dmp_mul(x.num, y.num, n, K), one)
        g1 = D.dmp_gcd(x.num, y.den, n, K)
        g2 = D.dmp_gcd(y.num, x.den, n, K)
        xn = D.dmp_exquo(x.num, g1, n, K) if g1 != one else x.num
        yd = D.dmp_exquo(y.den, g1, n, K) if g1 != one else y.den
        yn = D.dmp_exquo(y.num, g2, n, K) if g2 != one else y.num
        xd = D.dmp_exquo(x.den, g2, n, K) if g2 != one else x.den
        num = D.dmp_mul(xn, yn, n, K)
        den = D.dmp_mul(xd, yd, n, K)
        lc = D.dmp_ground_lc(den, n, K)
        if not K.is_one(lc):
            inv = K.inv(lc)
            num = D.dmp_mul_ground(num, inv, n, K)
            den = D.dmp_mul_ground(den, inv, n, K)
        return RatFunc(self, num, den)

    def inv(self, x):
        if not x.num:
            raise ZeroDivisionError("inverse of zero rational function")
        n, K = self.n, self.K
        num, den = x.den, x.num
        lc = D.dmp_ground_lc(den, n, K)
        if not K.is_one(lc):
            inv = K.inv(lc)
            num = D.dmp_mul_ground(num, inv, n, K)
            den = D.dmp_mul_ground(den, inv, n, K)
        return RatFunc(self, num, den)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, e):
        if e < 0:
            return self.pow(self.inv(x), -e)
        n, K = self.n, self.K
        return RatFunc(self, D.dmp_pow(x.num, e, n, K), D.dmp_pow(x.den, e, n, K))

    def is_zero(self, x):
        return not x.num

    def is_one(self, x):
        return x.num == self.ring.one and x.den == self.ring.one

    def to_str(self, x):
        num = format_poly(D.dmp_to_dict(x.num, self.n, self.K), self.vars, self.K)
        if x.den == self.ring.one:
            return num
        den = format_poly(D.dmp_to_dict(x.den, self.n, self.K), self.vars, self.K)
        if " " in num or num.startswith("-"):
            num = f"({num})"
        if " " in den or "*" in den or "^" in den:
            den = f"({den})"
        return f"{num}/{den}"

    # evaluation
    def evaluate(self, x, images, target):
        """Substitute ``images`` (raw values of domain ``target``) for the
        variables and compute num/den in ``target``."""
        num = eval_poly(x.num, self.n, self.K, images, target)
        den = eval_poly(x.den, self.n, self.K, images, target)
        return target.div(num, den)


def eval_poly(f, n, K, images, target):
    """Horner evaluation of a recursive-dense polynomial in another domain."""
    if n == 0:
        return target.convert(f)
    x = images[n - 1]
    acc = target.zero
    for c in reversed(f):
        acc = target.add(target.mul(acc, x), eval_poly(c, n - 1, K, images, target))
    return acc


def base_field(characteristic, variables):
    """QQ / GF(p) when there are no variables, else the rational function field."""
    from .domains import domain_for

    K = domain_for(characteristic)
    if not variables:
        return K
    return FractionField(variables, K)
