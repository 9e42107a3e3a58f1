"""User-facing multivariate polynomials built on the recursive-dense core."""

from __future__ import annotations

from fractions import Fraction

from . import dmp as D
from .domains import QQ


class PolyRing:
    """K[v1, ..., vn] with the last variable as the main variable.

    Also serves as a domain (``add``, ``mul``, ``exquo`` ... on raw reps) so
    the fraction-free solver can run on it directly.
    """

    def __init__(self, variables, K=QQ):
        self.vars = tuple(variables)
        self.n = len(self.vars)
        self.K = K
        self.zero = D.dmp_zero(self.n, K)
        self.one = D.dmp_one(self.n, K)

    def __repr__(self):
        return f"PolyRing({', '.join(self.vars)}; {self.K!r})"

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (self.vars, self.K) == (other.vars, other.K)

    def __hash__(self):
        return hash((self.vars, self.K))

    # domain interface on raw reps
    def add(self, f, g):
        return D.dmp_add(f, g, self.n, self.K)

    def sub(self, f, g):
        return D.dmp_sub(f, g, self.n, self.K)

    def neg(self, f):
        return D.dmp_neg(f, self.n, self.K)

    def mul(self, f, g):
        return D.dmp_mul(f, g, self.n, self.K)

    def exquo(self, f, g):
        return D.dmp_exquo(f, g, self.n, self.K)

    def is_zero(self, f):
        return D.dmp_is_zero(f, self.n, self.K)

    def gcd(self, f, g):
        return D.dmp_gcd(f, g, self.n, self.K)

    def ground(self, c):
        return D.dmp_ground(self.K.convert(c), self.n, self.K)

    # constructors
    def __call__(self, rep):
        return MPoly(self, rep)

    def from_dict(self, d):
        return MPoly(self, D.dmp_from_dict({tuple(e): self.K.convert(c) for e, c in d.items()}, self.n, self.K))

    def const(self, c):
        return MPoly(self, self.ground(c))

    def gen(self, name):
        i = self.vars.index(name)
        exps = [0] * self.n
        exps[i] = 1
        return MPoly(self, D.dmp_monomial(tuple(exps), self.K.one, self.n, self.K))

    @property
    def gens(self):
        return tuple(self.gen(v) for v in self.vars)


class MPoly:
    """Immutable polynomial; equality is representation equality."""

    __slots__ = ("ring", "rep")

    def __init__(self, ring: PolyRing, rep):
        self.ring = ring
        self.rep = rep

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise TypeError("polynomials over different rings")
            return other.rep
        if isinstance(other, (int, Fraction)):
            return self.ring.ground(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MPoly(self.ring, self.ring.add(self.rep, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MPoly(self.ring, self.ring.sub(self.rep, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MPoly(self.ring, self.ring.sub(o, self.rep))

    def __neg__(self):
        return MPoly(self.ring, self.ring.neg(self.rep))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MPoly(self.ring, self.ring.mul(self.rep, o))

    __rmul__ = __mul__

    def __pow__(self, e):
        return MPoly(self.ring, D.dmp_pow(self.rep, e, self.ring.n, self.ring.K))

    def exquo(self, other):
        return MPoly(self.ring, self.ring.exquo(self.rep, self._coerce(other)))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.rep == self.ring.ground(other)
        return isinstance(other, MPoly) and other.ring == self.ring and other.rep == self.rep

    def __hash__(self):
        return hash((self.ring, self.rep))

    def is_zero(self):
        return self.ring.is_zero(self.rep)

    def __bool__(self):
        return not self.is_zero()

    def to_dict(self):
        return D.dmp_to_dict(self.rep, self.ring.n, self.ring.K)

    def degree(self, var=None):
        if var is None:
            return D.dmp_total_degree(self.rep, self.ring.n, self.ring.K)
        return D.dmp_degree_in(self.rep, self.ring.n, self.ring.K, self.ring.vars.index(var))

    def monic(self):
        return MPoly(self.ring, D.dmp_ground_monic(self.rep, self.ring.n, self.ring.K))

    def __repr__(self):
        return f"MPoly({format_poly(self.to_dict(), self.ring.vars, self.ring.K)})"

    def __str__(self):
        return format_poly(self.to_dict(), self.ring.vars, self.ring.K)


def mpoly_gcd(f: MPoly, g: MPoly) -> MPoly:
    """Greatest common divisor with ground leading coefficient 1."""
    if f.ring != g.ring:
        raise TypeError("polynomials over different rings")
    return MPoly(f.ring, f.ring.gcd(f.rep, g.rep))


def _term_key(exps):
    return (sum(exps), tuple(reversed(exps)))


def format_poly(d, variables, K) -> str:
    """Deterministic infix rendering, highest graded term first."""
    if not d:
        return "0"
    parts = []
    for exps in sorted(d, key=_term_key, reverse=True):
        c = d[exps]
        mono = "*".join(
            (v if e == 1 else f"{v}^{e}") for v, e in zip(variables, exps) if e
        )
        if K.characteristic == 0:
            neg = c < 0
            a = -c if neg else c
        else:
            neg, a = False, c
        if not mono:
            body = K.to_str(a)
        elif a == 1:
            body = mono
        else:
            cs = K.to_str(a)
            body = f"({cs})*{mono}" if "/" in cs else f"{cs}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)
