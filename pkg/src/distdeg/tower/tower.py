"""Triangular towers K0(y)[z1, ..., zr] / (p1, ..., pr).

Each generator z_i has a monic defining polynomial p_i whose coefficients lie
in the previous stage.  Elements are stored recursively: a stage-i value is a
tuple (low degree first, trailing zeros stripped) of stage-(i-1) values, and
stage 0 is a raw value of the base domain.  The defining polynomials are
*declared* minimal; a reducible one is only noticed when an inversion hits a
zero divisor, which produces a SplitCertificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

from ..errors import SplitDetected, ZeroInversion


@dataclass(frozen=True, eq=False)
class Step:
    name: str
    degree: int
    tail: tuple  # c_0 .. c_{d-1} of X^d + sum c_j X^j, raw values of the previous stage


@dataclass(frozen=True, eq=False)
class SplitCertificate:
    """A nontrivial monic factor of the declared polynomial of ``step`` (1-based)."""

    step: int
    name: str
    factor: tuple  # TowerElement coefficients, low degree first, monic

    def __str__(self):
        terms = []
        for i in range(len(self.factor) - 1, -1, -1):
            c = self.factor[i]
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            terms.append(term_str(str(c), mono))
        return f"step {self.step} ({self.name}) splits: factor {join_terms(terms)}"


def wrap(c):
    """Parenthesize a coefficient string made of several terms."""
    body = c[1:] if c.startswith("-") else c
    if " + " in body or " - " in body or "/" in body:
        return f"({c})"
    return c


def term_str(c, mono):
    """Coefficient string times a monomial string; '' for a zero coefficient."""
    if c == "0":
        return ""
    if not mono:
        return c
    if c == "1":
        return mono
    if c == "-1":
        return f"-{mono}"
    return f"{wrap(c)}*{mono}"


def join_terms(terms):
    terms = [t for t in terms if t]
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") and not t.startswith("-(") else f" + {t}"
    return out


class TriangularTower:
    """An immutable tower; ``extend`` returns a new tower sharing the prefix."""

    def __init__(self, F, steps=()):
        self.F = F
        self.steps = tuple(steps)
        self._index = {s.name: i for i, s in enumerate(self.steps)}

    def __repr__(self):
        return f"TriangularTower({self.F!r}; {', '.join(s.name for s in self.steps)})"

    @property
    def depth(self):
        return len(self.steps)

    @property
    def names(self):
        return tuple(s.name for s in self.steps)

    @property
    def degrees(self):
        return tuple(s.degree for s in self.steps)

    @property
    def dimension(self):
        return prod(self.degrees)

    def is_prefix_of(self, other):
        n = self.depth
        return other.depth >= n and all(a is b for a, b in zip(self.steps, other.steps[:n]))

    # -- construction ---------------------------------------------------------

    def extend(self, name, coeffs):
        """Adjoin a root of the monic polynomial with coefficients ``coeffs``
        (low degree first, leading 1 included) over this tower."""
        if name in self._index:
            raise ValueError(f"generator {name!r} already in the tower")
        coeffs = [self.coerce(c) for c in coeffs]
        d = len(coeffs) - 1
        if d < 1:
            raise ValueError("defining polynomial must have positive degree")
        if coeffs[-1] != self.one:
            raise ValueError(f"defining polynomial of {name!r} is not monic")
        level = self.depth
        tail = tuple(c.raw_at(level) for c in coeffs[:-1])
        return TriangularTower(self.F, self.steps + (Step(name, d, tail),))

    # -- element constructors -------------------------------------------------

    def coerce(self, x):
        if isinstance(x, TowerElement):
            if x.level > self.depth or not (
                x.level == 0 or x.tower.steps[x.level - 1] is self.steps[x.level - 1]
            ):
                raise TypeError("element belongs to an incompatible tower")
            return x
        return TowerElement(self, 0, self.F.convert(x))

    @property
    def zero(self):
        return TowerElement(self, 0, self.F.zero)

    @property
    def one(self):
        return TowerElement(self, 0, self.F.one)

    def const(self, c):
        return TowerElement(self, 0, self.F.convert(c))

    def gen(self, name):
        i = self._index[name] + 1
        raw = (self._zero(i - 1), self._one(i - 1))
        return TowerElement(self, i, raw)

    @property
    def gens(self):
        return tuple(self.gen(n) for n in self.names)

    # -- raw arithmetic, stage i ----------------------------------------------

    def _zero(self, i):
        return self.F.zero if i == 0 else ()

    def _one(self, i):
        x = self.F.one
        for _ in range(i):
            x = (x,)
        return x

    def _is_zero(self, i, x):
        return self.F.is_zero(x) if i == 0 else not x

    def _strip(self, i, coeffs):
        # coeffs: list of stage i-1 values
        while coeffs and self._is_zero(i - 1, coeffs[-1]):
            coeffs.pop()
        return tuple(coeffs)

    def _lift(self, x, frm, to):
        for i in range(frm, to):
            x = () if self._is_zero(i, x) else (x,)
        return x

    def _add(self, i, x, y):
        if i == 0:
            return self.F.add(x, y)
        if not x:
            return y
        if not y:
            return x
        if len(x) < len(y):
            x, y = y, x
        out = [self._add(i - 1, a, b) for a, b in zip(x, y)]
        out.extend(x[len(y):])
        return self._strip(i, out) if len(x) == len(y) else tuple(out)

    def _neg(self, i, x):
        if i == 0:
            return self.F.neg(x)
        return tuple(self._neg(i - 1, a) for a in x)

    def _sub(self, i, x, y):
        return self._add(i, x, self._neg(i, y))

    def _pmul(self, i, f, g):
        """Product of polynomials over stage i-1 (no reduction)."""
        if not f or not g:
            return []
        m = i - 1
        out = [self._zero(m)] * (len(f) + len(g) - 1)
        for a_i, a in enumerate(f):
            if self._is_zero(m, a):
                continue
            for b_i, b in enumerate(g):
                if not self._is_zero(m, b):
                    out[a_i + b_i] = self._add(m, out[a_i + b_i], self._mul(m, a, b))
        return out

    def _reduce(self, i, coeffs):
        step = self.steps[i - 1]
        d, tail = step.degree, step.tail
        m = i - 1
        for k in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[k]
            if self._is_zero(m, c):
                continue
            for j in range(d):
                t = tail[j]
                if not self._is_zero(m, t):
                    coeffs[k - d + j] = self._sub(m, coeffs[k - d + j], self._mul(m, c, t))
            coeffs[k] = self._zero(m)
        return self._strip(i, coeffs[:d] if len(coeffs) > d else coeffs)

    def _mul(self, i, x, y):
        if i == 0:
            return self.F.mul(x, y)
        if not x or not y:
            return ()
        if len(x) == 1 and len(y) == 1:
            return self._strip(i, [self._mul(i - 1, x[0], y[0])])
        return self._reduce(i, self._pmul(i, x, y))

    def _scale(self, i, x, c, ci):
        """Multiply stage-i value x by a stage-ci value c (ci <= i)."""
        if ci == i:
            return self._mul(i, x, c)
        if not x:
            return x
        return self._strip(i, [self._scale(i - 1, a, c, ci) for a in x])

    def _full_poly(self, i):
        step = self.steps[i - 1]
        return list(step.tail) + [self._one(i - 1)]

    def _pdivmod(self, m, f, g):
        """Division of polynomials over stage m (lists); g nonzero."""
        f = list(f)
        g = list(g)
        while g and self._is_zero(m, g[-1]):
            g.pop()
        dg = len(g) - 1
        inv = self._inv(m, g[-1])
        q = [self._zero(m)] * max(len(f) - dg, 0)
        for k in range(len(f) - 1 - dg, -1, -1):
            c = f[k + dg]
            if self._is_zero(m, c):
                continue
            c = self._mul(m, c, inv)
            q[k] = c
            for j in range(dg + 1):
                f[k + j] = self._sub(m, f[k + j], self._mul(m, c, g[j]))
        r = f[:dg]
        while r and self._is_zero(m, r[-1]):
            r.pop()
        while q and self._is_zero(m, q[-1]):
            q.pop()
        return q, r

    def _inv(self, i, x):
        if i == 0:
            if self.F.is_zero(x):
                raise ZeroInversion("inverse of zero")
            return self.F.inv(x)
        if not x:
            raise ZeroInversion("inverse of zero")
        m = i - 1
        if len(x) == 1:
            return (self._inv(m, x[0]),)
        r0, r1 = self._full_poly(i), list(x)
        s0, s1 = [], [self._one(m)]
        while r1:
            q, r = self._pdivmod(m, r0, r1)
            r0, r1 = r1, r
            qs = self._pmul(i, q, s1)
            n = max(len(s0), len(qs))
            s0, s1 = s1, [
                self._sub(m, s0[k] if k < len(s0) else self._zero(m), qs[k] if k < len(qs) else self._zero(m))
                for k in range(n)
            ]
            while s1 and self._is_zero(m, s1[-1]):
                s1.pop()
        if len(r0) > 1:
            lead_inv = self._inv(m, r0[-1])
            factor = tuple(TowerElement(self, m, self._mul(m, c, lead_inv)) for c in r0)
            step = self.steps[i - 1]
            raise SplitDetected(SplitCertificate(i, step.name, factor))
        c = self._inv(m, r0[0])
        return self._reduce(i, [self._mul(m, a, c) for a in s0])

    # -- public helpers ---------------------------------------------------------

    def invert(self, x):
        """Inverse of x, or a SplitCertificate if a declared polynomial splits."""
        x = self.coerce(x)
        try:
            return x.inverse()
        except SplitDetected as exc:
            return exc.certificate

    def flatten(self, x, length=None):
        """Coordinates of x over the base: {exponent tuple: base value}."""
        x = self.coerce(x)
        length = self.depth if length is None else length
        out = {}

        def walk(raw, i, exps):
            if i == 0:
                if not self.F.is_zero(raw):
                    out[exps[::-1] + (0,) * (length - x.level)] = raw
                return
            for k, c in enumerate(raw):
                walk(c, i - 1, exps + (k,))

        walk(x.raw, x.level, ())
        return out

    def unflatten(self, coords):
        """Inverse of flatten."""
        if not coords:
            return self.zero
        length = len(next(iter(coords)))

        def build(items, i):
            if i == 0:
                return items[0][1] if items else self.F.zero
            if not items:
                return ()
            groups = {}
            for e, c in items:
                groups.setdefault(e[i - 1], []).append((e, c))
            top = max(groups)
            return self._strip(i, [build(groups.get(k, []), i - 1) for k in range(top + 1)])

        items = [(e, c) for e, c in coords.items() if any(e[self.depth:]) is False]
        if len(items) != len(coords):
            raise ValueError("coordinates outside this tower")
        items = [(e[: self.depth] + (0,) * (self.depth - len(e)), c) for e, c in items]
        return TowerElement(self, self.depth, build(items, self.depth))

    def monomial(self, exps, c=None):
        c = self.F.one if c is None else self.F.convert(c)
        exps = tuple(exps) + (0,) * (self.depth - len(exps))
        return self.unflatten({exps: c})

    def poly_rem(self, f, g):
        """Remainder of polynomials in X with tower coefficients, g monic."""
        f = [self.coerce(c) for c in f]
        g = [self.coerce(c) for c in g]
        if g[-1] != self.one:
            raise ValueError("divisor must be monic")
        dg = len(g) - 1
        f = list(f)
        for k in range(len(f) - 1 - dg, -1, -1):
            c = f[k + dg]
            if c.is_zero():
                continue
            for j in range(dg + 1):
                f[k + j] = f[k + j] - c * g[j]
        r = f[:dg]
        while r and r[-1].is_zero():
            r.pop()
        return r

    def specialize(self, F_new, leaf_map):
        """Tower over F_new obtained by mapping every base value with leaf_map.

        Returns (new tower, element map).  leaf_map may raise ZeroDivisionError
        when a denominator vanishes at the chosen point.
        """
        steps = []

        def map_raw(raw, i):
            if i == 0:
                return leaf_map(raw)
            out = [map_raw(c, i - 1) for c in raw]
            while out and (F_new.is_zero(out[-1]) if i == 1 else not out[-1]):
                out.pop()
            return tuple(out)

        for i, s in enumerate(self.steps):
            steps.append(Step(s.name, s.degree, tuple(map_raw(c, i) for c in s.tail)))
        new = TriangularTower(F_new, steps)

        def emap(x):
            x = self.coerce(x)
            return TowerElement(new, x.level, map_raw(x.raw, x.level))

        return new, emap


class TowerElement:
    """Element of a triangular tower, stored at the smallest stage that holds it."""

    __slots__ = ("tower", "level", "raw", "_hash")

    def __init__(self, tower, level, raw):
        while level > 0 and len(raw) <= 1:
            raw = raw[0] if raw else tower._zero(level - 1)
            level -= 1
        self.tower = tower
        self.level = level
        self.raw = raw
        self._hash = None

    def raw_at(self, level):
        if level < self.level:
            raise ValueError("element does not fit in the requested stage")
        return self.tower._lift(self.raw, self.level, level)

    def _pair(self, other):
        if not isinstance(other, TowerElement):
            other = self.tower.coerce(other)
        t = self.tower if self.tower.depth >= other.tower.depth else other.tower
        other = t.coerce(other)
        me = t.coerce(self)
        lvl = max(me.level, other.level)
        return t, lvl, me.raw_at(lvl), other.raw_at(lvl)

    def __add__(self, other):
        t, lvl, a, b = self._pair(other)
        return TowerElement(t, lvl, t._add(lvl, a, b))

    __radd__ = __add__

    def __sub__(self, other):
        t, lvl, a, b = self._pair(other)
        return TowerElement(t, lvl, t._sub(lvl, a, b))

    def __rsub__(self, other):
        t, lvl, a, b = self._pair(other)
        return TowerElement(t, lvl, t._sub(lvl, b, a))

    def __neg__(self):
        return TowerElement(self.tower, self.level, self.tower._neg(self.level, self.raw))

    def __mul__(self, other):
        t, lvl, a, b = self._pair(other)
        if not isinstance(other, TowerElement) or other.level == 0 or self.level == 0:
            o = other if isinstance(other, TowerElement) else t.coerce(other)
            big, small = (self, o) if self.level >= o.level else (o, self)
            return TowerElement(t, big.level, t._scale(big.level, big.raw, small.raw, small.level))
        return TowerElement(t, lvl, t._mul(lvl, a, b))

    __rmul__ = __mul__

    def inverse(self):
        """Raises SplitDetected when a zero divisor is met, ZeroInversion on 0."""
        return TowerElement(self.tower, self.level, self.tower._inv(self.level, self.raw))

    def __truediv__(self, other):
        if not isinstance(other, TowerElement):
            other = self.tower.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.tower.coerce(other) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self):
        return self.tower._is_zero(self.level, self.raw)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, TowerElement):
            try:
                other = self.tower.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.level == other.level and self.raw == other.raw

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.level, self.raw))
        return self._hash

    def base_value(self):
        """The base-field value if the element lies in the base, else None."""
        return self.raw if self.level == 0 else None

    def __str__(self):
        t = self.tower
        coords = t.flatten(self, self.level)
        if not coords:
            return "0"
        names = t.names[: self.level]
        parts = []
        for e in sorted(coords, key=lambda e: (sum(e), e[::-1]), reverse=True):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            c = t.F.to_str(coords[e]) if hasattr(t.F, "to_str") else str(coords[e])
            parts.append(term_str(c, mono))
        return join_terms(parts)

    __repr__ = __str__
