"""Subfields of a tower as base-linear spans closed under multiplication."""

from __future__ import annotations

from ..errors import DimensionBlowup
from .tower import TowerElement, join_terms, term_str

DEFAULT_CAP = 4096


def _key(e):
    # degree-lexicographic, outermost generator compared first
    return (sum(e), len(e), e[::-1])


def vector(x):
    """Sparse coordinates of x over the base, exponent tuples without trailing zeros."""
    out = {}
    for e, c in x.tower.flatten(x, x.level).items():
        n = len(e)
        while n and not e[n - 1]:
            n -= 1
        out[e[:n]] = c
    return out


class _Echelon:
    """Reduced row echelon basis of sparse vectors with unit pivots.

    With ``track`` each row remembers its expression in the inserted vectors.
    """

    def __init__(self, F, track=False):
        self.F = F
        self.rows = {}  # pivot -> (vec, combo)
        self.track = track
        self.count = 0

    def __len__(self):
        return len(self.rows)

    def _axpy(self, v, c, w):
        F = self.F
        for e, b in w.items():
            t = F.sub(v[e], F.mul(c, b)) if e in v else F.neg(F.mul(c, b))
            if F.is_zero(t):
                v.pop(e, None)
            else:
                v[e] = t

    def reduce(self, v, combo=None):
        v = dict(v)
        for piv in [p for p in v if p in self.rows]:
            c = v.get(piv)
            if c is None:
                continue
            row, rcombo = self.rows[piv]
            self._axpy(v, c, row)
            if combo is not None:
                self._axpy(combo, c, rcombo)
        return v

    def insert(self, v):
        """Add v; returns True if it enlarged the span."""
        F = self.F
        combo = {self.count: F.one} if self.track else None
        self.count += 1
        v = self.reduce(v, combo)
        if not v:
            return False
        piv = max(v, key=_key)
        inv = F.inv(v[piv])
        v = {e: F.mul(c, inv) for e, c in v.items()}
        if combo is not None:
            combo = {e: F.mul(c, inv) for e, c in combo.items()}
        for p, (row, rcombo) in list(self.rows.items()):
            c = row.get(piv)
            if c is not None:
                row = dict(row)
                self._axpy(row, c, v)
                if combo is not None:
                    rcombo = dict(rcombo)
                    self._axpy(rcombo, c, combo)
                self.rows[p] = (row, rcombo)
        self.rows[piv] = (v, combo)
        return True

    def express(self, v):
        """Coefficients of v in the inserted vectors, or None if v is outside the span."""
        combo = {}
        rest = dict(v)
        for piv in list(rest):
            if piv not in self.rows:
                continue
            c = rest.get(piv)
            if c is None:
                continue
            row, rcombo = self.rows[piv]
            self._axpy(rest, c, row)
            self._axpy(combo, self.F.neg(c), rcombo)
        if rest:
            return None
        return combo


class SubfieldSpan:
    """Intermediate field of a tower, closed under multiplication by construction."""

    def __init__(self, tower, generators, elements, echelon):
        self.tower = tower
        self.generators = tuple(generators)
        self.elements = tuple(elements)  # spanning products, linearly independent
        self._ech = echelon

    @property
    def dimension(self):
        return len(self._ech)

    @property
    def basis(self):
        """Echelonized basis as tower elements, pivot coefficient 1."""
        depth = self.tower.depth
        out = []
        for piv in sorted(self._ech.rows, key=_key):
            row = self._ech.rows[piv][0]
            out.append(self.tower.unflatten({e + (0,) * (depth - len(e)): c for e, c in row.items()}))
        return out

    def __repr__(self):
        return f"SubfieldSpan(dim={self.dimension}, generators={list(map(str, self.generators))})"

    def contains(self, x):
        return not self._ech.reduce(vector(x))

    __contains__ = contains

    def contains_span(self, other):
        return all(self.contains(e) for e in other.elements)

    def same_field(self, other):
        return self.dimension == other.dimension and self.contains_span(other)

    def verify_closed(self):
        """Check that every product of two spanning elements stays in the span."""
        els = self.elements
        return all(self.contains(a * b) for i, a in enumerate(els) for b in els[i:])


def _tower_of(items, default=None):
    t = default
    for x in items:
        if t is None or x.tower.depth > t.depth:
            t = x.tower
    return t


def _prefix_dimension(tower, level):
    d = 1
    for s in tower.steps[:level]:
        d *= s.degree
    return d


def _full_span(tower, level, gens):
    """The whole prefix tower of the given level, spanned by its monomials."""
    ech = _Echelon(tower.F)
    elements = []
    exps = [()]
    for s in tower.steps[:level]:
        exps = [e + (k,) for e in exps for k in range(s.degree)]
    for e in sorted(exps, key=_key):
        n = len(e)
        while n and not e[n - 1]:
            n -= 1
        ech.rows[e[:n]] = ({e[:n]: tower.F.one}, None)
        elements.append(tower.monomial(e))
    ech.count = len(elements)
    return SubfieldSpan(tower, gens, elements, ech)


def _modular_dimension(tower, level, gens, cap, attempts=3):
    """Closure dimension after specializing at a random point modulo a prime.

    Products that stay independent after specialization are independent over
    the base (a nonzero specialized minor comes from a nonzero minor), so the
    result is a certified lower bound.  None if no good point was found.
    """
    import random

    from ..exact import FractionField, GF

    rng = random.Random(level * 7919 + len(gens))
    F = tower.F
    sub = type(tower)(F, tower.steps[:level])
    for _ in range(attempts):
        p = rng.randrange(1 << 29, 1 << 30) | 1
        while not _is_prime(p):
            p += 2
        K = GF(p)
        if isinstance(F, FractionField):
            point = [rng.randrange(p) for _ in F.vars]

            def leaf(x, point=point, K=K):
                return F.evaluate(x, point, K)
        elif F.characteristic == 0:
            leaf = K.convert
        else:
            return None
        try:
            spec, emap = sub.specialize(K, leaf)
            sgens = [emap(sub.coerce(g) if g.tower is not sub else g) for g in gens]
        except (ZeroDivisionError, TypeError):
            continue
        return _exact_closure(sgens, None, cap, spec).dimension
    return None


def _is_prime(n):
    import gmpy2

    return bool(gmpy2.is_prime(n))


def _strip_constant(x):
    """x minus its base component; generates the same algebra over the base."""
    if x.level == 0:
        return x
    c = x.tower.flatten(x, x.level).get((0,) * x.level)
    return x if c is None else x - TowerElement(x.tower, 0, c)


def span_closure(gens, start=None, cap=DEFAULT_CAP, tower=None):
    """Smallest multiplicatively closed base-linear span containing 1, start and gens."""
    gens = list(gens)
    t = _tower_of(gens, start.tower if start is not None else tower)
    if t is None:
        raise ValueError("span_closure needs a tower when no generators are given")
    gens = [t.coerce(g) for g in gens]
    every = list(start.generators if start is not None else ()) + gens
    level = max((g.level for g in every), default=0)
    full = _prefix_dimension(t, level)
    known = start.dimension if start is not None else 1
    if full > known and full > 16:
        # the modular dimension is a lower bound: it settles full spans and blowups
        d = _modular_dimension(t, level, every, cap)
        if d == full:
            return _full_span(t, level, every)
    return _exact_closure(gens, start, cap, t)


def _exact_closure(gens, start, cap, t):
    """Closure adding one generator at a time, sparsest first; members are free."""
    gens = [t.coerce(g) for g in gens]
    if start is None:
        ech = _Echelon(t.F)
        ech.insert(vector(t.one))
        S = SubfieldSpan(t, (), [t.one], ech)
    else:
        S = start
    order = sorted(range(len(gens)), key=lambda i: (len(vector(gens[i])), i))
    done = list(S.generators)
    for i in order:
        g = gens[i]
        if not S.contains(g):
            S = _adjoin(S, g, done, cap, t)
        done.append(g)
    if tuple(S.generators) != tuple(done):
        S = SubfieldSpan(t, done, S.elements, S._ech)
    return S


def _adjoin(S, g, done, cap, t):
    ech = _Echelon(t.F)
    for piv, (row, _) in S._ech.rows.items():
        ech.rows[piv] = (row, None)
    ech.count = len(ech.rows)
    elements = list(S.elements)
    new = _strip_constant(g)
    mult_all = [_strip_constant(h) for h in done] + [new]
    # old elements only need the new generator; fresh ones need all of them
    queue = [(e, [new]) for e in elements]
    pos = 0
    while pos < len(queue):
        e, mult = queue[pos]
        pos += 1
        for h in mult:
            prod = e * h
            if ech.insert(vector(prod)):
                if len(ech) > cap:
                    raise DimensionBlowup(f"span dimension exceeds cap {cap}")
                elements.append(prod)
                queue.append((prod, mult_all))
    return SubfieldSpan(t, list(done) + [g], elements, ech)


def member(x, S):
    return S.contains(x)


class MinimalPolynomial:
    """Monic polynomial X^k + c_{k-1} X^{k-1} + ... + c_0 with tower coefficients."""

    def __init__(self, coeffs):
        self.coeffs = tuple(coeffs)  # low first, last is 1

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = x.tower.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, MinimalPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        parts = []
        for i in range(self.degree, -1, -1):
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            parts.append(term_str(str(self.coeffs[i]), mono))
        return join_terms(parts)

    __repr__ = __str__


def degree_over(x, S, cap=DEFAULT_CAP):
    """Degree of x over the field S together with its minimal polynomial.

    Tries k = 1, 2, ... and stops at the first k for which x^k lies in the
    S-span of 1, x, ..., x^{k-1}.
    """
    t = _tower_of([x], S.tower)
    x = t.coerce(x)
    F = t.F
    ech = _Echelon(F, track=True)
    products = []  # (i, s_j) in insertion order
    basis = list(S.elements)
    power = t.one
    k = 0
    while True:
        for s in basis:
            ech.insert(vector(s * power))
            products.append((k, s))
        if len(ech) > cap:
            raise DimensionBlowup(f"degree computation exceeds cap {cap}")
        k += 1
        power = power * x
        combo = ech.express(vector(power))
        if combo is None:
            continue
        coeffs = [t.zero] * k
        for idx, lam in combo.items():
            i, s = products[idx]
            coeffs[i] = coeffs[i] - s * TowerElement(t, 0, lam)
        return k, MinimalPolynomial(coeffs + [t.one])


class TuplePolynomial:
    """Monic polynomial in X_i whose coefficients are polynomials in X_1 .. X_{i-1} over a subfield.

    ``terms`` maps (exponents of the earlier variables, power of X_i) to a
    coefficient in the subfield; the earlier exponents stay below the earlier
    degrees.
    """

    def __init__(self, index, degree, terms, single=False):
        self.index = index
        self.degree = degree
        self.terms = dict(terms)
        self.single = single

    def __call__(self, xs):
        """Value at xs = (x_1, ..., x_i)."""
        x = xs[self.index]
        acc = x ** self.degree
        for (e, k), c in self.terms.items():
            m = c * x**k
            for xj, ej in zip(xs, e):
                m = m * xj**ej
            acc = acc + m
        return acc

    def _var(self, j):
        return "X" if self.single else f"X{j + 1}"

    def __str__(self):
        def mono(e, k):
            parts = []
            for j, ej in enumerate(e):
                if ej:
                    parts.append(self._var(j) + (f"^{ej}" if ej > 1 else ""))
            if k:
                parts.append(self._var(self.index) + (f"^{k}" if k > 1 else ""))
            return "*".join(parts)

        out = [mono((), self.degree)]
        keys = sorted(self.terms, key=lambda ek: (ek[1], ek[0]), reverse=True)
        for e, k in keys:
            out.append(term_str(str(self.terms[(e, k)]), mono(e, k)))
        return join_terms(out)

    __repr__ = __str__


def minimal_polynomial_tuple(xs, S, cap=DEFAULT_CAP):
    """Tuple of minimal polynomials of x_1, x_2, ... over S.

    The i-th polynomial is monic in X_i with coefficients polynomial in the
    earlier variables over S, reduced below their degrees.  Returns the
    polynomials and the flat tuple of all their coefficients in S, leading
    ones excluded.
    """
    import itertools

    xs = list(xs)
    t = _tower_of(xs, S.tower)
    xs = [t.coerce(x) for x in xs]
    F = t.F
    prev, degs, polys, flat = [], [], [], []
    for i, x in enumerate(xs):
        boxes = list(itertools.product(*[range(d) for d in degs]))
        monos = {}
        for e in boxes:
            m = t.one
            for xj, ej in zip(prev, e):
                m = m * xj**ej
            monos[e] = m
        ech = _Echelon(F, track=True)
        products = []
        power = t.one
        k = 0
        while True:
            for e in boxes:
                for s in S.elements:
                    ech.insert(vector(s * monos[e] * power))
                    products.append((k, e, s))
            if len(ech) > cap:
                raise DimensionBlowup(f"minimal polynomial computation exceeds cap {cap}")
            k += 1
            power = power * x
            combo = ech.express(vector(power))
            if combo is not None:
                break
        terms = {}
        for idx, lam in combo.items():
            kk, e, s = products[idx]
            terms[(e, kk)] = terms.get((e, kk), t.zero) - s * TowerElement(t, 0, lam)
        polys.append(TuplePolynomial(i, k, terms, single=len(xs) == 1))
        flat.extend(terms.get((e, kk), t.zero) for kk in range(k) for e in boxes)
        prev.append(x)
        degs.append(k)
    return polys, tuple(flat)
