"""Univariate factorization over prime fields (Cantor-Zassenhaus).

Polynomials are raw low-first tuples of residues; ``factor_fp`` also accepts
a univariate MPoly over GF(p).
"""

from __future__ import annotations

import random

from . import dmp as D
from .domains import GF
from .mpoly import MPoly


def _mulmod(a, b, f, K):
    return D.dup_divmod(D.dmp_mul(a, b, 1, K), f, K)[1]


def _powmod(a, e, f, K):
    result = (K.one,)
    a = D.dup_divmod(a, f, K)[1]
    while e:
        if e & 1:
            result = _mulmod(result, a, f, K)
        e >>= 1
        if e:
            a = _mulmod(a, a, f, K)
    return result


def _quo(f, g, K):
    q, r = D.dup_divmod(f, g, K)
    assert not r
    return q


def _pth_root(f, K):
    p = K.p
    return D.dmp_strip([f[i] for i in range(0, len(f), p)], 1, K)


def squarefree_decomposition(f, K):
    """Monic f -> list of (squarefree monic factor, multiplicity)."""
    out = []
    one = (K.one,)
    df = D.dup_diff(f, K)
    if not df:
        return [(g, e * K.p) for g, e in squarefree_decomposition(_pth_root(f, K), K)]
    c = D.dup_gcd(f, df, K)
    w = _quo(f, c, K)
    i = 1
    while w != one:
        y = D.dup_gcd(w, c, K)
        z = _quo(w, y, K)
        if z != one:
            out.append((z, i))
        i += 1
        w = y
        c = _quo(c, y, K)
    if c != one:
        out.extend((g, e * K.p) for g, e in squarefree_decomposition(_pth_root(c, K), K))
    return out


def distinct_degree(f, K):
    """Squarefree monic f -> list of (product of degree-d irreducibles, d)."""
    out = []
    x = (K.zero, K.one)
    h = x
    i = 1
    rest = f
    while len(rest) - 1 >= 2 * i:
        h = _powmod(h, K.p, rest, K)
        g = D.dup_gcd(rest, D.dmp_sub(h, x, 1, K), K)
        if len(g) > 1:
            out.append((g, i))
            rest = _quo(rest, g, K)
            h = D.dup_divmod(h, rest, K)[1]
        i += 1
    if len(rest) > 1:
        out.append((rest, len(rest) - 1))
    return out


def equal_degree(f, d, K, rng):
    """Split a product of distinct degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = D.dmp_strip([rng.randrange(K.p) for _ in range(n)], 1, K)
        if len(a) < 2:
            continue
        if K.p == 2:
            b, t = a, a
            for _ in range(d - 1):
                t = _mulmod(t, t, f, K)
                b = D.dmp_add(b, t, 1, K)
        else:
            b = D.dmp_sub(_powmod(a, (K.p**d - 1) // 2, f, K), (K.one,), 1, K)
        g = D.dup_gcd(f, b, K)
        if 0 < len(g) - 1 < n:
            return equal_degree(g, d, K, rng) + equal_degree(_quo(f, g, K), d, K, rng)


def factor_dup(f, K, seed=0):
    """Return (leading coefficient, sorted list of (monic irreducible, multiplicity))."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    lc = f[-1]
    monic = D.dup_monic(f, K)
    rng = random.Random(seed)
    factors = []
    for g, e in squarefree_decomposition(monic, K):
        for h, d in distinct_degree(g, K):
            for irr in equal_degree(h, d, K, rng):
                factors.append((irr, e))
    factors.sort(key=lambda t: (len(t[0]), t[0], t[1]))
    check = (lc,)
    for g, e in factors:
        check = D.dmp_mul(check, D.dmp_pow(g, e, 1, K), 1, K)
    if check != tuple(f):
        raise ArithmeticError("factorization failed to reproduce its input")
    return lc, factors


def factor_fp(f, seed=0):
    """Factor a univariate MPoly over GF(p).

    Returns (leading coefficient, [(irreducible monic MPoly, multiplicity)]).
    Randomness comes only from ``seed``.
    """
    if not isinstance(f, MPoly) or f.ring.n != 1 or not isinstance(f.ring.K, GF):
        raise TypeError("factor_fp expects a univariate polynomial over GF(p)")
    lc, factors = factor_dup(f.rep, f.ring.K, seed)
    return lc, [(MPoly(f.ring, g), e) for g, e in factors]


def is_irreducible_dup(f, K, seed=0):
    if len(f) < 2:
        return False
    _, factors = factor_dup(f, K, seed)
    return len(factors) == 1 and factors[0][1] == 1
