"""Recursive-dense multivariate polynomials over a coefficient domain.

A polynomial in ``n`` variables is stored as a tuple of polynomials in
``n - 1`` variables, lowest degree first, with trailing zeros stripped; it
is a polynomial in the *last* variable whose coefficients are polynomials in
the earlier ones.  Level 0 is a bare domain element.  The zero polynomial of
positive level is the empty tuple, so two canonical representations are equal
iff the polynomials are equal.

All functions are pure and take the level ``n`` and the domain ``K``
explicitly, in the style of the low-level layers of computer algebra systems.
"""

from __future__ import annotations


class ExactDivisionError(ArithmeticError):
    pass


def dmp_zero(n, K):
    return K.zero if n == 0 else ()


def dmp_one(n, K):
    return dmp_ground(K.one, n, K)


def dmp_ground(c, n, K):
    if n == 0:
        return c
    if K.is_zero(c):
        return ()
    for _ in range(n):
        c = (c,)
    return c


def dmp_is_zero(f, n, K):
    return K.is_zero(f) if n == 0 else f == ()


def dmp_strip(f, n, K):
    f = list(f)
    while f and dmp_is_zero(f[-1], n - 1, K):
        f.pop()
    return tuple(f)


def dmp_degree(f, n, K):
    """Degree in the main (last) variable; -1 for zero."""
    if n == 0:
        return -1 if K.is_zero(f) else 0
    return len(f) - 1


def dmp_lc(f, n, K):
    """Leading coefficient in the main variable (a level n-1 polynomial)."""
    if not f:
        return dmp_zero(n - 1, K)
    return f[-1]


def dmp_ground_lc(f, n, K):
    while n > 0:
        if not f:
            return K.zero
        f = f[-1]
        n -= 1
    return f


def dmp_is_ground(f, n, K):
    while n > 0:
        if len(f) > 1:
            return False
        if not f:
            return True
        f = f[0]
        n -= 1
    return True


def dmp_add(f, g, n, K):
    if n == 0:
        return K.add(f, g)
    if not f:
        return g
    if not g:
        return f
    lf, lg = len(f), len(g)
    m = n - 1
    if lf < lg:
        f, g, lf, lg = g, f, lg, lf
    out = [dmp_add(f[i], g[i], m, K) for i in range(lg)]
    out.extend(f[lg:])
    if lf == lg:
        return dmp_strip(out, n, K)
    return tuple(out)


def dmp_neg(f, n, K):
    if n == 0:
        return K.neg(f)
    return tuple(dmp_neg(c, n - 1, K) for c in f)


def dmp_sub(f, g, n, K):
    if n == 0:
        return K.sub(f, g)
    return dmp_add(f, dmp_neg(g, n, K), n, K)


def dmp_mul(f, g, n, K):
    if n == 0:
        return K.mul(f, g)
    if not f or not g:
        return ()
    m = n - 1
    if m == 0:
        out = [K.zero] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if K.is_zero(a):
                continue
            for j, b in enumerate(g):
                if not K.is_zero(b):
                    out[i + j] = K.add(out[i + j], K.mul(a, b))
        return dmp_strip(out, n, K)
    out = [()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = dmp_add(out[i + j], dmp_mul(a, b, m, K), m, K)
    return dmp_strip(out, n, K)


def dmp_mul_ground(f, c, n, K):
    if n == 0:
        return K.mul(f, c)
    if K.is_zero(c):
        return ()
    return tuple(dmp_mul_ground(x, c, n - 1, K) for x in f)


def dmp_quo_ground(f, c, n, K):
    return dmp_mul_ground(f, K.inv(c), n, K)


def dmp_mul_coeff(f, c, n, K):
    """Multiply by a level n-1 polynomial ``c``."""
    if not f or dmp_is_zero(c, n - 1, K):
        return ()
    return dmp_strip([dmp_mul(x, c, n - 1, K) for x in f], n, K)


def dmp_pow(f, e, n, K):
    if e < 0:
        raise ValueError("negative exponent")
    result = dmp_one(n, K)
    base = f
    while e:
        if e & 1:
            result = dmp_mul(result, base, n, K)
        e >>= 1
        if e:
            base = dmp_mul(base, base, n, K)
    return result


def dmp_exquo(f, g, n, K):
    """Exact quotient ``f / g``; raises ExactDivisionError if not exact."""
    if n == 0:
        return K.div(f, g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if not f:
        return ()
    m = n - 1
    df, dg = len(f) - 1, len(g) - 1
    if df < dg:
        raise ExactDivisionError("degree of divisor exceeds dividend")
    q = [dmp_zero(m, K)] * (df - dg + 1)
    r = list(f)
    lcg = g[-1]
    for k in range(df - dg, -1, -1):
        c = r[k + dg]
        if dmp_is_zero(c, m, K):
            continue
        qk = dmp_exquo(c, lcg, m, K)
        q[k] = qk
        for j in range(dg + 1):
            r[k + j] = dmp_sub(r[k + j], dmp_mul(qk, g[j], m, K), m, K)
    if any(not dmp_is_zero(c, m, K) for c in r):
        raise ExactDivisionError("inexact polynomial division")
    return dmp_strip(q, n, K)


def dmp_exquo_coeff(f, c, n, K):
    """Divide every main-variable coefficient exactly by level n-1 ``c``."""
    return tuple(dmp_exquo(x, c, n - 1, K) for x in f)


def dmp_prem(f, g, n, K):
    """Pseudo-remainder of f by g in the main variable."""
    if not g:
        raise ZeroDivisionError("pseudo-remainder by zero")
    m = n - 1
    df, dg = len(f) - 1, len(g) - 1
    if df < dg:
        return f
    lcg = g[-1]
    e = df - dg + 1
    r = list(f)
    while r and len(r) - 1 >= dg:
        dr = len(r) - 1
        c = r[-1]
        r = [dmp_mul(x, lcg, m, K) for x in r]
        for j in range(dg + 1):
            r[dr - dg + j] = dmp_sub(r[dr - dg + j], dmp_mul(c, g[j], m, K), m, K)
        r = list(dmp_strip(r, n, K))
        e -= 1
    if e:
        factor = dmp_pow(lcg, e, m, K)
        r = [dmp_mul(x, factor, m, K) for x in r]
    return dmp_strip(r, n, K)


# -- univariate over a field -------------------------------------------------


def dup_divmod(f, g, K):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    df, dg = len(f) - 1, len(g) - 1
    if df < dg:
        return (), f
    inv = K.inv(g[-1])
    q = [K.zero] * (df - dg + 1)
    r = list(f)
    for k in range(df - dg, -1, -1):
        c = r[k + dg]
        if K.is_zero(c):
            continue
        c = K.mul(c, inv)
        q[k] = c
        for j in range(dg + 1):
            r[k + j] = K.sub(r[k + j], K.mul(c, g[j]))
    return dmp_strip(q, 1, K), dmp_strip(r[:dg], 1, K)


def dup_monic(f, K):
    if not f:
        return f
    return dmp_quo_ground(f, f[-1], 1, K)


def dup_gcd(f, g, K):
    while g:
        f, g = g, dup_divmod(f, g, K)[1]
    return dup_monic(f, K)


def dup_gcdex(f, g, K):
    """Return (s, h) with s*f = h (mod g), h = monic gcd(f, g)."""
    r0, r1 = f, g
    s0, s1 = (K.one,), ()
    while r1:
        q, r = dup_divmod(r0, r1, K)
        r0, r1 = r1, r
        s0, s1 = s1, dmp_sub(s0, dmp_mul(q, s1, 1, K), 1, K)
    if not r0:
        return (), ()
    c = K.inv(r0[-1])
    return dmp_mul_ground(s0, c, 1, K), dmp_mul_ground(r0, c, 1, K)


def dup_diff(f, K):
    return dmp_strip([K.mul(K.convert(i), f[i]) for i in range(1, len(f))], 1, K)


# -- content, primitive part, gcd --------------------------------------------


def dmp_ground_monic(f, n, K):
    if dmp_is_zero(f, n, K):
        return f
    return dmp_quo_ground(f, dmp_ground_lc(f, n, K), n, K)


def dmp_content(f, n, K):
    """gcd of the main-variable coefficients, ground-monic, level n-1."""
    m = n - 1
    cont = dmp_zero(m, K)
    for c in f:
        cont = dmp_gcd(cont, c, m, K)
        if dmp_is_ground(cont, m, K) and not dmp_is_zero(cont, m, K):
            break
    return cont


def dmp_primitive(f, n, K):
    if not f:
        return dmp_zero(n - 1, K), f
    cont = dmp_content(f, n, K)
    return cont, dmp_exquo_coeff(f, cont, n, K)


def _subresultant_gcd(A, B, n, K):
    """gcd of two primitive polynomials via the subresultant PRS."""
    m = n - 1
    if len(A) < len(B):
        A, B = B, A
    g = h = dmp_one(m, K)
    while True:
        delta = len(A) - len(B)
        R = dmp_prem(A, B, n, K)
        if not R:
            return dmp_primitive(B, n, K)[1]
        if len(R) == 1:
            return dmp_one(n, K)
        A = B
        divisor = dmp_mul(g, dmp_pow(h, delta, m, K), m, K)
        B = dmp_exquo_coeff(R, divisor, n, K)
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = dmp_exquo(dmp_pow(g, delta, m, K), dmp_pow(h, delta - 1, m, K), m, K)


def dmp_gcd(f, g, n, K):
    """Greatest common divisor, normalized to ground leading coefficient 1."""
    if n == 0:
        return K.zero if (K.is_zero(f) and K.is_zero(g)) else K.one
    if dmp_is_zero(f, n, K):
        return dmp_ground_monic(g, n, K)
    if dmp_is_zero(g, n, K):
        return dmp_ground_monic(f, n, K)
    if n == 1:
        return dup_gcd(f, g, K)
    cf, pf = dmp_primitive(f, n, K)
    cg, pg = dmp_primitive(g, n, K)
    c = dmp_gcd(cf, cg, n - 1, K)
    h = _subresultant_gcd(pf, pg, n, K)
    return dmp_ground_monic(dmp_mul_coeff(h, c, n, K), n, K)


# -- conversion and evaluation ------------------------------------------------


def dmp_to_dict(f, n, K):
    """Map exponent tuples (one entry per variable, in order) to coefficients."""
    out = {}

    def walk(g, level, exps):
        if level == 0:
            if not K.is_zero(g):
                out[tuple(reversed(exps))] = g
            return
        for i, c in enumerate(g):
            walk(c, level - 1, exps + (i,))

    walk(f, n, ())
    return out


def dmp_from_dict(d, n, K):
    if n == 0:
        return d.get((), K.zero)
    result = dmp_zero(n, K)
    for exps, c in d.items():
        if K.is_zero(c):
            continue
        result = dmp_add(result, dmp_monomial(exps, c, n, K), n, K)
    return result


def dmp_monomial(exps, c, n, K):
    if n == 0:
        return c
    if K.is_zero(c):
        return ()
    inner = dmp_monomial(exps[:-1], c, n - 1, K)
    return (dmp_zero(n - 1, K),) * exps[-1] + (inner,)


def dmp_eval_all(f, n, point, K):
    """Evaluate at a point (one domain element per variable)."""
    if n == 0:
        return f
    x = point[n - 1]
    acc = K.zero
    for c in reversed(f):
        acc = K.add(K.mul(acc, x), dmp_eval_all(c, n - 1, point, K))
    return acc


def dmp_convert(f, n, K_from, K_to):
    if n == 0:
        return K_to.convert(f)
    return dmp_strip([dmp_convert(c, n - 1, K_from, K_to) for c in f], n, K_to)


def dmp_total_degree(f, n, K):
    d = dmp_to_dict(f, n, K)
    return max((sum(e) for e in d), default=-1)


def dmp_degree_in(f, n, K, index):
    """Degree in variable ``index`` (0-based)."""
    d = dmp_to_dict(f, n, K)
    return max((e[index] for e in d), default=-1)
