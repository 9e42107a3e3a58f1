from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from distdeg.exact import (
    GF,
    QQ,
    FractionField,
    PolyRing,
    determinant,
    elementary_divisors,
    factor_fp,
    hermite_normal_form,
    mpoly_gcd,
    smith_normal_form,
    solve_linear,
)
from distdeg.exact.intmat import matmul


# -- oracles ---------------------------------------------------------------


def minor_gcds(M):
    """Determinantal divisors d_k = gcd of all k x k minors (oracle for SNF)."""
    m, n = len(M), len(M[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, int(sympy.Matrix([[M[i][j] for j in cols] for i in rows]).det()))
        out.append(g)
    return out


def divisors_oracle(M):
    d = minor_gcds(M)
    out, prev = [], 1
    for x in d:
        out.append(0 if x == 0 else x // prev)
        prev = x if x else prev
    return out


def to_sympy(f, names):
    syms = sympy.symbols(names)
    return sum(
        sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s**e for s, e in zip(syms, exps)])
        for exps, c in f.to_dict().items()
    )


# -- mpoly_gcd ---------------------------------------------------------------

R1 = PolyRing(["x"])
R2 = PolyRing(["a", "b"])


def test_gcd_shared_linear_factor():
    x = R1.gen("x")
    assert mpoly_gcd(x**2 - 1, x - 1) == x - 1


def test_gcd_with_zero_is_normalized_input():
    x = R1.gen("x")
    assert mpoly_gcd(3 * x + 6, R1.const(0)) == x + 2


def test_gcd_quadratic_factor():
    a = PolyRing(["a"]).gen("a")
    got = mpoly_gcd((a**2 + 1) * (a**2 + 2), (a**2 + 1) * a)
    f, g = sympy.symbols("a"), None
    oracle = sympy.gcd((f**2 + 1) * (f**2 + 2), (f**2 + 1) * f)
    assert got == a**2 + 1
    assert sympy.expand(to_sympy(got, ["a"]) - oracle) == 0


small = st.integers(-3, 3)
poly2 = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=4)


@settings(max_examples=60, deadline=None)
@given(poly2, poly2, poly2)
def test_gcd_scales_with_common_factor(f, g, h):
    F, G, H = R2.from_dict(f), R2.from_dict(g), R2.from_dict(h)
    if H.is_zero() or (F.is_zero() and G.is_zero()):
        return
    got = mpoly_gcd(F * H, G * H)
    want = (mpoly_gcd(F, G) * H).monic()
    assert got == want


@settings(max_examples=40, deadline=None)
@given(poly2, poly2)
def test_gcd_matches_sympy(f, g):
    F, G = R2.from_dict(f), R2.from_dict(g)
    if F.is_zero() and G.is_zero():
        return
    got = to_sympy(mpoly_gcd(F, G), ["a", "b"])
    want = sympy.gcd(to_sympy(F, ["a", "b"]), to_sympy(G, ["a", "b"]))
    assert sympy.simplify(got / want).is_number


# -- solve_linear ------------------------------------------------------------

Ft = FractionField(["t"])


def test_identity_unique():
    t = Ft.gen("t")
    sol = solve_linear([[Ft.one, Ft.zero], [Ft.zero, Ft.one]], [Ft.one, t], Ft)
    assert sol.status == "unique"
    assert sol.particular == (Ft.one, t)


def test_inconsistent():
    sol = solve_linear([[1, 1], [1, 1]], [Fraction(1), Fraction(2)], QQ)
    assert sol.status == "none"
    assert not sol.consistent


def test_kernel_over_rational_functions():
    t = Ft.gen("t")
    A = [[t, Ft.one], [Ft.mul(t, t), t]]
    sol = solve_linear(A, [Ft.zero, Ft.zero], Ft)
    assert sol.status == "family"
    assert len(sol.kernel) == 1
    k = sol.kernel[0]
    for row in A:
        assert Ft.add(Ft.mul(row[0], k[0]), Ft.mul(row[1], k[1])) == Ft.zero
    # proportional to (-1/t, 1)
    assert Ft.div(k[0], k[1]) == Ft.div(Ft.neg(Ft.one), t)


rational = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_solution_and_kernel_satisfy_system(m, n, data):
    A = [[data.draw(rational) for _ in range(n)] for _ in range(m)]
    b = [data.draw(rational) for _ in range(m)]
    sol = solve_linear(A, b, QQ)
    M = sympy.Matrix(A)
    aug = M.row_join(sympy.Matrix(b))
    consistent = M.rank() == aug.rank()
    assert sol.consistent == consistent
    if not consistent:
        return
    for i in range(m):
        assert sum(A[i][j] * sol.particular[j] for j in range(n)) == b[i]
    assert len(sol.kernel) == n - M.rank()
    for k in sol.kernel:
        for i in range(m):
            assert sum(A[i][j] * k[j] for j in range(n)) == 0
    assert (sol.status == "unique") == (M.rank() == n)


# -- integer normal forms ----------------------------------------------------


def test_snf_examples():
    assert elementary_divisors([[2, 0], [0, 3]]) == [1, 6]
    assert elementary_divisors([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [1, 1, 1]
    assert elementary_divisors([[2, 0], [0, 2]]) == [2, 2]


int_matrix = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=80, deadline=None)
@given(int_matrix)
def test_snf_against_minor_oracle(M):
    U, S, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == S
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    d = [S[i][i] for i in range(min(len(M), len(M[0])))]
    assert all(S[i][j] == 0 for i in range(len(S)) for j in range(len(S[0])) if i != j)
    assert all(x >= 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1) if d[i])
    assert d == divisors_oracle(M)
    if len(M) == len(M[0]):
        prod = 1
        for x in d:
            prod *= x
        assert prod == abs(determinant(M))


@settings(max_examples=80, deadline=None)
@given(int_matrix)
def test_hnf_structure(M):
    H, U = hermite_normal_form(M)
    assert abs(determinant(U)) == 1
    UM = matmul(U, M)
    assert UM[: len(H)] == H
    assert all(not any(r) for r in UM[len(H):])
    assert len(H) == sympy.Matrix(M).rank()
    last = -1
    for i, row in enumerate(H):
        c = next(j for j, x in enumerate(row) if x)
        assert c > last and row[c] > 0
        last = c
        for k in range(i):
            assert 0 <= H[k][c] < row[c]


@settings(max_examples=50, deadline=None)
@given(int_matrix)
def test_determinant_matches_sympy(M):
    if len(M) != len(M[0]):
        return
    assert determinant(M) == int(sympy.Matrix(M).det())


# -- factor_fp ---------------------------------------------------------------


def roots_mod(coeffs, p):
    return [r for r in range(p) if sum(c * r**i for i, c in enumerate(coeffs)) % p == 0]


def test_factor_examples():
    R = PolyRing(["x"], GF(5))
    x = R.gen("x")
    lc, fs = factor_fp(x**2 - 1)
    assert lc == 1 and sorted(str(f) for f, _ in fs) == sorted([str(x - 1), str(x + 1)])

    R3 = PolyRing(["x"], GF(3))
    y = R3.gen("x")
    _, fs = factor_fp(y**2 + 1)
    assert fs == [(y**2 + 1, 1)]
    assert roots_mod([1, 0, 1], 3) == []

    R7 = PolyRing(["x"], GF(7))
    z = R7.gen("x")
    _, fs = factor_fp(z**3 - z)
    assert sorted(str(f) for f, _ in fs) == sorted(str(g) for g in (z, z - 1, z + 1))


def test_factor_rejects_rationals():
    with pytest.raises(TypeError):
        factor_fp(R1.gen("x") ** 2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 101, 2**31 - 1]), st.lists(st.integers(0, 10**6), min_size=2, max_size=9), st.integers(0, 99))
def test_factor_reproduces_input(p, coeffs, seed):
    if coeffs[-1] % p == 0:
        return
    R = PolyRing(["x"], GF(p))
    f = R.from_dict({(i,): c for i, c in enumerate(coeffs)})
    lc, fs = factor_fp(f, seed=seed)
    prod = R.const(lc)
    for g, e in fs:
        prod = prod * g**e
        assert g.monic() == g
    assert prod == f
    assert sum(g.degree() * e for g, e in fs) == f.degree()
    # compare against sympy's factorization over GF(p)
    xs = sympy.symbols("x")
    want = sympy.factor_list(sympy.Poly(to_sympy_gf(f), xs, modulus=p))
    want_degs = sorted((sympy.Poly(g, xs).degree(), e) for g, e in want[1])
    assert sorted((g.degree(), e) for g, e in fs) == want_degs


def to_sympy_gf(f):
    x = sympy.symbols("x")
    return sum(int(c) * x ** e[0] for e, c in f.to_dict().items())


# -- scalars -----------------------------------------------------------------


def test_scalar_canonical_forms():
    K = GF(7)
    assert K.convert(-1) == 6
    assert K.convert(Fraction(1, 2)) == 4
    f = Ft.from_fraction(Ft.ring.gen("t").rep, (Ft.ring.gen("t") * 2).rep)
    assert f == Ft.convert(Fraction(1, 2))
