"""Acceptance criteria 1-7, one PASS/FAIL line each.

Every comparison is exact.  Independent oracles (Kummer squarefreeness via
sympy, Luroth degree of a rational function, sympy Smith forms) are used
wherever a value is derived rather than read off.
"""

import contextlib
import importlib
import io
import random
import time
from fractions import Fraction
from itertools import combinations

import sympy

from distdeg.diffext import DifferenceEngine, Options, build_ambient, power_reinterpret, relative_profile
from distdeg.errors import NonStabilized
from distdeg.exact import QQ, mpoly_gcd, smith_normal_form, solve_linear
from distdeg.exact.intmat import matmul
from distdeg.lattice import (
    Lattice,
    LinearAuto,
    intersect,
    lattice_sum,
    modular_function,
    scale_limit,
    scale_newton,
    tidy_search,
    w0_max,
)
from distdeg.suite import lattice_suite
from distdeg.tower import span_closure

import test_random_instances as rnd
from conftest import fixture_path, load
from test_exact import R2, divisors_oracle, to_sympy

cli = importlib.import_module("distdeg.cli.main")

F = Fraction


def verdict(capsys, n, checks):
    failed = [label for label, ok in checks if not ok]
    line = f"criterion {n}: " + ("PASS" if not failed else "FAIL (" + ", ".join(failed) + ")")
    with capsys.disabled():
        print("\n" + line)
    assert not failed, line


def kummer_degree(radicands):
    """[K(a)(sqrt r : r) : K(a)] = 2^rank of the radicands in K(a)*/K(a)*^2.

    Brute force over subsets: a product is a square iff every irreducible
    factor appears to an even power.
    """
    a = sympy.symbols("a")
    for size in range(1, len(radicands) + 1):
        for sub in combinations(radicands, size):
            _, facs = sympy.factor_list(sympy.Mul(*sub), a)
            if all(e % 2 == 0 for _, e in facs):
                return None  # dependent: not expected for these radicands
    return 2 ** len(radicands)


def luroth_degree(expr, var):
    num, den = sympy.fraction(sympy.cancel(expr))
    return max(sympy.degree(num, var), sympy.degree(den, var))


# -- 1 -----------------------------------------------------------------------------------------


def test_criterion_1_worked_example(capsys, presentations):
    start = time.perf_counter()
    P = presentations["e1"]
    e = DifferenceEngine(P, Options(max_depth=8))
    a_prof = e.distant_profile(["a"])
    joint = e.distant_profile()
    rel = relative_profile(P, ["b"], engine=e)
    A = build_ambient(presentations["e1a"], 5)
    a = sympy.symbols("a")
    chain = []
    for ell in range(2, 7):
        got = span_closure([A.coord(k, 0) for k in range(ell)], tower=A.tower).dimension
        chain.append((got, kummer_degree([a**2 + k for k in range(1, ell)]), 2 ** (ell - 1)))
    elapsed = time.perf_counter() - start
    verdict(capsys, 1, [
        ("ld(a) = 2", e.limit_degree(["a"]).value == 2),
        ("dd(a) = 1", a_prof.dd == 1),
        ("ld(a,b) = 2", e.limit_degree().value == 2),
        ("dd(a,b) = 2", joint.dd == 2),
        ("relative ld(b) = 1", rel.ld == 1),
        ("degree chain 2^(l-1), l <= 6", all(g == o == w for g, o, w in chain)),
        ("runtime <= 60 s", elapsed <= 60),
    ])


# -- 2 -----------------------------------------------------------------------------------------


def test_criterion_2_profiles(capsys, presentations):
    e1 = DifferenceEngine(presentations["e1"]).distant_profile(["a"])
    e2 = DifferenceEngine(presentations["e2"]).distant_profile()
    verdict(capsys, 2, [
        ("E1 a-block m, l0, C = 2, 2, 2", (e1.m, e1.ell0, e1.C) == (2, 2, 2)),
        ("E1 mu(sigma^l(a)/K(a)) = 2, 2 <= l <= 6", len(e1.distant_sequence) >= 6 and all(x == 2 for x in e1.distant_sequence[1:6])),
        ("E2 m, l0, C, dd = 1, 1, 1, 2", (e2.m, e2.ell0, e2.C, e2.dd) == (1, 1, 1, 2)),
        ("E2 mu(sigma^l(a)/K(a)) = 2^l, l <= 6", e2.distant_sequence[:6] == [2**ell for ell in range(1, 7)]),
    ])


# -- 3 -----------------------------------------------------------------------------------------


def test_criterion_3_tidy(capsys, presentations):
    checks = []
    e = DifferenceEngine(presentations["e1"])
    tidy = e.tidy_generator(["a"])
    a = sympy.symbols("a")
    # a zero coefficient adds nothing to the field
    c = [sympy.sympify(str(x.base_value()).replace("^", "**"), locals={"a": a}) for x in tidy.shifted if not x.is_zero()]
    s = sympy.symbols("s")
    # K(c) = K(a^2): c is even in a and has Luroth degree 2 over K(a), hence degree 1 over K(a^2)
    gens_a2 = all(sympy.simplify(x.subs(a, -a) - x) == 0 and luroth_degree(x, a) == 2 for x in c)
    in_a2 = all(luroth_degree(sympy.cancel(x.subs(a, sympy.sqrt(s))), s) == 1 for x in c)
    same = all(x.base_value() is not None for x in tidy.shifted)
    checks.append(("E1 sigma^2(c) ~ a^2 + 2", len(c) == 1 and sympy.expand(c[0] + a**2 + 2) == 0))
    checks.append(("E1 c generates K(a^2)", gens_a2 and in_a2 and same))
    rep, steps = e.verify_tidy(tidy, 4)
    checks.append(("E1 memberships 1 <= l <= 4", rep.passed))
    checks.append(("E1 relative ld(c) = dd(a) = 1", tidy.relative and steps == [1, 1, 1, 1]))

    e = DifferenceEngine(presentations["e2"])
    tidy = e.tidy_generator()
    A = e.A
    same = span_closure(list(tidy.shifted), tower=A.tower).same_field(span_closure([A.coord(tidy.ell0, 0)], tower=A.tower))
    rep, steps = e.verify_tidy(tidy, 4)
    checks.append(("E2 c ~ a", same))
    checks.append(("E2 ld(c) = 2 = dd", rep.passed and steps == [2, 2, 2, 2] and e.distant_profile().dd == 2))

    e = DifferenceEngine(presentations["e3"])
    tidy = e.tidy_generator()
    rep, _ = e.verify_tidy(tidy, 4)
    checks.append(("E3 c in K", all(x.base_value() is not None for x in tidy.shifted)))
    checks.append(("E3 non-relative verification", not tidy.relative and rep.passed))
    verdict(capsys, 3, checks)


# -- 4 -----------------------------------------------------------------------------------------


def test_criterion_4_power_and_divisibility(capsys, presentations):
    checks = []
    window = Options(distant_length=0)
    for name, block, dd in (("e1", None, 2), ("e1", ["a"], 1), ("e2", None, 2)):
        P = presentations[name]
        if block:
            P = presentations["e1a"]
        base = DifferenceEngine(P, window).distant_profile().dd
        sq = DifferenceEngine(power_reinterpret(P, 2), window).distant_profile().dd
        checks.append((f"{name}{'-a' if block else ''} dd(sigma^2) = dd^2", base == dd and sq == dd**2))
    for name, block in (("e1", ["a"]), ("e3", None), ("e2", None)):
        prof = DifferenceEngine(presentations[name]).distant_profile(block)
        tail = prof.distant_sequence[prof.ell0 - 1 :]
        checks.append((f"{name} dd = 1 iff constant", (prof.dd == 1) == (len(set(tail)) == 1)))
    for name in ("e1", "e1a", "e2", "e3", "e4", "e5", "trivial"):
        prof = DifferenceEngine(presentations[name], window).distant_profile()
        checks.append((f"{name} dd | ld", prof.dd.denominator == 1 and prof.ld % prof.dd.numerator == 0))
    e = DifferenceEngine(presentations["e4"])
    both = e.combine_tidy([e.tidy_generator(["a"]), e.tidy_generator(["x"])])
    checks.append(("E1+E2 concatenated tidy", e.verify_tidy(both, 3, degrees=False)[0].passed))
    verdict(capsys, 4, checks)


# -- 5 -----------------------------------------------------------------------------------------


def test_criterion_5_non_multiplicativity(capsys, presentations):
    # b alone is not sigma-closed (sigma(b) = b + a), so the tower is K < K(a) < K(a, b)
    P = presentations["e1"]
    e = DifferenceEngine(P)
    joint = e.distant_profile().dd
    lower = e.distant_profile(["a"]).dd
    upper = relative_profile(P, ["b"], engine=e).dd
    verdict(capsys, 5, [
        ("dd(a,b) = 2", joint == 2),
        ("dd(a,b) >= dd(b | a) dd(a)", joint >= upper * lower),
        ("2 != dd(b | a) dd(a) = 1", upper * lower == 1 and joint != upper * lower),
    ])


# -- 6 -----------------------------------------------------------------------------------------


def vp_abs(x, p):
    x, v = F(x), 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return F(1, p**v) if v >= 0 else F(p ** (-v))


def test_criterion_6_lattice(capsys):
    start = time.perf_counter()
    checks = []
    for p in (2, 3, 5):
        a = LinearAuto([[F(1, p), 0], [0, p]], p)
        checks.append((f"s(diag(1/{p}, {p})) = {p}", scale_limit(a, Lattice.standard(p, 2))[0] == p == scale_newton(a)))
    comp = LinearAuto([[0, 2], [1, 0]], 2)
    U2 = Lattice.standard(2, 2)
    checks.append(("companion s = 1", scale_limit(comp, U2)[0] == 1 == scale_newton(comp)))
    checks.append(("companion s(inverse) = 2", scale_limit(comp.inverse(), U2)[0] == 2 == scale_newton(comp.inverse())))

    rng = random.Random(6)
    mats = [LinearAuto([[F(1, 2), 0], [0, 2]], 2), comp, LinearAuto([[2]], 2)]
    for inst in ("diag.lat", "companion.lat", "conjugate.lat"):
        lp = load(inst).lattice
        mats.append(LinearAuto(lp.alpha, lp.prime))
    while len(mats) < 40:
        p, n = rng.choice((2, 3, 5)), rng.randint(1, 4)
        A = [[F(rng.randint(-4, 4), rng.choice((1, p))) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(A).det() != 0:
            mats.append(LinearAuto(A, p))
    squares = modular = reciprocal = True
    for a in mats:
        s, si = scale_newton(a), scale_newton(a.inverse())
        squares &= scale_newton(a @ a) == s**2
        U = Lattice.standard(a.p, a.n)
        try:
            sl, sli = scale_limit(a, U, 24)[0], scale_limit(a.inverse(), U, 24)[0]
        except NonStabilized:
            T, _ = tidy_search(a, U, 24)
            sl, sli = scale_limit(a, T, 24)[0], scale_limit(a.inverse(), T, 24)[0]
        delta = modular_function(a)
        modular &= delta == vp_abs(a.det(), a.p) == F(s, si) == F(sl, sli)
        # the reciprocal ratio is the modular function of the inverse
        reciprocal &= F(si, s) == modular_function(a.inverse()) == 1 / delta
    checks.append(("s(a^2) = s(a)^2", squares))
    checks.append(("modular function = |det|_p = s(a)/s(a^-1)", modular))
    checks.append(("s(a^-1)/s(a) = modular function of a^-1", reciprocal))

    wrng = random.Random(20260)
    w0_ok = True
    for _ in range(100):
        p, n = wrng.choice((2, 3, 5)), wrng.randint(1, 4)
        while True:
            A = [[F(wrng.randint(-4, 4), wrng.choice((1, p))) for _ in range(n)] for _ in range(n)]
            if sympy.Matrix(A).det() != 0:
                break
        U = LinearAuto(A, p).image(Lattice.standard(p, n))
        V = Lattice(p, n, [[F(wrng.randint(-4, 4), wrng.choice((1, p, p * p))) for _ in range(n)] for _ in range(wrng.randint(0, n))])
        W0, post = w0_max(V, U)
        w0_ok &= all(post.values()) and W0 == lattice_sum(V, U) and intersect(W0, U) == U
    checks.append(("w0_max on 100 random pairs", w0_ok))
    checks.append(("runtime <= 5 s", time.perf_counter() - start <= 5))
    verdict(capsys, 6, checks)


# -- 7 -----------------------------------------------------------------------------------------


def run_suite(path):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        return cli.main(["suite", path])


def kernel_sweep(seed):
    rng = random.Random(seed)
    ok = True
    for _ in range(30):
        M = [[rng.randint(-9, 9) for _ in range(rng.randint(1, 3))] for _ in range(rng.randint(1, 3))]
        M = [r[: len(M[0])] + [0] * (len(M[0]) - len(r)) for r in M]
        U, S, V = smith_normal_form(M)
        ok &= matmul(matmul(U, M), V) == S
        ok &= [S[i][i] for i in range(min(len(M), len(M[0])))] == divisors_oracle(M)
        f = R2.from_dict({(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(3)})
        g = R2.from_dict({(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(3)})
        if not (f.is_zero() and g.is_zero()):
            want = sympy.gcd(to_sympy(f, ["a", "b"]), to_sympy(g, ["a", "b"]))
            ok &= sympy.simplify(to_sympy(mpoly_gcd(f, g), ["a", "b"]) / want).is_number
        A = [[F(rng.randint(-3, 3)) for _ in range(3)] for _ in range(3)]
        b = [F(rng.randint(-3, 3)) for _ in range(3)]
        sol = solve_linear(A, b, QQ)
        if sol.consistent:
            ok &= all(sum(A[i][j] * sol.particular[j] for j in range(3)) == b[i] for i in range(3))
            ok &= all(sum(A[i][j] * k[j] for j in range(3)) == 0 for k in sol.kernel for i in range(3))
    return ok


def test_criterion_7_property_suites(capsys):
    checks = []
    for name in ("e1.dd", "e1a.dd", "e2.dd", "e3.dd", "e4.dd", "e5.dd", "trivial.dd", "diag.lat", "companion.lat", "conjugate.lat"):
        checks.append((name, run_suite(fixture_path(name)) == 0))
    failures = []
    for case in rnd.CASES:
        family, seed = case.values
        try:
            if family is rnd.random_lattice_case:
                rnd.test_lattice_instance(family, seed)
            else:
                rnd.test_difference_instance(family, seed)
        except AssertionError:
            failures.append(case.id)
    checks.append((f"200 random instances ({len(failures)} failed)", len(rnd.CASES) == 200 and not failures))
    checks.append(("SNF/GCD/linear kernels", kernel_sweep(7)))
    verdict(capsys, 7, checks)
