"""Property suites over difference presentations and lattice problems.

Each check lands in a VerificationReport; nothing here raises on a failed
property.  Budget and input errors propagate to the caller.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

from .diffext.engine import DifferenceEngine, Options, relative_profile
from .diffext.power import power_reinterpret
from .diffext.report import VerificationReport
from .diffext.validate import validate
from .lattice import (
    index_exponent,
    intersect,
    modular_function,
    scale_limit,
    scale_newton,
    tidy_certify,
    tidy_search,
    w0_max,
)


def parse_blocks(spec, names):
    """'a; x' -> [('a',), ('x',)]; unknown names are an input error upstream."""
    if not spec:
        return []
    out = []
    for part in spec.split(";"):
        blk = tuple(n.strip() for n in part.split(",") if n.strip())
        if blk:
            out.append(blk)
    for blk in out:
        for n in blk:
            if n not in names:
                from .errors import InconsistentPresentation

                raise InconsistentPresentation(f"block mentions unknown generator {n!r}")
    return out


def profile_checks(e, rep, block, lmax):
    """Plateau-sequence, closed-form and tidy checks for one block."""
    prof = e.distant_profile(block)
    tag = ",".join(e.P.names[j] for j in prof.block)
    W = e.opt.window
    ld, m, l0, C, dd = prof.ld, prof.m, prof.ell0, prof.C, prof.dd
    rep.assert_true("steps_non_increasing", prof.flags["steps_monotone"], "limit degree", block=tag)
    rep.assert_true("lemma_non_decreasing", prof.flags["lemma_monotone"], "plateau profile", block=tag)
    rep.check("dd_times_m", dd * m, Fraction(ld), "plateau profile", block=tag)
    rep.check("dd_divides_ld", dd.denominator == 1 and ld % dd.numerator == 0, True, "divisibility", block=tag)
    for ell in range(l0, l0 + W + 1):
        rep.check(
            "closed_form", Fraction(prof.distant_sequence[ell - 1]), dd**ell * Fraction(m**l0, C),
            "plateau profile", block=tag, ell=ell,
        )
    n = prof.normalization

    def B(*levels):
        return e.orbit(levels, prof.block, n)

    target = Fraction(m**l0, C)
    for j in (l0, l0 + 1):
        for ell in (l0, l0 + 1):
            got = e.mu(B(j), B(0) | B(j + ell))
            rep.check("shifted_two_sided", Fraction(got), target, "plateau profile", block=tag, j=j, ell=ell)
    for i, j, k in ((0, 1, 2), (0, 1, 3), (1, 2, 4)):
        near = e.mu(B(j), B(i) | B(k))
        far = e.mu(B(j), B(*range(i + 1)) | B(k, k + 1, k + 2))
        rep.check("linear_disjointness", far, near, "disjointness window", block=tag, i=i, j=j, k=k)
    window = prof.distant_sequence[l0 - 1 : l0 + W]
    constant = len(set(window)) == 1
    rep.check("dd_one_iff_bounded", dd == 1, constant, "boundedness", block=tag)
    tidy = e.tidy_generator(prof.block, prof)
    if dd == 1:
        S = e.A.span(list(tidy.shifted)) if tidy.shifted else None
        ok = S is None or all(S.contains(c) for c in tidy.next)
        rep.assert_true("dd_one_sigma_c_in_span", ok, "boundedness", block=tag)
    vrep, steps = e.verify_tidy(tidy, lmax, dd)
    for r in vrep.records:
        r.params["block"] = tag
    rep.merge(vrep)
    return prof, tidy


def difference_suite(P, options=None, lmax=4, blocks=(), power_check=True):
    opt = options or Options()
    rep, _ = validate(P, opt.seed, opt.trials, opt.cap)
    e = DifferenceEngine(P, opt)
    full, _ = profile_checks(e, rep, None, lmax)
    tidies = []
    for blk in blocks:
        idx = e.block_indices(blk)
        if idx == e.all_coords:
            continue
        prof, tidy = profile_checks(e, rep, idx, lmax)
        tidies.append(tidy)
        rest = tuple(j for j in e.all_coords if j not in idx)
        rel = relative_profile(P, rest, engine=e)
        tag = ",".join(blk)
        rep.assert_true(
            "superadditivity", full.dd >= rel.dd * prof.dd, "relative distant degree",
            block=tag, joint=str(full.dd), relative=str(rel.dd), base=str(prof.dd),
        )
    if len(tidies) >= 2:
        combo = e.combine_tidy(tidies)
        crep, _ = e.verify_tidy(combo, lmax, degrees=False)
        for r in crep.records:
            r.prop = "tidy_concatenation_" + r.prop
        rep.merge(crep)
    if P.transcendental and P.algebraic:
        T = tuple(P.names.index(t) for t in P.transcendental)
        D = e.mu(e.orbit([0], e.all_coords), e.orbit([0], T))
        for k in range(1, 4):
            lhs = e.mu(e.orbit([k], e.all_coords), e.orbit([0], e.all_coords))
            rhs = D * e.mu(e.orbit([k], T), e.orbit([0], T))
            rep.assert_true("companion_bound", lhs <= rhs, "bound through an algebraic companion", k=k, D=D)
    if power_check:
        Q = power_reinterpret(P, 2, opt.cap)
        # only the certified window: raw distant terms grow like dd^(2l)
        prof2 = DifferenceEngine(Q, replace(opt, distant_length=0)).distant_profile()
        rep.check("power_law", prof2.dd, full.dd**2, "power of sigma", n=2)
    return rep


def lattice_suite(alpha, U, V=None, W=None, k_max=24):
    rep = VerificationReport()
    p = alpha.p
    inv = alpha.inverse()
    s, _, _ = scale_limit(alpha, U, k_max)
    si, _, _ = scale_limit(inv, U, k_max)
    sn, sni = scale_newton(alpha), scale_newton(inv)
    rep.check("limit_equals_newton", s, sn, "two scale routes", direction="forward")
    rep.check("limit_equals_newton", si, sni, "two scale routes", direction="inverse")
    delta = modular_function(alpha)
    rep.check("modular_multiplicative", delta * modular_function(inv), Fraction(1), "modular function")
    rep.check("modular_ratio", Fraction(s, si), delta, "modular function")
    rep.check("modular_ratio_inverse", Fraction(si, s), 1 / delta, "modular function")
    for k in range(1, 5):
        rep.check("power_law", scale_newton(alpha**k), sn**k, "power of alpha", k=k)
    rep.check("power_law_limit", scale_limit(alpha**2, U, k_max)[0], s**2, "power of alpha", k=2)
    T, k = tidy_search(alpha, U, k_max)
    rep.assert_true("tidy_search_certifies", tidy_certify(alpha, T), "minimality", k=k)
    rep.assert_true("index_at_least_scale", p ** index_exponent(alpha.image(U), U) >= sn, "minimality")
    M = intersect(U, alpha.image(U))
    N = intersect(M, (alpha**2).image(U))
    rep.check(
        "index_multiplicative", index_exponent(U, N), index_exponent(U, M) + index_exponent(M, N), "lattice index"
    )
    if V is not None:
        W0, checks = w0_max(V, U, W)
        for name, ok in sorted(checks.items()):
            rep.assert_true("w0_" + name, ok, "maximal subgroup")
    return rep
