"""Degree invariants of a presented difference field extension.

All degrees are ratios of span dimensions inside the ambient tower.  Orbit
sets are frozensets of (level, coordinate) pairs; the span of such a set is
the field generated over the base by the corresponding sigma^level(a_j).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import CrossCheckFailed, DimensionBlowup, InconsistentPresentation, InverseDataRequired, NonStabilized, SplitDetected
from ..expr import evaluate, ratfunc_expr, symbols
from ..tower import minimal_polynomial_tuple, span_closure
from ..tower.span import DEFAULT_CAP
from .ambient import AmbientTower, base_inverse
from .presentation import DifferencePresentation, InverseData
from .report import VerificationReport, exact_str


@dataclass
class Options:
    max_depth: int = 12
    window: int = 3
    cap: int = DEFAULT_CAP
    trials: int = 5
    seed: int = 0
    distant_length: int = 6


@dataclass
class LimitDegree:
    value: int
    k_star: int
    steps: list
    proven: bool
    normalization: int

    def to_dict(self):
        return {
            "ld": str(self.value),
            "certified_from": self.k_star,
            "steps": [str(s) for s in self.steps],
            "proven": self.proven,
            "normalization": self.normalization,
        }


@dataclass
class DegreeProfile:
    ld: int
    steps: list
    lemma_sequence: list
    m: int
    ell0: int
    C: int
    dd: Fraction
    distant_sequence: list
    normalization: int
    flags: dict = field(default_factory=dict)
    ild: int | None = None
    idd: Fraction | None = None
    block: tuple = ()

    def to_dict(self):
        out = {
            "ld": self.ld,
            "ild": self.ild,
            "m": self.m,
            "ell0": self.ell0,
            "C": self.C,
            "dd": self.dd,
            "idd": self.idd,
            "steps": self.steps,
            "lemma_sequence": self.lemma_sequence,
            "distant_sequence": self.distant_sequence,
            "normalization": self.normalization,
            "block": list(self.block),
        }
        out = exact_str(out)
        out["flags"] = dict(self.flags)
        return out


@dataclass
class TidyGenerator:
    ell0: int
    shifted: tuple  # sigma^ell0(c)
    next: tuple  # sigma^(ell0+1)(c)
    polys: list
    N: int
    relative: bool
    block: tuple = ()
    normalization: int = 0
    engine: object = field(default=None, repr=False, compare=False)  # owner of the elements

    def to_dict(self):
        return {
            "ell0": self.ell0,
            "shifted_c": [str(c) for c in self.shifted],
            "next_c": [str(c) for c in self.next],
            "polynomials": [str(p) for p in self.polys],
            "N": str(self.N),
            "relative": self.relative,
            "block": list(self.block),
        }


def _window_start(values, W, lo=1):
    """Smallest k >= lo with values[k..k+W] all equal (values is 1-indexed via dict)."""
    ks = sorted(values)
    for k in ks:
        if k < lo:
            continue
        if all(values.get(k + i) == values[k] for i in range(W + 1)):
            return k
    return None


class DifferenceEngine:
    """Caches the ambient tower and the spans of orbit sets for one presentation."""

    def __init__(self, P: DifferencePresentation, options: Options | None = None):
        self.P = P
        self.opt = options or Options()
        self.A = AmbientTower(P, self.opt.cap)
        self._spans = {}
        self._ld = {}
        self._profiles = {}

    # -- orbit sets -------------------------------------------------------------

    @property
    def all_coords(self):
        return tuple(range(len(self.P.names)))

    def block_indices(self, block):
        if block is None:
            return self.all_coords
        out = []
        for b in block:
            out.append(self.P.names.index(b) if isinstance(b, str) else int(b))
        return tuple(out)

    @staticmethod
    def orbit(levels, block, n=0):
        return frozenset((k + i, j) for k in levels for i in range(n + 1) for j in block)

    def span(self, pairs):
        pairs = frozenset(pairs)
        S = self._spans.get(pairs)
        if S is not None:
            return S
        top = max((k for k, _ in pairs), default=0)
        if top > self.opt.max_depth * 3:
            raise NonStabilized(f"orbit level {top} beyond budget")
        elems = {p: self.A.coord(*p) for p in sorted(pairs)}
        best = None
        for key, cand in self._spans.items():
            if key <= pairs and (best is None or len(key) > len(best[0])):
                best = (key, cand)
        if best is None:
            S = span_closure([elems[p] for p in sorted(pairs)], cap=self.opt.cap, tower=self.A.tower)
        else:
            S = span_closure([elems[p] for p in sorted(pairs - best[0])], start=best[1], cap=self.opt.cap)
        self._spans[pairs] = S
        return S

    def mu(self, X, Y):
        """Degree of the field generated by orbit set X over the one generated by Y."""
        low = self.span(Y).dimension
        high = self.span(frozenset(X) | frozenset(Y)).dimension
        if high % low:
            raise CrossCheckFailed(f"span dimensions {high} / {low} are not a field degree")
        return high // low

    # -- limit degree -----------------------------------------------------------

    def step_degree(self, k, block, extra=frozenset()):
        if block == self.all_coords and not extra:
            return self.A.step_degree(k)
        return self.mu(self.orbit([k], block), self.orbit(range(k), block) | extra)

    def limit_degree(self, block=None, extra=frozenset()):
        block = self.block_indices(block)
        key = (block, extra)
        if key in self._ld:
            return self._ld[key]
        W = self.opt.window
        lo = max(1, self.P.stabilization_depth)
        values = {}
        k_star = None
        proven = False
        for k in range(1, self.opt.max_depth + 1):
            values[k] = self.step_degree(k, block, extra)
            if values[k] == 1 and k >= lo and not extra:
                k_star, proven = k, True
                break
            start = _window_start(values, W, lo)
            if start is not None:
                k_star = start
                break
        if k_star is None:
            raise NonStabilized(f"step degrees {list(values.values())} did not stabilize by depth {self.opt.max_depth}")
        ld = values[k_star]
        n = min(k for k in values if values[k] == ld) - 1
        res = LimitDegree(ld, k_star, [values[k] for k in sorted(values)], proven, n)
        self._ld[key] = res
        return res

    # -- the plateau profile ------------------------------------------------------

    def distant_profile(self, block=None, extra=frozenset()):
        block = self.block_indices(block)
        key = (block, extra)
        if key in self._profiles:
            return self._profiles[key]
        W = self.opt.window
        L = self.limit_degree(block, extra)
        ld, n = L.value, L.normalization

        def B(*levels):
            return self.orbit(levels, block, n)

        base = B(0) | extra
        seq = {}
        m = ell0 = None
        m_proven = False
        for ell in range(1, self.opt.max_depth - n + 1):
            seq[ell] = self.mu(B(1), base | B(ell))
            if seq[ell] == ld:
                m, m_proven = ld, True
            else:
                start = _window_start(seq, W)
                if start is not None:
                    m = seq[start]
            if m is not None:
                ell0 = min(l for l in seq if seq[l] == m)
                break
        if m is None:
            raise NonStabilized(f"sequence {list(seq.values())} did not reach a plateau by depth {self.opt.max_depth}")
        C = 1 if ell0 == 1 else self.mu(self.orbit(range(1, ell0), block, n), base | B(ell0))
        dd = Fraction(ld, m)
        length = max(self.opt.distant_length, ell0 + W)
        distant = [self.mu(B(ell), base) for ell in range(1, ell0 + W + 1)]
        truncated = False
        for ell in range(ell0 + W + 1, length + 1):
            # beyond the certification window the raw sequence is informative only
            try:
                distant.append(self.mu(B(ell), base))
            except DimensionBlowup:
                truncated = True
                break
        closed = []
        for ell in range(ell0, ell0 + W + 1):
            expected = dd**ell * Fraction(m**ell0, C)
            closed.append(expected)
            if distant[ell - 1] != expected:
                raise CrossCheckFailed(
                    f"closed form predicts {expected} for level {ell}, computed {distant[ell - 1]}"
                )
        lemma = [seq[l] for l in sorted(seq)]
        flags = {
            "ld_certified": True,
            "ld_proven": L.proven,
            "m_proven": m_proven,
            "closed_form": True,
            "lemma_monotone": all(a <= b for a, b in zip(lemma, lemma[1:])),
            "steps_monotone": all(a >= b for a, b in zip(L.steps, L.steps[1:])),
            "relative": not self.P.is_algebraic_regime or bool(extra),
            "dd_integer": dd.denominator == 1,
            "distant_truncated": truncated,
        }
        prof = DegreeProfile(ld, L.steps, lemma, m, ell0, C, dd, distant, n, flags, block=block)
        self._profiles[key] = prof
        return prof

    # -- inverse limit degree ---------------------------------------------------

    def inverse_presentation(self):
        P = self.P
        if P.inverse is None:
            raise InverseDataRequired("no inverse images supplied")
        F = self.A.F
        inv_base = base_inverse(P, F)
        names = list(F.vars) if P.base_vars else []
        base_sigma = {v: ratfunc_expr(inv_base[v], names) for v in P.base_vars}
        return DifferencePresentation(
            gens=P.gens,
            sigma=P.inverse.images,
            ext=P.inverse.ext,
            characteristic=P.characteristic,
            base_vars=P.base_vars,
            base_sigma=base_sigma,
            stabilization_depth=P.stabilization_depth,
            inverse=InverseData(images=P.sigma, ext=P.ext, base=dict(P.base_sigma)),
        )

    def check_inverse(self):
        """sigma(sigma^-1(a_j)) = a_j for images rational in a; others are skipped."""
        P = self.P
        T0 = self.A.towers[0]
        env = {n: self.A.coord(0, j) for j, n in enumerate(P.names)}
        env.update({v: T0.const(self.A.F.gen(v)) for v in P.base_vars})
        checked = {}
        for j, g in enumerate(P.names):
            e = P.inverse.images[g]
            if symbols(e) - set(env):
                checked[g] = None
                continue
            try:
                x = evaluate(e, env, T0.const)
                ok = self.A.shift(T0.coerce(x)) == self.A.coord(0, j)
            except SplitDetected:
                ok = False
            checked[g] = ok
            if not ok:
                raise InconsistentPresentation(f"sigma(sigma^-1({g})) != {g}")
        return checked

    def inverse_limit_degree(self, block=None):
        """Returns (ild, idd or None, method)."""
        P = self.P
        if P.inverse is not None and block is None:
            self.check_inverse()
            inv = DifferenceEngine(self.inverse_presentation(), self.opt)
            prof = inv.distant_profile()
            return prof.ld, prof.dd, "inverse presentation"
        if P.is_algebraic_regime:
            b = self.block_indices(block)
            L = self.limit_degree(b)
            n = L.normalization
            ild = self.mu(self.orbit([0], b, n), self.orbit([1], b, n))
            return ild, None, "algebraic regime"
        raise InverseDataRequired("transcendental coordinates need sigma_inverse data")

    def invariants(self, block=None):
        prof = self.distant_profile(block)
        try:
            ild, idd, method = self.inverse_limit_degree(block)
            prof.ild, prof.idd = ild, idd
            prof.flags["ild_method"] = method
        except InverseDataRequired:
            prof.flags["ild_method"] = "unavailable"
        return prof

    # -- tidy generator -----------------------------------------------------------

    def tidy_generator(self, block=None, profile=None):
        block = self.block_indices(block)
        prof = profile or self.distant_profile(block)
        L, n = prof.ell0, prof.normalization
        xs = [self.A.coord(k, j) for k in range(L, L + n + 1) for j in block]
        S = self.span(self.orbit([0, 2 * L], block, n))
        polys, flat = minimal_polynomial_tuple(xs, S, self.opt.cap)
        nxt = tuple(self.A.shift(c) for c in flat)
        Sc = span_closure(list(flat), cap=self.opt.cap, tower=self.A.tower)
        N = span_closure(xs, start=Sc, cap=self.opt.cap).dimension // Sc.dimension
        return TidyGenerator(L, tuple(flat), nxt, polys, N, not self.P.is_algebraic_regime, block, n, self)

    def c_orbit(self, tidy, count):
        """sigma^(ell0 + j)(c) for j = 0 .. count."""
        out = [list(tidy.shifted), list(tidy.next)]
        while len(out) <= count:
            out.append([self.A.shift(c) for c in out[-1]])
        return out[: count + 1]

    def combine_tidy(self, tidies):
        """Concatenation of tidy tuples, brought to a common shift."""
        L = max(t.ell0 for t in tidies)
        shifted = []
        for t in tidies:
            shifted.extend(self.A.shift_power(c, L - t.ell0) for c in t.shifted)
        nxt = tuple(self.A.shift(c) for c in shifted)
        block = tuple(j for t in tidies for j in t.block)
        polys = [p for t in tidies for p in t.polys]
        return TidyGenerator(L, tuple(shifted), nxt, polys, 0, any(t.relative for t in tidies), block, engine=self)

    def verify_tidy(self, tidy, lmax=4, dd=None, degrees=True):
        rep = VerificationReport()
        rel = tidy.relative
        orbit = self.c_orbit(tidy, 2 * lmax)
        cap = self.opt.cap

        def field(*js):
            return span_closure([c for j in js for c in orbit[j]], cap=cap, tower=self.A.tower)

        for ell in range(1, lmax + 1):
            S = field(0, ell)
            rep.assert_true("tidy_membership", all(S.contains(c) for c in orbit[1]), "tidy property", ell=ell, relative=rel)
            S2 = field(0, 2 * ell)
            rep.assert_true(
                "tidy_two_sided", all(S2.contains(c) for c in orbit[ell]), "tidy property", ell=ell, relative=rel
            )
        if not degrees:
            return rep, []
        if dd is None:
            dd = self.distant_profile(tidy.block).dd
        steps = []
        prev = field(0).dimension
        for k in range(lmax):
            cur = field(*range(k + 2)).dimension
            steps.append(cur // prev)
            prev = cur
        tail = steps[-min(self.opt.window, len(steps)):]
        rep.check("tidy_limit_degree", all(s == dd for s in tail), True, "dd equals ld of c", steps=steps, relative=rel)
        return rep, steps


def relative_profile(P_joint, block, window=None, options=None, engine=None):
    """Profile of one block over the other block's orbit, truncated at growing depth.

    The truncation depth N runs from 0 upwards; the result is the first profile
    whose (ld, m, ell0, C, dd) repeats unchanged for ``window`` further depths.
    Depths where the window checks cannot certify yet count as no value.
    """
    e = engine or DifferenceEngine(P_joint, options)
    W = e.opt.window if window is None else window
    inner = e.block_indices(block)
    other = tuple(j for j in e.all_coords if j not in inner)
    if not other:
        raise ValueError("relative_profile needs a complementary block")
    seen = {}
    profiles = {}
    for N in range(e.opt.max_depth + 1):
        extra = e.orbit(range(N + 1), other)
        try:
            prof = e.distant_profile(inner, extra)
            seen[N] = (prof.ld, prof.m, prof.ell0, prof.C, prof.dd)
            profiles[N] = prof
        except (NonStabilized, CrossCheckFailed):
            seen[N] = None
        if N >= W and seen[N] is not None and all(seen.get(N - i) == seen[N] for i in range(W + 1)):
            start = N - W
            prof = profiles[start]
            flags = dict(prof.flags)
            flags.update(relative=True, truncation=start)
            return DegreeProfile(
                prof.ld, prof.steps, prof.lemma_sequence, prof.m, prof.ell0, prof.C, prof.dd,
                prof.distant_sequence, prof.normalization, flags, block=inner,
            )
    raise NonStabilized(f"relative invariants {list(seen.values())} did not settle by depth {e.opt.max_depth}")


# -- one-shot entry points ---------------------------------------------------------


def limit_degree(P, options=None, block=None):
    return DifferenceEngine(P, options).limit_degree(block)


def inverse_limit_degree(P, options=None, block=None):
    return DifferenceEngine(P, options).inverse_limit_degree(block)


def distant_profile(P, options=None, block=None):
    return DifferenceEngine(P, options).distant_profile(block)


def tidy_generator(P, options=None, block=None):
    e = DifferenceEngine(P, options)
    return e.tidy_generator(block)


def verify_tidy(P, tidy, lmax=4, options=None):
    """Report only; see DifferenceEngine.verify_tidy for the step degrees too."""
    e = tidy.engine if tidy.engine is not None and tidy.engine.P is P else DifferenceEngine(P, options)
    return e.verify_tidy(tidy, lmax)[0]
