"""Exact and Monte-Carlo consistency checks of a presentation."""

from __future__ import annotations

import random

import gmpy2

from ..errors import InconsistentPresentation, SplitDetected
from ..exact.factor import is_irreducible_dup
from ..expr import evaluate
from ..tower import TowerElement, TriangularTower, degree_over, span_closure
from .ambient import AmbientTower, base_inverse, exact_split, specialize_point
from .report import TrialRecord, VerificationReport

DEFAULT_TRIALS = 5


def random_prime(rng, bits=30):
    return int(gmpy2.next_prime(rng.randrange(1 << (bits - 1), 1 << bits)))


def _relation_check(A, report):
    """Each algebraic coordinate's polynomial, pushed through sigma, vanishes in T1."""
    P, T1 = A.P, A.towers[1]
    env = {v: T1.const(img) for v, img in A.base_map.items()}
    env.update({g: A.sigma_images[g] for g in P.transcendental})
    for g in P.algebraic:
        env["X"] = A.sigma_images[g.name]
        try:
            value = evaluate(g.minpoly, env, T1.const)
        except SplitDetected as exc:
            raise InconsistentPresentation(f"relation for {g.name}: {exc.certificate}", exc.certificate) from None
        ok = T1.coerce(value).is_zero()
        report.assert_true("relation", ok, "presentation invariant", generator=g.name)
        if not ok:
            raise InconsistentPresentation(f"sigma does not respect the minimal polynomial of {g.name}")
        env[g.name] = A.sigma_images[g.name]


def _generation_check(A, report):
    """T1 must be generated by a and sigma(a): the extension generators are not spurious."""
    T1 = A.towers[1]
    S = span_closure(A.level(0) + A.level(1), cap=A.cap, tower=T1)
    ok = S.dimension == T1.dimension
    report.check("generation", S.dimension, T1.dimension, "presentation invariant")
    if not ok:
        raise InconsistentPresentation(
            f"K(a, sigma(a)) has dimension {S.dimension}, the one-step tower has {T1.dimension}"
        )


def monte_carlo(tower, seed=0, trials=DEFAULT_TRIALS, stages=None):
    """Certify that each prefix of the tower is a field by specializing to GF(p).

    A prefix certifies when a random element's minimal polynomial over GF(p)
    is irreducible of full degree.  Anything else is inconclusive, never a
    failure: irreducible polynomials may split modulo every prime.
    """
    rng = random.Random(seed)
    stages = range(1, tower.depth + 1) if stages is None else stages
    records = []
    for i in stages:
        name = tower.steps[i - 1].name
        D = 1
        for s in tower.steps[:i]:
            D *= s.degree
        result = "inconclusive"
        prime = 0
        for _ in range(trials):
            prime = random_prime(rng)
            K, leaf = specialize_point(tower.F, rng, prime)
            try:
                spec, _ = TriangularTower(tower.F, tower.steps[:i]).specialize(K, leaf)
            except ZeroDivisionError:
                continue
            x = spec.const(rng.randrange(prime))
            for j, g in enumerate(spec.gens):
                x = x + g * (1 if j == i - 1 else rng.randrange(prime))
            k, mp = degree_over(x, span_closure([], tower=spec))
            if k == D and is_irreducible_dup(tuple(c.raw for c in mp.coeffs), K, seed=rng.randrange(1 << 30)):
                result = "certified"
                break
        records.append(TrialRecord(i, name, prime, seed, result))
    return records


def validate(P, seed=0, trials=DEFAULT_TRIALS, cap=None):
    """Check the presentation invariants; raises on exact inconsistencies."""
    report = VerificationReport()
    A = AmbientTower(P) if cap is None else AmbientTower(P, cap)
    base_inverse(P, A.F)
    report.assert_true("inversive_base", True, "presentation invariant")
    T1 = A.towers[1]
    for i in range(T1.depth):
        step = T1.steps[i]
        coeffs = [TowerElement(T1, i, c) for c in step.tail] + [T1.one]
        cert = exact_split(coeffs, T1, i)
        if cert is not None:
            raise InconsistentPresentation(f"declared minimal polynomial splits: {cert}", cert)
        report.assert_true("no_exact_split", True, "presentation invariant", step=step.name)
    _relation_check(A, report)
    _generation_check(A, report)
    report.trials.extend(monte_carlo(T1, seed, trials))
    return report, A
