"""Exact arithmetic kernel."""

from .domains import GF, QQ, domain_for
from .factor import factor_fp
from .intmat import determinant, elementary_divisors, hermite_normal_form, smith_normal_form
from .linalg import Solution, solve_linear
from .mpoly import MPoly, PolyRing, mpoly_gcd
from .ratfunc import FractionField, RatFunc, base_field

__all__ = [
    "GF",
    "QQ",
    "domain_for",
    "factor_fp",
    "determinant",
    "elementary_divisors",
    "hermite_normal_form",
    "smith_normal_form",
    "Solution",
    "solve_linear",
    "MPoly",
    "PolyRing",
    "mpoly_gcd",
    "FractionField",
    "RatFunc",
    "base_field",
]
