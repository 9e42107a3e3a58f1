"""Triangular towers, subfield spans and minimal polynomials."""

from .span import MinimalPolynomial, SubfieldSpan, TuplePolynomial, degree_over, member, minimal_polynomial_tuple, span_closure
from .tower import SplitCertificate, TowerElement, TriangularTower

__all__ = [
    "MinimalPolynomial",
    "SubfieldSpan",
    "TuplePolynomial",
    "degree_over",
    "member",
    "minimal_polynomial_tuple",
    "span_closure",
    "SplitCertificate",
    "TowerElement",
    "TriangularTower",
]
