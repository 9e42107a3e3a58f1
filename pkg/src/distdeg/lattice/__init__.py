"""p-local lattices and scales of linear automorphisms."""

from .lattice import Lattice, index, index_exponent, intersect, lattice_sum, relative_index, vp
from .scale import (
    LinearAuto,
    ScaleReport,
    SingularMatrix,
    modular_function,
    newton_slopes,
    root_valuations,
    scale_limit,
    scale_newton,
    scale_report,
    tidy_certify,
    tidy_search,
    w0_max,
)

__all__ = [
    "Lattice",
    "LinearAuto",
    "ScaleReport",
    "SingularMatrix",
    "index",
    "index_exponent",
    "intersect",
    "lattice_sum",
    "modular_function",
    "newton_slopes",
    "relative_index",
    "root_valuations",
    "scale_limit",
    "scale_newton",
    "scale_report",
    "tidy_certify",
    "tidy_search",
    "vp",
    "w0_max",
]
