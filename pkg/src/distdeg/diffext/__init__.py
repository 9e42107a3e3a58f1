"""Presented difference field extensions and their degree invariants."""

from .ambient import AmbientTower, build_ambient
from .engine import (
    DegreeProfile,
    DifferenceEngine,
    LimitDegree,
    Options,
    TidyGenerator,
    distant_profile,
    inverse_limit_degree,
    limit_degree,
    relative_profile,
    tidy_generator,
    verify_tidy,
)
from .power import power_reinterpret
from .presentation import DifferencePresentation, GeneratorSpec, InverseData, joint, level_name
from .report import VerificationReport
from .validate import monte_carlo, validate

__all__ = [
    "AmbientTower",
    "DegreeProfile",
    "DifferenceEngine",
    "DifferencePresentation",
    "GeneratorSpec",
    "InverseData",
    "LimitDegree",
    "Options",
    "TidyGenerator",
    "VerificationReport",
    "build_ambient",
    "distant_profile",
    "inverse_limit_degree",
    "joint",
    "level_name",
    "limit_degree",
    "monte_carlo",
    "power_reinterpret",
    "relative_profile",
    "tidy_generator",
    "validate",
    "verify_tidy",
]
