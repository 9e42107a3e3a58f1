"""Finite presentations of difference field extensions."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InconsistentPresentation
from ..expr import as_expr, render, symbols

TRANSCENDENTAL = "transcendental"
ALGEBRAIC = "algebraic"
RESERVED = "X"


def level_name(name, k):
    """Name of the copy of an extension generator that lives at orbit level k >= 1."""
    return name if k == 1 else f"{name}@{k}"


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    kind: str = TRANSCENDENTAL
    minpoly: object = None  # expression in X

    def __post_init__(self):
        if self.kind not in (TRANSCENDENTAL, ALGEBRAIC):
            raise InconsistentPresentation(f"generator {self.name!r}: unknown kind {self.kind!r}")
        if (self.kind == ALGEBRAIC) != (self.minpoly is not None):
            raise InconsistentPresentation(f"generator {self.name!r}: algebraic generators need a minpoly")
        if self.minpoly is not None:
            object.__setattr__(self, "minpoly", as_expr(self.minpoly))


@dataclass(frozen=True)
class InverseData:
    """sigma^-1(a) presented over K(a) through one-step extension generators."""

    images: dict
    ext: tuple = ()
    base: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "images", {k: as_expr(v) for k, v in self.images.items()})
        object.__setattr__(self, "ext", tuple((n, as_expr(e)) for n, e in self.ext))
        object.__setattr__(self, "base", {k: as_expr(v) for k, v in self.base.items()})


@dataclass(frozen=True)
class DifferencePresentation:
    """Base field K0(y) with sigma on y, the tuple a, and sigma(a) in a one-step tower.

    ``ext`` lists (name, minpoly in X) of the extension generators adjoined to
    K(a); ``sigma`` maps every coordinate of a to an expression in base
    variables, coordinates and extension generators.  ``refinements`` maps
    (level, extension name) to a replacement minimal polynomial at that level.
    """

    gens: tuple
    sigma: dict
    ext: tuple = ()
    characteristic: int = 0
    base_vars: tuple = ()
    base_sigma: dict = field(default_factory=dict)
    refinements: dict = field(default_factory=dict)
    stabilization_depth: int = 0
    inverse: InverseData | None = None

    def __post_init__(self):
        gens = tuple(g if isinstance(g, GeneratorSpec) else GeneratorSpec(*g) for g in self.gens)
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "base_vars", tuple(self.base_vars))
        object.__setattr__(self, "ext", tuple((n, as_expr(e)) for n, e in self.ext))
        object.__setattr__(self, "sigma", {k: as_expr(v) for k, v in self.sigma.items()})
        object.__setattr__(self, "base_sigma", {k: as_expr(v) for k, v in self.base_sigma.items()})
        object.__setattr__(
            self, "refinements", {(int(k), n): as_expr(e) for (k, n), e in self.refinements.items()}
        )
        if isinstance(self.inverse, dict):
            object.__setattr__(self, "inverse", InverseData(**self.inverse))
        self._check_names()

    # -- structure --------------------------------------------------------------

    @property
    def names(self):
        return tuple(g.name for g in self.gens)

    @property
    def transcendental(self):
        return tuple(g.name for g in self.gens if g.kind == TRANSCENDENTAL)

    @property
    def algebraic(self):
        return tuple(g for g in self.gens if g.kind == ALGEBRAIC)

    @property
    def ext_names(self):
        return tuple(n for n, _ in self.ext)

    @property
    def is_algebraic_regime(self):
        """Every coordinate is algebraic over the base."""
        return not self.transcendental

    def _check_names(self):
        seen = set()
        for n in self.base_vars + self.names + self.ext_names:
            if not n or "@" in n or n == RESERVED:
                raise InconsistentPresentation(f"invalid symbol name {n!r}")
            if n in seen:
                raise InconsistentPresentation(f"symbol {n!r} declared twice")
            seen.add(n)
        if set(self.sigma) != set(self.names):
            missing = sorted(set(self.names) - set(self.sigma))
            extra = sorted(set(self.sigma) - set(self.names))
            raise InconsistentPresentation(f"sigma images: missing {missing}, unknown {extra}")
        if set(self.base_sigma) - set(self.base_vars):
            raise InconsistentPresentation("sigma given for an undeclared base variable")
        base = set(self.base_vars)
        for v, e in self.base_sigma.items():
            self._scope(e, base, f"sigma({v})")
        allowed = set(base)
        for g in self.gens:
            if g.minpoly is not None:
                self._scope(g.minpoly, allowed | {RESERVED}, f"minpoly of {g.name}")
            allowed.add(g.name)
        # transcendental generators may appear anywhere
        allowed |= set(self.transcendental)
        for n, e in self.ext:
            self._scope(e, allowed | {RESERVED}, f"minpoly of {n}")
            allowed.add(n)
        for g, e in self.sigma.items():
            self._scope(e, allowed, f"sigma({g})")
        for (k, n), e in self.refinements.items():
            if k < 2 or n not in self.ext_names:
                raise InconsistentPresentation(f"refinement {k}.{n}: needs level >= 2 and an extension generator")
        if self.inverse is not None:
            inv = self.inverse
            if set(inv.images) != set(self.names):
                raise InconsistentPresentation("inverse images must cover every generator")
            for n, _ in inv.ext:
                if n in seen or "@" in n or n == RESERVED:
                    raise InconsistentPresentation(f"invalid inverse extension name {n!r}")

    @staticmethod
    def _scope(e, allowed, where):
        bad = symbols(e) - allowed
        if bad:
            raise InconsistentPresentation(f"{where}: undeclared symbols {sorted(bad)}")

    def describe(self):
        """Plain dictionary view with rendered expressions."""
        return {
            "characteristic": self.characteristic,
            "base_vars": list(self.base_vars),
            "base_sigma": {k: render(v) for k, v in sorted(self.base_sigma.items())},
            "gens": [
                {"name": g.name, "kind": g.kind, "minpoly": render(g.minpoly) if g.minpoly else None}
                for g in self.gens
            ],
            "ext": [{"name": n, "minpoly": render(e)} for n, e in self.ext],
            "sigma": {k: render(v) for k, v in self.sigma.items()},
        }


def joint(P1, P2):
    """Presentation of the pair (a, b) from presentations of a and b over the same base."""
    if (P1.characteristic, P1.base_vars) != (P2.characteristic, P2.base_vars):
        raise InconsistentPresentation("joint presentations need the same base field")
    if {k: render(v) for k, v in P1.base_sigma.items()} != {k: render(v) for k, v in P2.base_sigma.items()}:
        raise InconsistentPresentation("joint presentations need the same base automorphism")
    clash = set(P1.names + P1.ext_names) & set(P2.names + P2.ext_names)
    if clash:
        raise InconsistentPresentation(f"joint presentations share names {sorted(clash)}")
    inverse = None
    if P1.inverse is not None and P2.inverse is not None:
        base = dict(P1.inverse.base)
        base.update(P2.inverse.base)
        inverse = InverseData(
            images={**P1.inverse.images, **P2.inverse.images},
            ext=P1.inverse.ext + P2.inverse.ext,
            base=base,
        )
    return DifferencePresentation(
        gens=P1.gens + P2.gens,
        sigma={**P1.sigma, **P2.sigma},
        ext=P1.ext + P2.ext,
        characteristic=P1.characteristic,
        base_vars=P1.base_vars,
        base_sigma=dict(P1.base_sigma),
        refinements={**P1.refinements, **P2.refinements},
        stabilization_depth=max(P1.stabilization_depth, P2.stabilization_depth),
        inverse=inverse,
    )
