"""Reading a presentation as one for a power of sigma."""

from __future__ import annotations

from ..errors import InconsistentPresentation
from ..exact import FractionField
from ..expr import Num, Pow, Sym, _monomial, _sum, product, ratfunc_expr, rename
from .ambient import AmbientTower, _compose, base_images
from .presentation import ALGEBRAIC, DifferencePresentation, GeneratorSpec, level_name


def element_expr(x, stage_names, var_names):
    """Expression of a tower element in its stage generators and base variables."""
    T = x.tower
    terms = []
    coords = T.flatten(x, x.level)
    for e in sorted(coords, key=lambda e: (sum(e), e[::-1]), reverse=True):
        c = coords[e]
        factors = [Sym(n) if k == 1 else Pow(Sym(n), k) for n, k in zip(stage_names, e) if k]
        if isinstance(T.F, FractionField):
            ce = ratfunc_expr(c, var_names)
            if ce == Num(1):
                terms.append(product(factors))
            else:
                terms.append(product([ce] + factors))
        else:
            terms.append(_monomial(c, stage_names[: len(e)], e))
    return _sum(terms)


def _step_expr(T, idx, stage_names, var_names):
    """Defining polynomial of stage idx as an expression in X."""
    step = T.steps[idx]
    from ..tower import TowerElement

    terms = [Pow(Sym("X"), step.degree)]
    for k in range(step.degree - 1, -1, -1):
        c = TowerElement(T, idx, step.tail[k]) if k < len(step.tail) else None
        if c is None or c.is_zero():
            continue
        ce = element_expr(c, stage_names, var_names)
        terms.append(ce if k == 0 else product([ce, Sym("X") if k == 1 else Pow(Sym("X"), k)]))
    return _sum(terms)


def power_reinterpret(P, n, cap=None):
    """Presentation of the sigma^n-difference field generated by (a, sigma(a), ..., sigma^(n-1)(a)).

    The new coordinates are the transcendental coordinates of a together with
    every algebraic stage of the depth n-1 ambient tower, which generate the
    same field.  Extension generators are the stages at levels n .. 2n-1.
    Inverse data is not carried over.
    """
    if n < 1:
        raise ValueError("power must be at least 1")
    if n == 1:
        return P
    A = AmbientTower(P) if cap is None else AmbientTower(P, cap)
    A.ensure(2 * n - 1)
    for k in range(2 * n):
        A.coord(k, 0)
    T = A.tower
    F = A.F
    var_names = list(F.vars) if isinstance(F, FractionField) else []

    def new_name(old):
        base, _, lvl = old.partition("@")
        L = int(lvl) if lvl else 1
        if base not in P.ext_names:
            return old
        if L < n:
            return f"{base}_{L}"
        return level_name(f"{base}_{n + L % n}", L // n)

    stage_names = [new_name(s) for s in T.names]
    taken = set(P.base_vars) | set(P.names)
    for s in stage_names:
        if "@" not in s and s in taken and s not in P.names:
            raise InconsistentPresentation(f"renamed stage {s!r} clashes with an existing symbol")
    cut0 = A.towers[n - 1].depth
    cut1 = A.towers[2 * n - 1].depth

    gens = [GeneratorSpec(t) for t in P.transcendental]
    for i in range(cut0):
        gens.append(GeneratorSpec(stage_names[i], ALGEBRAIC, _step_expr(T, i, stage_names, var_names)))
    ext = [(stage_names[i], _step_expr(T, i, stage_names, var_names)) for i in range(cut0, cut1)]

    sigma = {}
    for j, t in enumerate(P.names):
        if t in P.transcendental:
            sigma[t] = element_expr(A.coord(n, j), stage_names, var_names)
    for i in range(cut0):
        g = T.gen(T.names[i])
        sigma[stage_names[i]] = element_expr(A.shift_power(g, n), stage_names, var_names)

    base_sigma = {}
    if P.base_vars:
        one = base_images(P, F)
        cur = dict(one)
        for _ in range(n - 1):
            cur = _compose(one, cur, F, P.base_vars)
        base_sigma = {v: ratfunc_expr(cur[v], var_names) for v in P.base_vars}

    refinements = {}
    old_to_new = dict(zip(T.names, stage_names))
    for (L, name), e in P.refinements.items():
        k_new, i = divmod(L, n)
        if k_new < 2:
            continue  # lives inside the new one-step data, already read off the tower
        new_base = f"{name}_{n + i}"
        mapping = dict(old_to_new)
        for s in symbols_of(e):
            if s not in mapping:
                mapping[s] = new_name(s)
        refinements[(k_new, new_base)] = rename(e, mapping)

    return DifferencePresentation(
        gens=tuple(gens),
        sigma=sigma,
        ext=tuple(ext),
        characteristic=P.characteristic,
        base_vars=P.base_vars,
        base_sigma=base_sigma,
        refinements=refinements,
        stabilization_depth=-(-P.stabilization_depth // n),
        inverse=None,
    )


def symbols_of(e):
    from ..expr import symbols

    return symbols(e)
