"""Ambient towers K(a, sigma(a), ..., sigma^N(a)) with the shift embedding.

Stages of the tower, in order: the algebraic coordinates of a (orbit level
0), then one copy of the extension generators per orbit level k >= 1.  The
shift maps every stage generator of level k to its counterpart at level
k + 1, base variables through the base automorphism, and the coordinates of
a to their sigma-images.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import InconsistentPresentation, MissingRefinement, NotInversiveBase, SplitDetected
from ..exact import GF, FractionField, base_field
from ..exact.ratfunc import eval_poly
from ..expr import evaluate
from ..tower import SplitCertificate, TowerElement, TriangularTower, span_closure
from ..tower.span import DEFAULT_CAP
from .presentation import RESERVED, level_name


class TowerDomain:
    """Adapter letting exact-kernel evaluators compute inside a tower."""

    def __init__(self, tower):
        self.tower = tower
        self.zero = tower.zero
        self.one = tower.one

    def convert(self, c):
        return self.tower.const(c)

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def div(self, x, y):
        return x / y


class XPoly:
    """Polynomial in the reserved symbol X with tower coefficients (evaluation helper)."""

    def __init__(self, coeffs, tower):
        self.c = list(coeffs)
        self.tower = tower
        while self.c and self.c[-1].is_zero():
            self.c.pop()

    @classmethod
    def lift(cls, v, tower):
        if isinstance(v, XPoly):
            return v
        return cls([tower.coerce(v)], tower)

    def __add__(self, o):
        o = XPoly.lift(o, self.tower)
        n = max(len(self.c), len(o.c))
        z = self.tower.zero
        return XPoly([(self.c[i] if i < len(self.c) else z) + (o.c[i] if i < len(o.c) else z) for i in range(n)], self.tower)

    __radd__ = __add__

    def __neg__(self):
        return XPoly([-x for x in self.c], self.tower)

    def __sub__(self, o):
        return self + (-XPoly.lift(o, self.tower))

    def __rsub__(self, o):
        return XPoly.lift(o, self.tower) - self

    def __mul__(self, o):
        o = XPoly.lift(o, self.tower)
        if not self.c or not o.c:
            return XPoly([], self.tower)
        out = [self.tower.zero] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(o.c):
                out[i + j] = out[i + j] + a * b
        return XPoly(out, self.tower)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise InconsistentPresentation("negative power of X in a polynomial")
        r = XPoly([self.tower.one], self.tower)
        for _ in range(e):
            r = r * self
        return r

    def __truediv__(self, o):
        if isinstance(o, XPoly):
            if len(o.c) > 1:
                raise InconsistentPresentation("division by a polynomial in X")
            o = o.c[0] if o.c else self.tower.zero
        inv = self.tower.coerce(o).inverse()
        return XPoly([x * inv for x in self.c], self.tower)

    def __rtruediv__(self, o):
        if len(self.c) > 1:
            raise InconsistentPresentation("division by a polynomial in X")
        return XPoly.lift(o, self.tower) / self


def eval_in_tower(expr, env, tower):
    return evaluate(expr, env, tower.const)


def minpoly_coeffs(expr, env, tower, what):
    """Coefficients (low first, monic) of a minimal polynomial expression."""
    env = {k: XPoly.lift(v, tower) for k, v in env.items()}
    env[RESERVED] = XPoly([tower.zero, tower.one], tower)
    val = evaluate(expr, env, lambda n: XPoly([tower.const(n)], tower))
    val = XPoly.lift(val, tower)
    if len(val.c) < 2:
        raise InconsistentPresentation(f"{what}: polynomial has degree < 1 in X")
    if val.c[-1] != tower.one:
        raise InconsistentPresentation(f"{what}: polynomial is not monic in X")
    return val.c


# -- exact split detection through sympy (coefficients in the base) -------------


def _to_sympy(x, F, syms):
    import sympy

    if isinstance(F, FractionField):
        def poly(d):
            return sympy.Add(*[
                sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s**e for s, e in zip(syms, exps)])
                for exps, c in d.items()
            ])
        return poly(x.numer.to_dict()) / poly(x.denom.to_dict())
    return sympy.Rational(x.numerator, x.denominator)


def _from_sympy(expr, F, syms):
    import sympy

    num, den = sympy.fraction(sympy.together(expr))
    if not isinstance(F, FractionField):
        return Fraction(int(num), 1) / Fraction(int(den), 1)

    def to_rep(e):
        d = sympy.Poly(e, *syms).as_dict()
        return F.ring.from_dict({k: Fraction(int(v.p), int(v.q)) for k, v in d.items()})

    return F.from_fraction(to_rep(num).rep, to_rep(den).rep)


def exact_split(coeffs, tower, step_index):
    """SplitCertificate when a polynomial with base coefficients factors, else None.

    Only used in characteristic 0 (factorization over Q(y)); positive
    characteristic relies on dynamic evaluation alone.
    """
    F = tower.F
    if F.characteristic != 0 or any(c.level != 0 for c in coeffs):
        return None
    import sympy

    names = list(F.vars) if isinstance(F, FractionField) else []
    syms = sympy.symbols(names) if names else []
    if names and not isinstance(syms, (list, tuple)):
        syms = [syms]
    X = sympy.Symbol("_X")
    expr = sum(_to_sympy(c.base_value(), F, syms) * X**i for i, c in enumerate(coeffs))
    num, _ = sympy.fraction(sympy.together(expr))
    _, factors = sympy.factor_list(sympy.expand(num), X, *syms)
    d = len(coeffs) - 1
    for f, _ in factors:
        dx = sympy.degree(f, X)
        if 0 < dx < d:
            p = sympy.Poly(f, X)
            lc = p.LC()
            fc = [_from_sympy(p.coeff_monomial(X**i) / lc, F, syms) for i in range(dx + 1)]
            step = tower.steps[step_index]
            return SplitCertificate(step_index + 1, step.name, tuple(tower.const(c) for c in fc))
    return None


# -- base automorphism --------------------------------------------------------------


def base_images(P, F):
    """sigma on the base variables as RatFunc values of F (identity if omitted)."""
    if not P.base_vars:
        return {}
    env = {v: F.gen(v) for v in P.base_vars}
    out = {}
    for v in P.base_vars:
        e = P.base_sigma.get(v)
        out[v] = env[v] if e is None else evaluate(e, env, F.convert)
    return out


def _compose(images_outer, images_inner, F, base_vars):
    """images_outer applied after images_inner, as maps on base variables."""
    order = [images_outer[v] for v in base_vars] + [F.gen(v) for v in F.vars[len(base_vars):]]
    return {v: F.evaluate(images_inner[v], order, F) for v in base_vars}


def base_inverse(P, F):
    """Images of sigma^-1 on base variables, or raise NotInversiveBase.

    Accepted without user data: affine maps with nonsingular linear part and
    one-variable Mobius maps.  Otherwise the inverse must be supplied.
    """
    from ..exact.linalg import solve_linear

    if not P.base_vars:
        return {}
    fwd = base_images(P, F)
    ident = {v: F.gen(v) for v in P.base_vars}
    if P.inverse is not None and P.inverse.base:
        env = dict(ident)
        inv = {v: (evaluate(P.inverse.base[v], env, F.convert) if v in P.inverse.base else env[v]) for v in P.base_vars}
        if _compose(fwd, inv, F, P.base_vars) != ident or _compose(inv, fwd, F, P.base_vars) != ident:
            raise NotInversiveBase("supplied inverse base images do not invert sigma")
        return inv
    n = len(P.base_vars)
    nb = [F.vars.index(v) for v in P.base_vars]
    # affine case
    if all(fwd[v].is_polynomial() and fwd[v].numer.degree() <= 1 for v in P.base_vars):
        M, c = [], []
        for v in P.base_vars:
            d = fwd[v].numer.to_dict()
            if any(e[j] for e in d for j in range(len(F.vars)) if j not in nb):
                raise NotInversiveBase(f"sigma({v}) involves non-base symbols")
            row = []
            for j in nb:
                key = tuple(int(i == j) for i in range(len(F.vars)))
                row.append(F.convert(d.get(key, 0)))
            M.append(row)
            c.append(F.convert(d.get((0,) * len(F.vars), 0)))
        # sigma(y) = M y + c, so y = M^-1 (z - c)
        cols = []
        for k in range(n + 1):
            rhs = [(F.one if i == k else F.zero) for i in range(n)] if k < n else c
            sol = solve_linear(M, rhs, F)
            if sol.status != "unique":
                raise NotInversiveBase("base substitution has a singular linear part")
            cols.append(sol.particular)
        inv = {}
        for i, v in enumerate(P.base_vars):
            val = F.neg(cols[n][i])
            for k in range(n):
                val = F.add(val, F.mul(cols[k][i], ident[P.base_vars[k]]))
            inv[v] = val
        return inv
    if n == 1:
        v = P.base_vars[0]
        img = fwd[v]
        num, den = img.numer, img.denom
        if num.degree(v) <= 1 and den.degree(v) <= 1 and len(F.vars) == 1:
            t = F.gen(v)
            dn = num.to_dict()
            dd = den.to_dict()
            a = F.convert(dn.get((1,), 0))
            b = F.convert(dn.get((0,), 0))
            c = F.convert(dd.get((1,), 0))
            d = F.convert(dd.get((0,), 0))
            if not F.is_zero(F.sub(F.mul(a, d), F.mul(b, c))):
                return {v: (d * t - b) / (a - c * t)}
    raise NotInversiveBase("cannot certify that the base substitution is invertible; supply sigma_inverse base images")


# -- the ambient tower ----------------------------------------------------------------


class AmbientTower:
    """Lazily deepened tower realizing the orbit of a up to a requested level."""

    def __init__(self, P, cap=DEFAULT_CAP):
        self.P = P
        self.cap = cap
        self.F = base_field(P.characteristic, P.base_vars + P.transcendental)
        F = self.F
        self.base_map = base_images(P, F)
        T = TriangularTower(F)
        env = {v: T.const(F.gen(v)) for v in F.vars} if isinstance(F, FractionField) else {}
        self.level_steps = []
        names0 = []
        for g in P.algebraic:
            coeffs = minpoly_coeffs(g.minpoly, env, T, f"minpoly of {g.name}")
            T = T.extend(g.name, coeffs)
            env[g.name] = T.gen(g.name)
            names0.append(g.name)
        self.level_steps.append(names0)
        self.towers = [T]
        names1 = []
        for n, e in P.ext:
            coeffs = minpoly_coeffs(e, env, T, f"minpoly of {n}")
            T = T.extend(n, coeffs)
            env[n] = T.gen(n)
            names1.append(n)
        self.level_steps.append(names1)
        self.towers.append(T)
        self.env1 = env
        try:
            self.sigma_images = {g: T.coerce(eval_in_tower(P.sigma[g], env, T)) for g in P.names}
        except SplitDetected as exc:
            raise InconsistentPresentation(f"sigma images: {exc.certificate}", exc.certificate) from None
        self.coords = [[env[g] for g in P.names], [self.sigma_images[g] for g in P.names]]
        # images of stage generators under the shift, by stage index
        self._gen_image = {}
        for i, name in enumerate(names0):
            self._gen_image[i] = self.sigma_images[name]
        self._leaf_images = None
        self._cache = {}
        self._spans = {}

    # -- structure -------------------------------------------------------------------

    @property
    def depth(self):
        return len(self.towers) - 1

    @property
    def tower(self):
        return self.towers[-1]

    def step_names(self, k):
        return list(self.level_steps[k])

    def step_degree(self, k):
        """Product of the declared step degrees at orbit level k."""
        self.ensure(k)
        T = self.towers[k]
        total = 1
        for n in self.level_steps[k]:
            total *= T.steps[T._index[n]].degree
        return total

    def _leaf_vector(self):
        if self._leaf_images is None:
            F, T1 = self.F, self.towers[1]
            imgs = []
            for v in F.vars if isinstance(F, FractionField) else ():
                if v in self.base_map:
                    imgs.append(T1.const(self.base_map[v]))
                else:
                    imgs.append(self.sigma_images[v])
            self._leaf_images = imgs
        return self._leaf_images

    # -- the shift -------------------------------------------------------------------

    def shift(self, x):
        """sigma applied to an element of T_k, landing in T_{k+1}."""
        key = (x.level, x.raw)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        T = self.tower
        if x.level == 0:
            F = self.F
            if isinstance(F, FractionField):
                dom = TowerDomain(T)
                imgs = self._leaf_vector()
                num = eval_poly(x.raw.num, F.n, F.K, imgs, dom)
                den = eval_poly(x.raw.den, F.n, F.K, imgs, dom)
                out = num if den == T.one else num / den
            else:
                out = T.const(x.raw)
        else:
            stage = x.level - 1
            if stage not in self._gen_image:
                self._deepen_for_stage(stage)
                T = self.tower
            img = self._gen_image[stage]
            out = T.zero
            for c in reversed(x.raw):
                out = out * img + self.shift(TowerElement(T, stage, c))
        self._cache[key] = out
        return out

    def _deepen_for_stage(self, stage):
        while stage not in self._gen_image:
            self.ensure(self.depth + 1)

    def ensure(self, N):
        while self.depth < N:
            self._add_level()

    def _add_level(self):
        P = self.P
        k = self.depth  # current top level, build k + 1
        T = self.tower
        Tk = self.towers[k]
        names = []
        for name in P.ext_names:
            src = level_name(name, k)
            idx = Tk._index[src]
            step = Tk.steps[idx]
            try:
                shifted = [self.shift(TowerElement(T, idx, c)) for c in step.tail] + [T.one]
            except SplitDetected as exc:
                raise MissingRefinement(
                    f"level {k + 1}: zero divisor met while shifting {src}: {exc.certificate}", exc.certificate
                ) from None
            new = level_name(name, k + 1)
            ref = P.refinements.get((k + 1, name))
            stage_of_new = T.depth
            if ref is not None:
                env = {n: T.gen(n) for n in T.names}
                if isinstance(self.F, FractionField):
                    env.update({v: T.const(self.F.gen(v)) for v in self.F.vars})
                try:
                    coeffs = minpoly_coeffs(ref, env, T, f"refinement {k + 1}.{name}")
                except KeyError as exc:
                    raise InconsistentPresentation(f"refinement {k + 1}.{name}: unknown symbol {exc}") from None
                if T.poly_rem(shifted, coeffs):
                    raise InconsistentPresentation(
                        f"refinement {k + 1}.{name} does not divide the shifted polynomial"
                    )
            else:
                coeffs = shifted
            T = T.extend(new, coeffs)
            cert = exact_split(coeffs, T, stage_of_new)
            if cert is not None:
                raise MissingRefinement(f"level {k + 1}: {cert}", cert)
            self._gen_image[idx] = T.gen(new)
            names.append(new)
        self.level_steps.append(names)
        self.towers.append(T)

    # -- orbit coordinates ---------------------------------------------------------------

    def coord(self, k, j):
        """sigma^k of the j-th coordinate of a."""
        while len(self.coords) <= k:
            level = len(self.coords)
            self.ensure(level)
            try:
                self.coords.append([self.shift(x) for x in self.coords[level - 1]])
            except SplitDetected as exc:
                raise MissingRefinement(f"level {level}: {exc.certificate}", exc.certificate) from None
        return self.coords[k][j]

    def level(self, k, block=None):
        block = range(len(self.P.names)) if block is None else block
        return [self.coord(k, j) for j in block]

    def shift_power(self, x, n):
        for _ in range(n):
            x = self.shift(x)
        return x

    # -- spans and relative degrees -----------------------------------------------------

    def span(self, elements, key=None):
        if key is not None and key in self._spans:
            return self._spans[key]
        S = span_closure(elements, cap=self.cap, tower=self.tower)
        if key is not None:
            self._spans[key] = S
        return S

    def extend_span(self, S, elements, key=None):
        if key is not None and key in self._spans:
            return self._spans[key]
        out = span_closure(elements, start=S, cap=self.cap)
        if key is not None:
            self._spans[key] = out
        return out


def specialize_point(F, rng, p):
    """Random point of F's variables over GF(p) and the induced leaf map."""
    K = GF(p)
    if not isinstance(F, FractionField):
        return K, K.convert
    point = [rng.randrange(p) for _ in F.vars]

    def leaf(x):
        return F.evaluate(x, point, K)

    return K, leaf


def build_ambient(P, N, cap=DEFAULT_CAP):
    """Ambient tower realizing a, sigma(a), ..., sigma^N(a)."""
    A = AmbientTower(P, cap)
    A.ensure(N)
    if P.names:
        A.coord(N, 0)
    return A
