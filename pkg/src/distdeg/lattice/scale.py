"""Scale of a rational linear automorphism of Q_p^n.

Two independent routes: the growth of the indices [a^k U : U cap a^k U] for a
lattice U, and the Newton polygon of the characteristic polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import InputError, NonStabilized
from ..exact.linalg import solve_linear
from ..exact import QQ
from .lattice import Lattice, index_exponent, intersect, lattice_sum, relative_index, vp

DEFAULT_KMAX = 24


class SingularMatrix(InputError):
    pass


class LinearAuto:
    """Invertible rational matrix acting on column vectors."""

    def __init__(self, matrix, p):
        self.p = int(p)
        self.matrix = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        self.n = len(self.matrix)
        if any(len(r) != self.n for r in self.matrix):
            raise SingularMatrix("matrix must be square")
        if self.det() == 0:
            raise SingularMatrix("matrix is singular")

    def det(self):
        M = [list(r) for r in self.matrix]
        n = self.n
        d = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if M[i][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                d = -d
            d *= M[c][c]
            for i in range(c + 1, n):
                q = M[i][c] / M[c][c]
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[c])]
        return d

    def __matmul__(self, other):
        A, B = self.matrix, other.matrix
        n = self.n
        return LinearAuto([[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)], self.p)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = LinearAuto.identity(self.n, self.p)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, LinearAuto) and (self.p, self.matrix) == (other.p, other.matrix)

    def __hash__(self):
        return hash((self.p, self.matrix))

    def __repr__(self):
        return f"LinearAuto(p={self.p}, matrix={[[str(x) for x in r] for r in self.matrix]})"

    @classmethod
    def identity(cls, n, p):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], p)

    def inverse(self):
        n = self.n
        cols = []
        for j in range(n):
            e = [Fraction(int(i == j)) for i in range(n)]
            cols.append(solve_linear([list(r) for r in self.matrix], e, QQ).particular)
        return LinearAuto([[cols[j][i] for j in range(n)] for i in range(n)], self.p)

    def apply(self, v):
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.matrix)

    def image(self, L):
        """alpha(L)."""
        return Lattice(L.p, L.n, [self.apply(b) for b in L.basis])

    def charpoly(self):
        """Coefficients c_0 .. c_n of det(X - alpha), by Faddeev-LeVerrier."""
        n = self.n
        A = [list(r) for r in self.matrix]
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        M = [[Fraction(0)] * n for _ in range(n)]
        for k in range(1, n + 1):
            # M_k = A M_{k-1} + c_{n-k+1} I
            AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
            for i in range(n):
                AM[i][i] += coeffs[n - k + 1]
            M = AM
            AM2 = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
            coeffs[n - k] = -sum(AM2[i][i] for i in range(n)) / k
        return coeffs


def modular_function(alpha):
    """|det alpha|_p as an exact rational power of p."""
    return Fraction(alpha.p) ** (-vp(alpha.det(), alpha.p))


def newton_slopes(coeffs, p):
    """Segments (slope, length) of the lower convex hull of (i, v_p(c_i))."""
    pts = [(i, vp(c, p)) for i, c in enumerate(coeffs) if c != 0]
    hull = []
    for q in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (q[0] - x1) >= (q[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(q)
    return [(Fraction(y2 - y1, x2 - x1), x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:])]


def root_valuations(alpha):
    """p-adic valuations of the eigenvalues, with multiplicity, ascending."""
    out = []
    for slope, length in newton_slopes(alpha.charpoly(), alpha.p):
        out.extend([-slope] * length)
    return sorted(out)


def scale_newton(alpha):
    # eigenvalues of negative valuation expand; their sizes multiply to the scale
    e = sum(slope * length for slope, length in newton_slopes(alpha.charpoly(), alpha.p) if slope > 0)
    assert e.denominator == 1
    return alpha.p ** int(e)


def index_sequence(alpha, U, k_max=DEFAULT_KMAX):
    """p-exponents of [alpha^k U : U cap alpha^k U] for k = 1 .. k_max."""
    out = []
    L = U
    for _ in range(k_max):
        L = alpha.image(L)
        out.append(index_exponent(L, U))
    return out


def detect_rate(exps, n):
    """Smallest period d <= n with a constant increment over the tail window of 2n terms.

    Returns (d, increment) or None.
    """
    K = len(exps)
    for d in range(1, n + 1):
        tail = range(max(0, K - d - 2 * n), K - d)
        if len(tail) < 2 * n:
            continue
        incs = {exps[k + d] - exps[k] for k in tail}
        if len(incs) == 1:
            return d, incs.pop()
    return None


def scale_limit(alpha, U, k_max=DEFAULT_KMAX):
    """(scale, period, exponent sequence) from the index growth along alpha^k U."""
    if not U.full_rank:
        from ..errors import RankDeficient

        raise RankDeficient("scale needs a full-rank lattice")
    exps = index_sequence(alpha, U, k_max)
    found = detect_rate(exps, alpha.n)
    if found is None:
        raise NonStabilized(f"index exponents {exps} show no period <= {alpha.n} by k = {k_max}")
    d, inc = found
    if inc % d:
        raise NonStabilized(f"growth p^{inc} per {d} steps is not an integral power")
    return alpha.p ** (inc // d), d, exps


def tidy_certify(alpha, U):
    """U is tidy iff its displacement index attains the scale."""
    return alpha.p ** index_exponent(alpha.image(U), U) == scale_newton(alpha)


def tidy_candidates(alpha, U, k_max=DEFAULT_KMAX):
    """C_k = sum_{i<=k} alpha^-i (cap_{i<=k} alpha^i U), k = 0, 1, ..."""
    inv = alpha.inverse()
    Uk = U
    img = U
    for k in range(k_max + 1):
        if k:
            img = alpha.image(img)
            Uk = intersect(Uk, img)
        C = Uk
        back = Uk
        for _ in range(k):
            back = inv.image(back)
            C = lattice_sum(C, back)
        yield k, C


def tidy_search(alpha, U, k_max=DEFAULT_KMAX):
    """First certified candidate and the k at which it appeared."""
    for k, C in tidy_candidates(alpha, U, k_max):
        if tidy_certify(alpha, C):
            return C, k
    raise NonStabilized(f"no tidy candidate certified by k = {k_max}")


def w0_max(V, U, W=None):
    """Largest lattice containing V with the same displacement index against U: V + U.

    Returns (W0, checks) where checks maps each postcondition to its outcome.
    """
    W0 = lattice_sum(V, U)
    target = relative_index(V, intersect(V, U))
    checks = {
        "contains_V": W0.contains(V),
        "same_index": relative_index(W0, intersect(W0, U)) == target,
    }
    if W is not None:
        qualifies = W.contains(V) and relative_index(W, intersect(W, U)) == target
        checks["contains_W"] = (not qualifies) or W0.contains(W)
    return W0, checks


@dataclass
class ScaleReport:
    prime: int
    dim: int
    index_exponents: list
    period: int
    scale: int
    scale_inverse: int
    newton_scale: int
    newton_scale_inverse: int
    modular: Fraction
    valuations: list
    tidy: Lattice | None
    tidy_k: int | None
    tidy_certified: bool
    checks: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "prime": str(self.prime),
            "dim": self.dim,
            "index_sequence": [str(self.prime**e) for e in self.index_exponents],
            "period": self.period,
            "scale": str(self.scale),
            "scale_inverse": str(self.scale_inverse),
            "newton_scale": str(self.newton_scale),
            "newton_scale_inverse": str(self.newton_scale_inverse),
            "modular_function": str(self.modular),
            "eigenvalue_valuations": [str(v) for v in self.valuations],
            "tidy_lattice": self.tidy.to_dict() if self.tidy is not None else None,
            "tidy_k": self.tidy_k,
            "tidy_certified": self.tidy_certified,
            "checks": dict(self.checks),
        }


def scale_report(alpha, U=None, k_max=DEFAULT_KMAX):
    U = U or Lattice.standard(alpha.p, alpha.n)
    inv = alpha.inverse()
    s, d, exps = scale_limit(alpha, U, k_max)
    s_inv, _, _ = scale_limit(inv, U, k_max)
    sn, sn_inv = scale_newton(alpha), scale_newton(inv)
    delta = modular_function(alpha)
    try:
        T, k = tidy_search(alpha, U, k_max)
        certified = True
    except NonStabilized:
        T, k, certified = None, None, False
    checks = {
        "limit_equals_newton": s == sn and s_inv == sn_inv,
        "modular_consistent": Fraction(s, s_inv) == delta,
        "index_at_least_scale": alpha.p ** index_exponent(alpha.image(U), U) >= sn,
    }
    return ScaleReport(alpha.p, alpha.n, exps, d, s, s_inv, sn, sn_inv, delta, root_valuations(alpha), T, k, certified, checks)
