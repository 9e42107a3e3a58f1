"""Fraction-free linear solving over a field of scalars or rational functions."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import dmp as D
from .ratfunc import FractionField


@dataclass(frozen=True)
class Solution:
    """Solution set of A x = b.

    ``status`` is ``"none"``, ``"unique"`` or ``"family"``; ``particular``
    is a solution (free variables set to zero) and ``kernel`` a basis of the
    null space of A.
    """

    status: str
    particular: tuple | None = None
    kernel: tuple = field(default_factory=tuple)

    @property
    def consistent(self):
        return self.status != "none"


class _FieldAsRing:
    """View a field as its own ring for the elimination (exquo = div)."""

    def __init__(self, F):
        self.F = F
        self.zero = F.zero
        self.one = F.one

    def mul(self, x, y):
        return self.F.mul(x, y)

    def sub(self, x, y):
        return self.F.sub(x, y)

    def exquo(self, x, y):
        return self.F.div(x, y)

    def is_zero(self, x):
        return self.F.is_zero(x)


def _clear_row(row, F):
    """Scale a row of RatFuncs to polynomials (raw reps) by the lcm of denominators."""
    R = F.ring
    n, K = R.n, R.K
    lcm = R.one
    for x in row:
        if x.den != R.one:
            g = D.dmp_gcd(lcm, x.den, n, K)
            lcm = D.dmp_mul(lcm, D.dmp_exquo(x.den, g, n, K), n, K)
    if lcm == R.one:
        return [x.num for x in row]
    return [D.dmp_mul(x.num, D.dmp_exquo(lcm, x.den, n, K), n, K) for x in row]


def bareiss_echelon(M, R):
    """In-place fraction-free row echelon form over an integral domain R.

    Entries after elimination are minors of the input so every division by the
    previous pivot is exact.  Returns (rank, pivot columns).
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    prev = R.one
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if not R.is_zero(M[i][c])), None)
        if piv is None:
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
        pr = M[r]
        pc = pr[c]
        for i in range(r + 1, rows):
            row = M[i]
            a = row[c]
            if R.is_zero(a):
                # row_j <- pc*row_j / prev keeps the minor invariant
                for j in range(c + 1, cols):
                    if not R.is_zero(row[j]):
                        row[j] = R.exquo(R.mul(pc, row[j]), prev)
                continue
            for j in range(c + 1, cols):
                row[j] = R.exquo(R.sub(R.mul(pc, row[j]), R.mul(a, pr[j])), prev)
            row[c] = R.zero
        prev = pc
        pivots.append(c)
        r += 1
    return r, pivots


def solve_linear(A, b, F) -> Solution:
    """Solve A x = b exactly over the field F.

    A is a list of rows of F-values, b a list of F-values.  Rows with
    rational-function entries are first scaled to polynomial rows, then a
    fraction-free (Bareiss) elimination runs in the polynomial ring.
    """
    m = len(A)
    ncols = len(A[0]) if m else 0
    if len(b) != m:
        raise ValueError("dimension mismatch between A and b")
    if isinstance(F, FractionField):
        R = F.ring
        M = [_clear_row(list(A[i]) + [b[i]], F) for i in range(m)]
        lift = F.from_ring
    else:
        R = _FieldAsRing(F)
        M = [list(A[i]) + [b[i]] for i in range(m)]
        lift = lambda x: x  # noqa: E731
    rank, pivots = bareiss_echelon(M, R)
    pivots = [c for c in pivots if c < ncols]
    rank = len(pivots)
    for i in range(rank, m):
        if not R.is_zero(M[i][ncols]):
            return Solution("none")
    if rank < m and any(not R.is_zero(M[i][ncols]) for i in range(rank, m)):
        return Solution("none")
    free = [c for c in range(ncols) if c not in set(pivots)]

    def back_substitute(rhs_col, assignment):
        x = list(assignment)
        for i in range(rank - 1, -1, -1):
            c = pivots[i]
            row = M[i]
            acc = lift(rhs_col(row))
            for j in range(c + 1, ncols):
                if not R.is_zero(row[j]) and not F.is_zero(x[j]):
                    acc = F.sub(acc, F.mul(lift(row[j]), x[j]))
            x[c] = F.div(acc, lift(row[c]))
        return tuple(x)

    zero_assign = [F.zero] * ncols
    particular = back_substitute(lambda row: row[ncols], zero_assign)
    kernel = []
    for f in free:
        assign = [F.zero] * ncols
        assign[f] = F.one
        kernel.append(back_substitute(lambda row: R.zero, assign))
    status = "unique" if not free else "family"
    return Solution(status, particular, tuple(kernel))


def mat_vec(A, x, F):
    out = []
    for row in A:
        acc = F.zero
        for a, v in zip(row, x):
            if not F.is_zero(a) and not F.is_zero(v):
                acc = F.add(acc, F.mul(a, v))
        out.append(acc)
    return out
