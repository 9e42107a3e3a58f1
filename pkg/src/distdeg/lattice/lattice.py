"""p-local lattices: finitely generated modules over the rationals with denominators prime to p.

A lattice is stored by its canonical row basis: echelon form whose pivots are
exact powers of p, with the entries above each pivot reduced to the standard
residues modulo that pivot.  Two lattices are equal iff their bases are.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import RankDeficient


def vp(x, p):
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def _residue(x, v, p):
    """Canonical representative of x modulo p^v times the local integers."""
    if x == 0:
        return Fraction(0)
    w = vp(x, p)
    if w >= v:
        return Fraction(0)
    u = x / Fraction(p) ** w
    mod = p ** (v - w)
    r = (u.numerator * pow(u.denominator, -1, mod)) % mod
    return Fraction(p) ** w * r


def canonical_basis(rows, p):
    rows = [[Fraction(x) for x in r] for r in rows]
    n = len(rows[0]) if rows else 0
    rows = [r for r in rows if any(r)]
    out = []
    pivots = []
    for c in range(n):
        live = [r for r in rows if r[c] != 0]
        if not live:
            continue
        best = min(live, key=lambda r: vp(r[c], p))
        v = vp(best[c], p)
        unit = Fraction(p) ** v / best[c]
        piv = [x * unit for x in best]
        rest = []
        for r in rows:
            if r is best:
                continue
            if r[c] != 0:
                q = r[c] / piv[c]
                r = [a - q * b for a, b in zip(r, piv)]
            if any(r):
                rest.append(r)
        rows = rest
        out.append(piv)
        pivots.append((c, v))
    # reduce entries above pivots
    for i, (c, v) in enumerate(pivots):
        for j in range(i):
            x = out[j][c]
            r = _residue(x, v, p)
            if x != r:
                q = (x - r) / Fraction(p) ** v
                out[j] = [a - q * b for a, b in zip(out[j], out[i])]
    return tuple(tuple(r) for r in out), tuple(pivots)


class Lattice:
    """Module over the p-local integers spanned by the given generator vectors."""

    def __init__(self, p, n, generators=()):
        self.p = int(p)
        self.n = int(n)
        gens = [tuple(Fraction(x) for x in g) for g in generators]
        for g in gens:
            if len(g) != self.n:
                raise ValueError(f"generator of length {len(g)} in dimension {self.n}")
        self.basis, self.pivots = canonical_basis(gens, self.p)

    @classmethod
    def standard(cls, p, n):
        return cls(p, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, p, M):
        n = len(M)
        cols = list(zip(*M)) if M and M[0] else []
        return cls(p, n, cols)

    @classmethod
    def diagonal(cls, p, exps):
        """Product of p^e times the local integers, one factor per coordinate."""
        n = len(exps)
        return cls(p, n, [[Fraction(p) ** e if i == j else 0 for j in range(n)] for i, e in enumerate(exps)])

    @property
    def rank(self):
        return len(self.basis)

    @property
    def full_rank(self):
        return self.rank == self.n

    def columns(self):
        """Generating matrix with the basis as columns."""
        return [[self.basis[j][i] for j in range(self.rank)] for i in range(self.n)]

    def volume(self):
        """Sum of pivot valuations: the p-exponent of the covolume."""
        return sum(v for _, v in self.pivots)

    def __eq__(self, other):
        return isinstance(other, Lattice) and (self.p, self.n, self.basis) == (other.p, other.n, other.basis)

    def __hash__(self):
        return hash((self.p, self.n, self.basis))

    def __repr__(self):
        rows = ["[" + ", ".join(str(x) for x in r) + "]" for r in self.basis]
        return f"Lattice(p={self.p}, n={self.n}, basis=[{', '.join(rows)}])"

    def __add__(self, other):
        return lattice_sum(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def contains(self, other):
        if isinstance(other, Lattice):
            return lattice_sum(self, other) == self
        return Lattice(self.p, self.n, self.basis + (tuple(other),)) == self

    __contains__ = contains

    def scale(self, e):
        """p^e times this lattice."""
        f = Fraction(self.p) ** e
        return Lattice(self.p, self.n, [[f * x for x in r] for r in self.basis])

    def to_dict(self):
        return {"prime": self.p, "dim": self.n, "basis": [[str(x) for x in r] for r in self.basis]}


def _same_space(L, M):
    if (L.p, L.n) != (M.p, M.n):
        raise ValueError("lattices over different primes or dimensions")


def lattice_sum(L, M):
    _same_space(L, M)
    return Lattice(L.p, L.n, L.basis + M.basis)


def intersect(L, M):
    """Module intersection by the Zassenhaus block elimination."""
    _same_space(L, M)
    n = L.n
    rows = [list(r) + list(r) for r in L.basis] + [list(r) + [0] * n for r in M.basis]
    if not rows:
        return Lattice(L.p, n)
    basis, _ = canonical_basis(rows, L.p)
    inter = [r[n:] for r in basis if not any(r[:n])]
    return Lattice(L.p, n, inter)


def relative_index(L, N):
    """[L : N] for a sublattice N of L of the same rank, as a p-exponent."""
    if N.rank != L.rank:
        raise RankDeficient(f"index of a rank {N.rank} sublattice in rank {L.rank}")
    if not L.contains(N):
        raise ValueError("not a sublattice")
    return N.volume() - L.volume()


def index_exponent(L, M):
    """e with [L : L cap M] = p^e; both lattices must have full rank."""
    _same_space(L, M)
    if not (L.full_rank and M.full_rank):
        raise RankDeficient("index is defined between full-rank lattices")
    return intersect(L, M).volume() - L.volume()


def index(L, M):
    """[L : L cap M] as an integer power of p."""
    return L.p ** index_exponent(L, M)
