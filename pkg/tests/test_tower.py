import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distdeg.errors import DimensionBlowup, ZeroInversion
from distdeg.exact import FractionField
from distdeg.tower import (
    SplitCertificate,
    TriangularTower,
    degree_over,
    member,
    minimal_polynomial_tuple,
    span_closure,
)

F = FractionField(["a"])
a = F.gen("a")
base = TriangularTower(F)


def sqrt_tower(*radicands):
    """Successive square roots z_i of the given base-or-earlier elements."""
    t = base
    for i, r in enumerate(radicands):
        r = r(t) if callable(r) else r
        t = t.extend(f"z{i + 1}", [-t.coerce(r), 0, 1])
    return t


T1 = sqrt_tower(F.add(F.mul(a, a), F.one))


def brute_closure_dim(gens, t):
    """Oracle: repeatedly multiply until the base-linear span stops growing."""
    K = t.F
    rows = {}  # pivot key -> row with pivot coefficient 1

    def add(x):
        v = dict(t.flatten(x))
        for k, r in sorted(rows.items()):
            c = v.get(k)
            if c is not None and not K.is_zero(c):
                for kk, rc in r.items():
                    v[kk] = K.sub(v.get(kk, K.zero), K.mul(c, rc))
        v = {k: c for k, c in v.items() if not K.is_zero(c)}
        if not v:
            return False
        k0 = min(v)
        inv = K.inv(v[k0])
        rows[k0] = {k: K.mul(c, inv) for k, c in v.items()}
        return True

    # spanned by words in the generators: extend each new element by every generator
    count = 1
    add(t.one)
    frontier = list(gens)
    while frontier:
        x = frontier.pop(0)
        if add(x):
            count += 1
            frontier.extend(x * g for g in gens)
    return count


def test_extend_dimensions():
    assert T1.dimension == 2
    z = T1.gen("z1")
    assert T1.extend("w", [-z, 1]).dimension == 2
    t = sqrt_tower(a, lambda t: t.gen("z1"))
    assert t.dimension == 4 and t.degrees == (2, 2)


def test_extend_rejects_non_monic():
    with pytest.raises(ValueError):
        base.extend("z", [1, 2])


def test_invert_root():
    z = T1.gen("z1")
    y = T1.invert(z)
    assert y * z == T1.one
    assert y == z * T1.const(F.inv(F.add(F.mul(a, a), F.one)))
    assert T1.invert(T1.one) == T1.one


def test_invert_zero():
    with pytest.raises(ZeroInversion):
        T1.zero.inverse()


def test_broken_tower_certificate():
    Q = FractionField([])
    t = TriangularTower(Q).extend("z1", [-1, 0, 1])
    cert = t.invert(t.gen("z1") - 1)
    assert isinstance(cert, SplitCertificate)
    assert cert.step == 1
    assert len(cert.factor) == 2 and cert.factor[-1] == t.one
    assert cert.factor[0] in (t.const(-1), t.const(1))
    assert str(cert) in ("step 1 (z1) splits: factor X - 1", "step 1 (z1) splits: factor X + 1")


def test_span_examples():
    assert span_closure([], tower=T1).dimension == 1
    z = T1.gen("z1")
    assert span_closure([z]).dimension == 2
    t = sqrt_tower(F.add(F.mul(a, a), F.one), F.add(F.mul(a, a), F.convert(2)))
    z1, z2 = t.gens
    S = span_closure([z1 * z2])
    assert S.dimension == 2 == brute_closure_dim([z1 * z2], t)
    assert S.verify_closed()
    assert span_closure([z1, z2]).dimension == 4


def test_span_cap():
    t = sqrt_tower(a, F.add(a, F.one), F.add(a, F.convert(2)))
    with pytest.raises(DimensionBlowup):
        span_closure(list(t.gens), cap=4)


def test_degree_over_examples():
    z = T1.gen("z1")
    k, mp = degree_over(z, span_closure([], tower=T1))
    assert k == 2 and str(mp) == "X^2 - a^2 - 1"
    assert degree_over(z, span_closure([z]))[0] == 1
    t = sqrt_tower(a, lambda t: t.gen("z1"))
    z1, z2 = t.gens
    k, mp = degree_over(z2, span_closure([z1]))
    assert k == 2 and mp.coeffs == (-z1, t.zero, t.one)


def test_member_examples():
    z = T1.gen("z1")
    S = span_closure([z])
    assert member(T1.const(F.add(F.mul(a, a), F.one)), S)
    assert not member(z, span_closure([], tower=T1))
    assert member(z, S)


def test_minimal_polynomial_tuple():
    z = T1.gen("z1")
    one = span_closure([], tower=T1)
    polys, flat = minimal_polynomial_tuple([z, z * z], one)
    assert [p.degree for p in polys] == [2, 1]
    assert str(polys[0]) == "X1^2 - a^2 - 1"
    assert polys[0]([z]).is_zero() and polys[1]([z, z * z]).is_zero()
    # every coefficient lies in the subfield
    assert all(member(c, one) for c in flat)


def test_tuple_single_reduces_to_degree_over():
    z = T1.gen("z1")
    one = span_closure([], tower=T1)
    polys, flat = minimal_polynomial_tuple([z], one)
    k, mp = degree_over(z, one)
    assert polys[0].degree == k and flat == mp.coeffs[:-1]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_field_axioms_in_two_step_tower(u, v):
    t = sqrt_tower(a, F.add(a, F.one))
    z1, z2 = t.gens
    basis = [t.one, z1, z2, z1 * z2]
    x = sum((c * b for c, b in zip(u, basis)), t.zero)
    y = sum((c * b for c, b in zip(v, basis)), t.zero)
    assert x * y == y * x
    assert (x + y) * y == x * y + y * y
    if not x.is_zero():
        assert x * x.inverse() == t.one
        assert t.invert(x) * x == t.one


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_span_dimension_divides_tower(seed):
    rng = random.Random(seed)
    t = sqrt_tower(a, F.add(a, F.one), F.add(a, F.convert(3)))
    gens = list(t.gens)
    pick = []
    for _ in range(rng.randint(1, 2)):
        x = t.zero
        for e in product(range(2), repeat=3):
            if rng.random() < 0.3:
                m = t.const(rng.randint(-2, 2))
                for g, k in zip(gens, e):
                    m = m * g**k
                x = x + m
        pick.append(x)
    S = span_closure(pick)
    assert t.dimension % S.dimension == 0
    assert S.verify_closed()
    assert S.dimension == brute_closure_dim([p for p in pick if not p.is_zero()], t)
    for p in pick:
        k, mp = degree_over(p, span_closure([], tower=t))
        assert mp(p).is_zero()
        assert k == span_closure([p]).dimension
