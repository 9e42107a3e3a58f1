from fractions import Fraction

import pytest

from distdeg.diffext import (
    DifferenceEngine,
    DifferencePresentation,
    Options,
    build_ambient,
    distant_profile,
    inverse_limit_degree,
    joint,
    limit_degree,
    power_reinterpret,
    relative_profile,
    tidy_generator,
    validate,
    verify_tidy,
)
from distdeg.errors import InconsistentPresentation, InverseDataRequired, NotInversiveBase
from distdeg.tower import degree_over, member, span_closure

from conftest import load


# -- validate ----------------------------------------------------------------


def test_validate_worked_example(presentations):
    rep, _ = validate(presentations["e1"])
    assert rep.passed
    assert {r.prop for r in rep.records} >= {"inversive_base", "generation", "no_exact_split"}
    assert all(t.result == "certified" for t in rep.trials)


def test_validate_trivial(presentations):
    rep, A = validate(presentations["trivial"])
    assert rep.passed and A.towers[1].dimension == 1


def test_validate_broken():
    with pytest.raises(InconsistentPresentation) as exc:
        validate(load("broken.dd").presentation)
    assert exc.value.certificate is not None
    assert "X - a - 1" in str(exc.value) or "X + a + 1" in str(exc.value)


def test_relation_violation():
    P = DifferencePresentation(
        gens=[("u", "algebraic", "X^2 - t")], base_vars=["t"], base_sigma={"t": "t + 1"},
        ext=[("w", "X^2 - t - 2")], sigma={"u": "w"},
    )
    with pytest.raises(InconsistentPresentation):
        validate(P)


def test_non_invertible_base():
    P = DifferencePresentation(gens=[("a",)], base_vars=["t"], base_sigma={"t": "t^2"}, sigma={"a": "a"})
    with pytest.raises(NotInversiveBase):
        validate(P)


def test_validation_is_deterministic(presentations):
    a, _ = validate(presentations["e3"], seed=7)
    b, _ = validate(presentations["e3"], seed=7)
    assert a.to_dict() == b.to_dict()


# -- ambient towers ------------------------------------------------------------


def test_ambient_dimensions_worked_example(presentations):
    A = build_ambient(presentations["e1a"], 4)
    assert [A.towers[k].dimension for k in range(1, 5)] == [2, 4, 8, 16]
    # oracle: every new square root has degree 2 over everything below it
    for k in range(1, 5):
        below = span_closure([A.coord(i, 0) for i in range(k)], tower=A.tower)
        assert degree_over(A.coord(k, 0), below)[0] == 2


def test_ambient_sqrt_chain(presentations):
    A = build_ambient(presentations["e2"], 3)
    assert [A.towers[k].dimension for k in range(1, 4)] == [2, 4, 8]
    x = A.coord(0, 0)
    for k in range(1, 4):
        assert A.coord(k, 0) ** (2**k) == x


def test_ambient_trivial(presentations):
    A = build_ambient(presentations["trivial"], 5)
    assert all(A.step_degree(k) == 1 for k in range(1, 6))


# -- limit degrees ---------------------------------------------------------------


def test_limit_degrees(presentations):
    assert limit_degree(presentations["e1a"]).value == 2
    assert limit_degree(presentations["e1"]).value == 2
    assert limit_degree(presentations["e1"], block=["a"]).value == 2
    assert limit_degree(presentations["trivial"]).value == 1
    L = limit_degree(presentations["e2"])
    assert L.value == 2 and all(s == 2 for s in L.steps)


def test_inverse_limit_degrees(presentations):
    assert inverse_limit_degree(presentations["e3"])[0] == 2
    assert inverse_limit_degree(presentations["e2"])[0] == 1
    P = DifferencePresentation(gens=[("a",)], sigma={"a": "a + 1"}, inverse={"images": {"a": "a - 1"}})
    assert inverse_limit_degree(P)[0] == 1
    with pytest.raises(InverseDataRequired):
        inverse_limit_degree(presentations["e1a"])


def test_ild_oracle_e3(presentations):
    # mu(u / K(sigma(u))) computed directly in the one-step tower
    A = build_ambient(presentations["e3"], 1)
    S = span_closure([A.coord(1, 0)], tower=A.tower)
    assert degree_over(A.coord(0, 0), S)[0] == 2


# -- distant profiles ----------------------------------------------------------------


def test_profile_worked_example_block(presentations):
    prof = distant_profile(presentations["e1"], block=["a"])
    assert (prof.ld, prof.m, prof.ell0, prof.C, prof.dd) == (2, 2, 2, 2, 1)
    assert prof.lemma_sequence[:2] == [1, 2]
    assert prof.distant_sequence == [2] * len(prof.distant_sequence)
    assert prof.distant_sequence[1] == Fraction(1) ** 2 * 2**2 / 2


def test_profile_worked_example_joint(presentations):
    prof = distant_profile(presentations["e1"])
    assert prof.dd == 2 == prof.ld


def test_profile_sqrt_chain(presentations):
    prof = distant_profile(presentations["e2"])
    assert (prof.m, prof.ell0, prof.C, prof.dd) == (1, 1, 1, 2)
    assert prof.distant_sequence == [2**ell for ell in range(1, len(prof.distant_sequence) + 1)]
    # oracle: [Q(x^(1/2^l)) : Q(x)] via degree_over
    A = build_ambient(presentations["e2"], 3)
    base = span_closure([], tower=A.tower)
    assert [degree_over(A.coord(l, 0), base)[0] for l in (1, 2, 3)] == [2, 4, 8]


def test_profile_invariants(presentations):
    for name in ("e1a", "e2", "e3", "e5", "trivial"):
        prof = distant_profile(presentations[name])
        assert prof.dd * prof.m == prof.ld
        assert prof.ld % prof.dd.numerator == 0 and prof.dd.denominator == 1
        assert all(x <= y for x, y in zip(prof.lemma_sequence, prof.lemma_sequence[1:]))
        assert all(x >= y for x, y in zip(prof.steps, prof.steps[1:]))
        assert prof.flags["closed_form"]


def test_invariants_record_inverse_data(presentations):
    prof = DifferenceEngine(presentations["e3"]).invariants()
    assert prof.ild == 2 and prof.idd is None
    assert prof.flags["ild_method"] == "algebraic regime"
    prof = DifferenceEngine(presentations["e2"]).invariants()
    assert prof.ild == 1 and prof.idd == 1


# -- tidy generators -----------------------------------------------------------------------


def test_tidy_worked_example(presentations):
    P = presentations["e1a"]
    e = DifferenceEngine(P)
    tidy = e.tidy_generator()
    assert tidy.ell0 == 2
    assert [str(p) for p in tidy.polys] == ["X^2 - a^2 - 2"]
    # sigma^2(c) generates the same field as a^2 + 2 (everything lies in the base here)
    assert all(c.base_value() is not None for c in tidy.shifted)
    assert str(tidy.shifted[0]) == "-a^2 - 2"
    rep, steps = e.verify_tidy(tidy, 4)
    assert rep.passed and steps == [1, 1, 1, 1]
    assert tidy.relative


def test_tidy_sqrt_chain(presentations):
    P = presentations["e2"]
    e = DifferenceEngine(P)
    tidy = e.tidy_generator()
    A = e.A
    same = span_closure(list(tidy.shifted), tower=A.tower).same_field(span_closure([A.coord(1, 0)], tower=A.tower))
    assert same
    # oracle: sigma(x) lies in K(x, sigma^2(x))
    assert member(A.coord(1, 0), span_closure([A.coord(0, 0), A.coord(2, 0)], tower=A.tower))
    rep, steps = e.verify_tidy(tidy, 4)
    assert rep.passed and steps == [2, 2, 2, 2]


def test_tidy_in_base_field(presentations):
    e = DifferenceEngine(presentations["e3"])
    tidy = e.tidy_generator()
    assert not tidy.relative
    assert all(c.base_value() is not None for c in tidy.shifted)
    rep, _ = e.verify_tidy(tidy, 4)
    assert rep.passed


def test_tidy_tuple_of_two_stages(presentations):
    e = DifferenceEngine(presentations["e5"])
    tidy = e.tidy_generator()
    assert [p.degree for p in tidy.polys] == [2, 2]
    assert e.verify_tidy(tidy, 3)[0].passed


def test_one_shot_entry_points(presentations):
    P = presentations["e2"]
    tidy = tidy_generator(P)
    assert verify_tidy(P, tidy, 2).passed


def test_concatenated_tidy(presentations):
    e = DifferenceEngine(presentations["e4"])
    ta = e.tidy_generator(["a"])
    tx = e.tidy_generator(["x"])
    both = e.combine_tidy([ta, tx])
    rep, _ = e.verify_tidy(both, 3, degrees=False)
    assert rep.passed


# -- sigma^n and joint presentations ----------------------------------------------------------


def test_power_one_is_identity(presentations):
    P = presentations["e1a"]
    Q = power_reinterpret(P, 1)
    a, b = distant_profile(P), distant_profile(Q)
    assert (a.ld, a.m, a.ell0, a.C, a.dd) == (b.ld, b.m, b.ell0, b.C, b.dd)


@pytest.mark.parametrize("name,dd", [("e1a", 1), ("e2", 2), ("e3", 1)])
def test_power_law(presentations, name, dd):
    Q = power_reinterpret(presentations[name], 2)
    prof = DifferenceEngine(Q, Options(distant_length=0)).distant_profile()
    assert prof.dd == dd**2


def test_relative_profile_worked_example(presentations):
    rel = relative_profile(presentations["e1"], ["b"])
    assert rel.ld == 1 and rel.dd == 1
    assert rel.flags["relative"] and "truncation" in rel.flags


def test_joint_of_trivial():
    P1 = DifferencePresentation(gens=[("a",)], sigma={"a": "a + 1"})
    P2 = DifferencePresentation(gens=[("b",)], sigma={"b": "b + 2"})
    J = joint(P1, P2)
    prof = distant_profile(J)
    assert (prof.ld, prof.m, prof.ell0, prof.C, prof.dd) == (1, 1, 1, 1, 1)
    rel = relative_profile(J, ["b"])
    assert rel.ld == 1 and rel.dd == 1


def test_profile_determinism(presentations):
    a = DifferenceEngine(presentations["e2"]).invariants().to_dict()
    b = DifferenceEngine(presentations["e2"]).invariants().to_dict()
    assert a == b
