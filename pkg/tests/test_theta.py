import pytest

from wplmut.lattice import STAR, LVector, WeightData
from wplmut.quantum import compose_maps, equality_oracle
from wplmut.theta import (
    GuardExceeded,
    J_composite,
    J_table,
    StarOps,
    arm_model,
    declared_symbol_checks,
    eta_elements,
    kappa,
    star_algebra,
    star_model,
    theta_and_theorem5,
    theta_map,
)
from wplmut.mutation import mutation_reflection


def test_eta_j1_is_tube_letter():
    for p in (2, 3, 4):
        arm = arm_model(p)
        plus, _ = eta_elements(1, p)
        m = p - 1
        S = arm.tube_letter(m)
        neg = tuple(-c for c in arm.tube_class(m))
        want = arm.algebra.E(S) * arm.algebra.K(neg)
        assert equality_oracle(plus, want, arm.model(True), (2, 3)).ok


def test_eta_rejects_weight_one():
    with pytest.raises(ValueError):
        arm_model(1)
    with pytest.raises(ValueError):
        eta_elements(0, 3)


@pytest.mark.parametrize("p", [(2, 3), (2, 4), (3, 3)])
def test_declared_symbol_checks(p):
    rep = declared_symbol_checks(WeightData(p), (2, 3, 5))
    assert rep.ok, [c.id for c in rep.failures]
    ids = {c.id for c in rep.checks}
    assert any("from-eta(3)" in i for i in ids)
    assert any("cancel-ui(2)" in i for i in ids)


def test_theta0_on_E_star():
    w = WeightData((2, 2))
    s = StarOps(w, star_algebra(w))
    th = theta_map(w, 1, 0)
    want = -(s.K([STAR]) * s.F(STAR))
    assert th(s.E(STAR)) == want
    assert s.T(STAR)(s.E(STAR)) == want


@pytest.mark.parametrize("i,j", [(1, 1), (2, 1), (2, 2)])
def test_theta_k_action_is_the_mutation_reflection(i, j):
    w = WeightData((2, 3))
    th = theta_map(w, i, j)
    m = mutation_reflection(LVector.make(w, {i: j}), w).action.m
    assert th.k_matrix == tuple(tuple(int(a) for a in row) for row in m)


def test_J_table_matches_T_composite():
    w = WeightData((2, 3))
    model = star_model(w)
    a = star_algebra(w)
    for i, j in [(1, 1), (2, 1), (2, 2)]:
        t, c = J_table(w, i, j), J_composite(w, i, j)
        for g in range(a.rank):
            assert equality_oracle(t(a.E(g)), c(a.E(g)), model).ok
            assert equality_oracle(t(a.F(g)), c(a.F(g)), model).ok


def test_theta_is_kappa_J():
    w = WeightData((2, 3))
    model = star_model(w)
    a = star_algebra(w)
    for i, j in [(1, 1), (2, 1), (2, 2)]:
        lhs = theta_map(w, i, j)
        rhs = compose_maps(J_table(w, i, j), kappa(w, i, j))
        for g in range(a.rank):
            assert equality_oracle(lhs(a.E(g)), rhs(a.E(g)), model).ok
            assert equality_oracle(lhs(a.F(g)), rhs(a.F(g)), model).ok


def test_theorem5_a3_exact():
    rep = theta_and_theorem5(WeightData((2, 2)), (2, 3, 5), "exact")
    assert rep.ok, [c.id for c in rep.failures]
    assert len(rep.checks) == 17


def test_theorem5_a4_only_the_second_arm_identity_fails():
    """Everything holds for (2,3) except the j = 2 identity with the stated sign character."""
    rep = theta_and_theorem5(WeightData((2, 3)), (2, 3, 5), "probabilistic")
    assert [c.id for c in rep.failures] == ["theorem5/(2,3)/T22-identity"]
    fixed = [c for c in rep.checks if c.id == "theorem5/(2,3)/T22-identity/adjusted-sign"]
    assert fixed and fixed[0].ok


def test_star_model_needs_type_a():
    with pytest.raises(GuardExceeded):
        star_model(WeightData((2, 2, 2)))
    rep = theta_and_theorem5(WeightData((2, 2, 2)))
    assert rep.ok and all(c.status == "SKIPPED" for c in rep.checks)
