from fractions import Fraction

import pytest

from wplmut.lattice import STAR, LVector, WeightData, class_of_line_bundle, reduce_mod_delta
from wplmut.mutation import (
    mutation_reflection,
    remark_basis,
    sigma_maps,
    transported_basis,
    transported_basis_is_unimodular,
    verify_remark_example,
    verify_sigma_maps,
    verify_sign_coherence,
    verify_simple_reflection_theorem,
)
from wplmut.weyl import StarQuiver, determinant, reflection_in_root, simple_reflection

W23 = WeightData((2, 3))


def test_reflection_at_zero_and_c():
    Q = StarQuiver(W23)
    assert mutation_reflection(LVector.make(W23), W23).action == simple_reflection(Q, STAR)
    assert mutation_reflection(LVector.make(W23, c=1), W23).action == simple_reflection(Q, STAR)


def test_reflection_at_x2():
    d = StarQuiver(W23).datum
    alpha = tuple(a + b for a, b in zip(d.simple(STAR), d.simple((2, 1))))
    op = mutation_reflection(LVector.make(W23, {2: 1}), W23)
    assert op.action == reflection_in_root(d, alpha)


@pytest.mark.parametrize("p", [(2, 3), (2, 2, 2), (3, 3, 3), (2, 3, 5), (2, 3, 7)])
def test_simple_reflection_theorem(p):
    w = WeightData(p)
    rep = verify_simple_reflection_theorem(w)
    assert rep.ok
    assert len(rep.checks) == w.rank


def test_composite_negates_own_root():
    d = StarQuiver(W23).datum
    a = mutation_reflection(LVector.make(W23, {2: 1}), W23).action
    b = mutation_reflection(LVector.make(W23, {2: 2}), W23).action
    assert (a @ b @ a).apply(d.simple((2, 2))) == tuple(-x for x in d.simple((2, 2)))


@pytest.mark.parametrize("p", [(2, 3), (2, 2, 2), (3, 4)])
def test_transported_basis_unimodular(p):
    w = WeightData(p)
    for x in [LVector.make(w), LVector.make(w, {1: 1}), LVector.make(w, {1: 1, 2: 2}, -1)]:
        for side in ("right", "left"):
            assert transported_basis_is_unimodular(x, side, w)


def test_remark_example():
    rep = verify_remark_example()
    assert rep.ok, [c.id for c in rep.failures]


def test_sign_coherence_on_a3():
    w = WeightData((2, 2))
    for x in [LVector.make(w), LVector.make(w, {1: 1}), LVector.make(w, {2: 1}), LVector.make(w, {1: 1, 2: 1}),
              LVector.make(w, c=1)]:
        rep = verify_sign_coherence(x, w)
        assert rep.ok and rep.checks[0].lhs == "12 roots"


def test_sigma_at_zero():
    right, _left = sigma_maps(LVector.make(W23), W23)
    assert right[STAR] == -1
    assert all(right[(i, j)] == 0 for i, j in [(1, 1), (2, 1), (2, 2)])
    assert sigma_maps(LVector.make(W23, c=1), W23)[0][STAR] == 0
    assert sigma_maps(LVector.make(W23, {2: 2}), W23)[0][(2, 2)] == -1


def test_sigma_suite():
    assert verify_sigma_maps(W23).ok
