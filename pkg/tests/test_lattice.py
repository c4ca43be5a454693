from fractions import Fraction

import pytest

from wplmut.lattice import (
    STAR,
    K0Class,
    LNormalForm,
    LVector,
    WeightData,
    class_of_line_bundle,
    class_of_simple_torsion,
    class_of_torsion,
    delta,
    euler_sym,
    normal_form,
    parse_weights,
    reduce_mod_delta,
    simple_root,
    special_elements,
)

W23 = WeightData((2, 3))


def test_normal_form_examples():
    assert normal_form(LVector.make(W23, {1: 1, 2: 1}), W23) == LNormalForm((1, 1), 0)
    assert normal_form(LVector.make(W23, {2: 3}), W23) == LNormalForm((0, 0), 1)
    assert normal_form(LVector.make(W23, {1: -1}), W23) == LNormalForm((1, 0), -1)


def test_special_elements():
    c, omega = special_elements(W23)
    assert c == LNormalForm((0, 0), 1)
    assert omega == LNormalForm((1, 2), -2)
    assert special_elements(WeightData((2, 2, 2)))[1] == LNormalForm((1, 1, 1), -2)


def test_line_bundle_classes():
    a_star = simple_root(W23, STAR)
    for r in (-2, 0, 3):
        assert class_of_line_bundle(LVector.make(W23, c=r), W23) == K0Class(a_star, r)
    x1 = class_of_line_bundle(LVector.make(W23, {1: 1}), W23)
    want = tuple(a + b for a, b in zip(a_star, simple_root(W23, (1, 1))))
    assert x1 == K0Class(want, 0)
    assert class_of_line_bundle(LVector.make(W23, {1: -1}), W23) == K0Class(want, -1)


def test_torsion_classes():
    a21, a22 = simple_root(W23, (2, 1)), simple_root(W23, (2, 2))
    assert class_of_torsion(2, 1, 1, W23) == K0Class(a21, 0)
    assert class_of_torsion(2, 2, 3, W23) == delta(W23)
    neg = tuple(-x - y for x, y in zip(a21, a22))
    assert class_of_torsion(2, 0, 1, W23) == K0Class(neg, 1)
    assert reduce_mod_delta(class_of_simple_torsion(2, 0, W23)) == neg


def test_pairings():
    a_star = K0Class(simple_root(W23, STAR))
    assert euler_sym(a_star, a_star, W23) == 2
    assert euler_sym(a_star, K0Class(simple_root(W23, (2, 1))), W23) == -1
    x = class_of_line_bundle(LVector.make(W23, {1: 1, 2: 2}, -3), W23)
    assert euler_sym(delta(W23), x, W23) == 0


def test_delta_from_arms_and_shift():
    """Each arm's full period and the c-shift of any line bundle both give delta."""
    w = WeightData((2, 3, 4))
    for i, pi in enumerate(w.p, start=1):
        total = class_of_simple_torsion(i, 0, w)
        for j in range(1, pi):
            total = total + class_of_simple_torsion(i, j, w)
        assert total == delta(w)
    x = LVector.make(w, {1: 1, 3: 2})
    shifted = class_of_line_bundle(x + LVector.make(w, c=1), w) - class_of_line_bundle(x, w)
    assert shifted == delta(w)


def test_weight_data_validation():
    assert parse_weights("(2,3,5)").p == (2, 3, 5)
    assert WeightData((2, 3)).rank == 4
    assert WeightData((2, 3, 5)).is_finite_type()
    assert not WeightData((2, 3, 7)).is_finite_type()
    with pytest.raises(ValueError):
        WeightData((2, 0))
    with pytest.raises(ValueError):
        W23.weight(3)


def test_normal_form_rejects_wrong_length():
    with pytest.raises(ValueError):
        normal_form(LVector((1, 2)), W23)
