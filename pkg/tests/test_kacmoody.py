from fractions import Fraction

import numpy as np
import pytest

from wplmut.kacmoody import (
    build_algebra,
    exp_ad,
    find_sign_character,
    identity_operator,
    omega_tilde,
    phi_dictionary,
    sign_twist,
    tits_automorphism,
    varpi,
    vscale,
    verify_corollary_for_Rx,
    verify_model_integrity,
    verify_omega_tilde,
    xi,
)
from wplmut.lattice import STAR, LNormalForm, LVector, WeightData
from wplmut.rootcat import LineBundle, Torsion
from wplmut.weyl import RootDatum, StarQuiver


@pytest.fixture(scope="module")
def a3():
    return build_algebra(WeightData((2, 2)))


@pytest.fixture(scope="module")
def d4():
    return build_algebra(WeightData((2, 2, 2)))


def _sl2():
    return build_algebra(RootDatum(("a",), np.array([[2]], dtype=np.int64)))


def _unit(n, r, c):
    m = [[Fraction(0)] * n for _ in range(n)]
    m[r][c] = Fraction(1)
    return np.array(m, dtype=object)


def _matrix_images(a, path):
    """Send each basis element to gl_{n+1} along its defining word; path lists vertices in chain order."""
    n = len(path) + 1
    pos = {a.vertex_index(v): k for k, v in enumerate(path)}
    img = {}
    for v in range(a.n):
        k = pos[v]
        e, f = _unit(n, k, k + 1), _unit(n, k + 1, k)
        img[a.e_index[v]] = e
        (fi, fc), = a.f_vec[v].items()
        img[fi] = f * (1 / fc)
        img[a.h_index[v]] = e.dot(f) - f.dot(e)
    pending = dict(a.words)
    while pending:
        for i, wd in list(pending.items()):
            if wd.rest in img:
                g = img[a.e_index[wd.vertex]] if wd.gen == "e" else _to_matrix(img, a.f_vec[wd.vertex], n)
                r = img[wd.rest]
                img[i] = (g.dot(r) - r.dot(g)) * wd.coeff
                del pending[i]
    return img


def _to_matrix(img, vec, n):
    out = np.array([[Fraction(0)] * n for _ in range(n)], dtype=object)
    for i, c in vec.items():
        out = out + img[i] * c
    return out


def test_dimensions(a3, d4):
    assert a3.dim == 15
    assert d4.dim == 28
    assert verify_model_integrity(a3).ok
    assert verify_model_integrity(d4).ok


def test_structure_constants_match_matrix_oracle(a3):
    """Every basis bracket agrees with the commutator in gl_4."""
    img = _matrix_images(a3, [(1, 1), STAR, (2, 1)])
    for i in range(a3.dim):
        for j in range(a3.dim):
            lhs = _to_matrix(img, a3.basis_bracket(i, j), 4)
            rhs = img[i].dot(img[j]) - img[j].dot(img[i])
            assert (lhs == rhs).all(), (a3.basis[i].label, a3.basis[j].label)


def test_sl2_exponentials():
    a = _sl2()
    e, f, h = a.e("a"), a.f("a"), a.h("a")
    E = exp_ad(a, e)
    assert E(e) == e
    want = dict(f)
    for k, c in list(h.items()) + [(i, -c) for i, c in e.items()]:
        want[k] = want.get(k, 0) + c
    assert E(f) == {k: v for k, v in want.items() if v}
    assert (E @ exp_ad(a, vscale(e, -1))).is_identity()
    T = tits_automorphism(a, "a")
    assert T(e) == vscale(f, -1)
    assert T(f) == vscale(e, -1)
    assert T(h) == vscale(h, -1)
    assert (T @ T @ T @ T).is_identity()


def test_tits_square_is_sign(a3):
    for v in a3.datum.labels:
        T = tits_automorphism(a3, v)
        sq = T @ T
        assert all(sq.matrix[r, c] == 0 for r in range(a3.dim) for c in range(a3.dim) if r != c)
        assert (sq @ sq).is_identity()


def test_omega_tilde_table(d4):
    w = WeightData((2, 2, 2))
    T = omega_tilde(d4, 1, 1)
    assert T.automorphism
    assert T(d4.e((2, 1))) == d4.e((2, 1))
    h = d4.h(STAR)
    want = {}
    for v in [(1, 1), STAR]:
        want.update(d4.h(v))
    assert T(h) == want
    rho = varpi(StarQuiver(w), 1, 1)
    alpha = StarQuiver(w).datum.simple((1, 1))
    assert rho.apply(alpha) == tuple(-x for x in alpha)
    assert verify_omega_tilde(d4).ok


def test_omega_tilde_longer_arm():
    a = build_algebra(WeightData((2, 4)))
    T = omega_tilde(a, 2, 1)
    assert T(a.e((2, 3))) == a.e((2, 2))
    assert T(a.e((1, 1))) == a.e((1, 1))
    d = StarQuiver(WeightData((2, 4))).datum
    for j in (1, 2, 3):
        got = varpi(StarQuiver(WeightData((2, 4))), 2, j).apply(d.simple((2, j)))
        assert got == tuple(-x for x in (d.simple((2, 1)) + np.array(d.simple((2, 2))) + d.simple((2, 3))))


def test_phi_dictionary(a3):
    w = WeightData((2, 2))
    d0 = phi_dictionary(a3, depth=0)
    assert len(d0.table) == 2 * a3.n
    d = phi_dictionary(a3, depth=3)
    assert not d.conflicts
    x1 = LineBundle(LNormalForm((1, 0), 0))
    assert d.table[x1] == vscale(a3.bracket(a3.e(STAR), a3.e((1, 1))), -1)


def test_xi_zero_and_square(a3):
    d = phi_dictionary(a3, depth=8)
    X0 = xi(a3, LVector.make(WeightData((2, 2))), d)
    assert X0(a3.e(STAR)) == a3.f(STAR)
    sq = X0 @ X0
    assert find_sign_character(a3, sq, identity_operator(a3)) is not None


def test_corollary(a3, d4):
    for a in (a3, d4):
        rep = verify_corollary_for_Rx(a)
        assert rep.ok
        for c in rep.checks:
            if "character" in c.detail:
                chi = eval(c.detail.split("character ")[1])
                assert (sign_twist(a, chi) @ sign_twist(a, chi)).is_identity()


def test_truncated_affine_integrity():
    a = build_algebra(WeightData((2, 2, 2, 2)), mode="truncated", height_cap=4)
    assert verify_model_integrity(a).ok
