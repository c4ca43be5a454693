import os
from fractions import Fraction

import pytest

from wplmut import hall
from wplmut.gf import gaussian_binomial
from wplmut.hall import (
    A,
    HallCache,
    HallElement,
    IsoClass,
    QSqrt,
    cyclic,
    enumerate_isoclasses,
    hall_number,
    interval,
    iterated_skew,
    monomial,
    projective,
    simple,
    skew_commutator,
    uniserial,
    verify_appendix_hall,
    zero_class,
)


def test_isoclasses_small():
    Q = A(2)
    assert set(enumerate_isoclasses(Q, (1, 1))) == {IsoClass.make(Q, [(0, 1), (1, 1)]), projective(2, 2)}
    assert enumerate_isoclasses(Q, (1, 0)) == (simple(Q, 0),)
    C = cyclic(2)
    got = {X.render() for X in enumerate_isoclasses(C, (1, 1))}
    assert got == {"S0+S1", "S(2)0", "S(2)1"}


def test_isoclass_counts_a3():
    Q = A(3)
    # interval partitions of [1,3]: {1}{2}{3}, {12}{3}, {1}{23}, {123}
    assert len(enumerate_isoclasses(Q, (1, 1, 1))) == 4
    assert len(enumerate_isoclasses(Q, (2, 1, 0))) == 2


@pytest.mark.parametrize("q", [2, 3, 5])
def test_hall_numbers_a2(q):
    Q = A(2)
    P2 = projective(2, 2)
    S1, S2 = simple(Q, 0), simple(Q, 1)
    assert hall_number(P2, S2, S1, q) == 1
    assert hall_number(P2, S1, S2, q) == 0
    assert hall_number(P2, zero_class(Q), P2, q) == 1


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("n,a", [(3, 1), (4, 2), (3, 2)])
def test_semisimple_hall_numbers_are_gaussian(q, n, a):
    Q = A(1)
    L = IsoClass.make(Q, [(0, 1)] * n)
    M = IsoClass.make(Q, [(0, 1)] * (n - a))
    N = IsoClass.make(Q, [(0, 1)] * a)
    assert hall_number(L, M, N, q) == gaussian_binomial(n, a, q)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_uniserial_chain_numbers(p):
    Q = cyclic(p)
    for j in range(p):
        for k in range(2, p + 1):
            top = uniserial(Q, j, k)
            rest = uniserial(Q, (j - 1) % p, k - 1)
            assert hall_number(top, simple(Q, j), rest, 3) == 1
            assert hall_number(top, rest, simple(Q, j), 3) == 0


def test_products_a2():
    Q, q = A(2), 3
    u1, u2 = HallElement.simple(Q, 0, q), HallElement.simple(Q, 1, q)
    split = HallElement.basis(IsoClass.make(Q, [(0, 1), (1, 1)]), q)
    P2 = HallElement.basis(projective(2, 2), q)
    assert u1 * u2 == split
    assert u2 * u1 == (split + P2).vscale(-1)
    M = HallElement.basis(projective(2, 2), q)
    assert M * HallElement.one(Q, q) == M
    assert skew_commutator(u1, u1, 0).is_zero()


@pytest.mark.parametrize("q", [2, 3, 5])
def test_appendix_values(q):
    Q2, Q3, Q4 = A(2), A(3), A(4)
    u = lambda Q, a: HallElement.simple(Q, a, q)
    P = lambda n: HallElement.basis(projective(n, n), q)
    assert skew_commutator(u(Q2, 0), u(Q2, 1), 1) == -P(2)
    assert skew_commutator(u(Q2, 1), u(Q2, 0), -1) == P(2).vscale(-1)
    assert iterated_skew([u(Q3, a) for a in range(3)], 1) == P(3)
    assert iterated_skew([u(Q4, a) for a in (3, 2, 1, 0)], -1) == P(4).vscale(-3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_appendix_report(n):
    rep = verify_appendix_hall(n, (2, 3, 5))
    assert rep.ok


def test_monomial_matches_products():
    Q, q = A(3), 2
    word = [0, 1, 2, 1]
    prod = HallElement.one(Q, q)
    for a in word:
        prod = prod * HallElement.simple(Q, a, q)
    assert monomial(Q, q, word) == prod


def test_qsqrt_arithmetic():
    x = QSqrt.vpow(3, 5)
    assert x * x == QSqrt.of(125, 5)
    assert (x * x.inverse()).a == 1
    assert QSqrt.vpow(-2, 3).a == Fraction(1, 3)


def test_guard():
    with pytest.raises(hall.GuardExceeded):
        verify_appendix_hall(5)


# -- cache administration ------------------------------------------------------


def test_cache_roundtrip(tmp_path):
    assert hall.cache_stats(tmp_path) == {"records": 0, "distinct": 0}
    cache = HallCache(tmp_path)
    Q = A(2)
    P2, S1, S2 = projective(2, 2), simple(Q, 0), simple(Q, 1)
    for q in (2, 3):
        hall_number(P2, S2, S1, q, cache)
        hall_number(P2, S1, S2, q, cache)
    cache.flush()
    assert hall.cache_stats(tmp_path)["records"] == 4
    assert hall.cache_verify(tmp_path, fraction=1.0) == {"checked": 4, "mismatches": 0}
    with open(tmp_path / hall.CACHE_FILE, "a") as fh:
        fh.write((tmp_path / hall.CACHE_FILE).read_text().splitlines()[0] + "\n")
    assert hall.cache_compact(tmp_path) == {"before": 5, "after": 4}
    again = HallCache(tmp_path)
    assert again.get(P2, S2, S1, 2) == 1


def test_cache_detects_corruption(tmp_path):
    (tmp_path / hall.CACHE_FILE).write_text("A2|1,1;0,1;1,0|1.2;1.1;0.1|2|1\nA2|garbage\n")
    with pytest.raises(hall.CorruptRecord, match="line 2"):
        hall.cache_stats(tmp_path)


def test_cache_verify_catches_wrong_counts(tmp_path):
    (tmp_path / hall.CACHE_FILE).write_text("A2|1,1;0,1;1,0|1.2;1.1;0.1|2|7\n")
    assert hall.cache_verify(tmp_path, fraction=1.0)["mismatches"] == 1
