import itertools

import pytest

from wplmut.gf import GF, field, gaussian_binomial, prime_power


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 16, 25, 27, 32, 49, 64])
def test_field_axioms(q):
    F = field(q)
    els = range(q)
    for a in els:
        assert F.add[a][F.neg[a]] == 0
        if a:
            assert F.mul[a][F.inv[a]] == 1
    # distributivity on a sample
    for a, b, c in itertools.islice(itertools.product(els, repeat=3), 0, None, max(1, q ** 3 // 500)):
        assert F.mul[a][F.add[b][c]] == F.add[F.mul[a][b]][F.mul[a][c]]
    # the multiplicative group is cyclic of order q - 1
    assert any(len({_pow(F, g, k) for k in range(q - 1)}) == q - 1 for g in range(1, q))


def _pow(F, g, k):
    out = 1
    for _ in range(k):
        out = F.mul[out][g]
    return out


def test_rejects_bad_sizes():
    assert prime_power(12) is None and prime_power(1) is None
    assert prime_power(81) == (3, 4)
    with pytest.raises(ValueError):
        GF(6)
    with pytest.raises(ValueError):
        GF(128)


@pytest.mark.parametrize("q,n", [(2, 4), (3, 3), (4, 3), (5, 2)])
def test_subspace_counts_are_gaussian(q, n):
    F = field(q)
    for k in range(n + 1):
        subs = F.subspaces(n, k)
        assert len(subs) == gaussian_binomial(n, k, q)
        assert all(F.rank(s) == k for s in subs if s)


def test_rank_and_span():
    F = field(3)
    rows, piv = F.rref([[1, 2, 0], [2, 1, 0]])
    assert len(rows) == 1
    assert F.in_span(rows, piv, [2, 1, 0])
    assert not F.in_span(rows, piv, [0, 0, 1])
