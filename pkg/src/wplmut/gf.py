"""Small finite fields GF(q) with table arithmetic and row-echelon subspace enumeration."""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

Matrix = list[list[int]]

MAX_Q = 64


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q = p**k, or None."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


def prime_powers(start: int = 2) -> Iterator[int]:
    q = start
    while True:
        if prime_power(q):
            yield q
        q += 1


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> tuple[int, ...]:
    k = len(mod) - 1
    out = [0] * (2 * k)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for d in range(len(out) - 1, k - 1, -1):
        c = out[d]
        if c:
            for e in range(k + 1):
                out[d - k + e] = (out[d - k + e] - c * mod[e]) % p
    return tuple(out[:k])


def _irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lowest monic irreducible of degree k over F_p (coefficients low to high)."""
    for tail in product(range(p), repeat=k):
        f = tuple(tail) + (1,)
        if f[0] == 0:
            continue
        # no roots and no factor of degree <= k/2: test by brute division
        if all(_poly_rem(f, g, p) for d in range(1, k // 2 + 1) for g in _monics(p, d)):
            return f
    raise ValueError(f"no irreducible of degree {k} over F_{p}")


def _monics(p: int, d: int) -> Iterator[tuple[int, ...]]:
    for tail in product(range(p), repeat=d):
        yield tuple(tail) + (1,)


def _poly_rem(f: Sequence[int], g: Sequence[int], p: int) -> bool:
    """True when g does not divide f."""
    r = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], p - 2, p)
    for d in range(len(r) - 1, dg - 1, -1):
        c = r[d] * inv % p
        if c:
            for e in range(dg + 1):
                r[d - dg + e] = (r[d - dg + e] - c * g[e]) % p
    return any(r[:dg])


class GF:
    """GF(q); elements are integers 0..q-1 encoding coefficient vectors in base p."""

    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None or q > MAX_Q:
            raise ValueError(f"unsupported field size {q}")
        self.q = q
        self.p, self.k = pk
        p, k = self.p, self.k
        if k == 1:
            self.add = [[(a + b) % p for b in range(q)] for a in range(q)]
            self.mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            mod = _irreducible(p, k)
            digits = [self._digits(a) for a in range(q)]
            enc = {d: a for a, d in enumerate(digits)}
            self.add = [[enc[tuple((x + y) % p for x, y in zip(da, db))] for db in digits] for da in digits]
            self.mul = [[enc[_poly_mulmod(da, db, mod, p)] for db in digits] for da in digits]
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.inv = [0] + [next(b for b in range(1, q) if self.mul[a][b] == 1) for a in range(1, q)]

    def _digits(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    # -- linear algebra over the field ------------------------------------

    def rref(self, rows: Matrix) -> tuple[Matrix, list[int]]:
        """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
        m = [list(r) for r in rows]
        pivots: list[int] = []
        ncols = len(m[0]) if m else 0
        r = 0
        for c in range(ncols):
            piv = next((i for i in range(r, len(m)) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = self.inv[m[r][c]]
            m[r] = [self.mul[inv][x] for x in m[r]]
            for i in range(len(m)):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [self.sub(x, self.mul[f][y]) for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == len(m):
                break
        return m[:r], pivots

    def rank(self, rows: Matrix) -> int:
        if not rows or not rows[0]:
            return 0
        return len(self.rref(rows)[0])

    def matmul(self, a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
        """Product a*b; `inner` gives the shared dimension when a has no rows or b no columns."""
        n = inner if inner is not None else (len(b) if b else 0)
        cols = len(b[0]) if b else 0
        out = []
        for row in a:
            acc = [0] * cols
            for t in range(n):
                x = row[t]
                if x:
                    bt = b[t]
                    mx = self.mul[x]
                    acc = [self.add[s][mx[y]] for s, y in zip(acc, bt)]
            out.append(acc)
        return out

    def in_span(self, basis_rref: Matrix, pivots: list[int], vec: Sequence[int]) -> bool:
        v = list(vec)
        for row, c in zip(basis_rref, pivots):
            if v[c]:
                f = v[c]
                v = [self.sub(x, self.mul[f][y]) for x, y in zip(v, row)]
        return not any(v)

    def subspaces(self, n: int, k: int) -> list[Matrix]:
        """All k-dimensional subspaces of F_q^n as RREF row matrices."""
        return _subspaces(self.q, n, k)

    def complement_coordinates(self, basis_rref: Matrix, pivots: list[int], n: int) -> list[int]:
        """Non-pivot coordinates; they project F^n / U isomorphically onto F^{n-k}."""
        return [c for c in range(n) if c not in pivots]

    def reduce(self, basis_rref: Matrix, pivots: list[int], vec: Sequence[int]) -> list[int]:
        v = list(vec)
        for row, c in zip(basis_rref, pivots):
            if v[c]:
                f = v[c]
                v = [self.sub(x, self.mul[f][y]) for x, y in zip(v, row)]
        return v


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


@lru_cache(maxsize=None)
def _subspaces(q: int, n: int, k: int) -> list[Matrix]:
    if k < 0 or k > n:
        return []
    if k == 0:
        return [[]]
    out: list[Matrix] = []
    from itertools import combinations

    for pivots in combinations(range(n), k):
        free: list[tuple[int, int]] = []
        for r, c in enumerate(pivots):
            for col in range(c + 1, n):
                if col not in pivots:
                    free.append((r, col))
        for vals in product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, col), x in zip(free, vals):
                rows[r][col] = x
            out.append(rows)
    return out


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
