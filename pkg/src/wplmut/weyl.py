"""Star quivers, Cartan matrices, Weyl group elements and root systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Sequence

import numpy as np

from .lattice import STAR, Vertex, WeightData
from .reports import Report


@dataclass(frozen=True)
class RootDatum:
    """A symmetric generalized Cartan matrix with labelled vertices."""

    labels: tuple[Hashable, ...]
    cartan: tuple[tuple[int, ...], ...]

    @cached_property
    def index(self) -> dict[Hashable, int]:
        return {v: n for n, v in enumerate(self.labels)}

    @property
    def rank(self) -> int:
        return len(self.labels)

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.array(self.cartan, dtype=np.int64)

    def pair(self, a: Sequence[int], b: Sequence[int]) -> int:
        return int(np.asarray(a, dtype=np.int64) @ self.matrix @ np.asarray(b, dtype=np.int64))

    def simple(self, v: Hashable) -> tuple[int, ...]:
        out = [0] * self.rank
        out[self.index[v]] = 1
        return tuple(out)

    def adjacent(self, u: Hashable, v: Hashable) -> bool:
        return u != v and self.cartan[self.index[u]][self.index[v]] != 0


@dataclass(frozen=True)
class StarQuiver:
    w: WeightData

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self.w.vertices

    @cached_property
    def arrows(self) -> tuple[tuple[Vertex, Vertex], ...]:
        """Arrows as (tail, head); each arm points towards the centre."""
        out = []
        for i, pi in enumerate(self.w.p, start=1):
            for j in range(1, pi):
                out.append(((i, j), STAR if j == 1 else (i, j - 1)))
        return tuple(out)

    @cached_property
    def datum(self) -> RootDatum:
        return RootDatum(self.w.vertices, self.w.cartan)

    def is_finite_type(self) -> bool:
        return self.w.is_finite_type()

    def dynkin_type(self) -> str:
        arms = sorted(pi - 1 for pi in self.w.p if pi >= 2)
        n = self.w.rank
        if not self.is_finite_type():
            return "infinite"
        if len(arms) <= 2:
            return f"A{n}"
        a, b, c = arms
        if a == 1 and b == 1:
            return f"D{n}"
        return f"E{n}"


def linear_quiver(n: int) -> RootDatum:
    """The A_n chain 1 - 2 - ... - n used in the appendix identities."""
    labels = tuple(range(1, n + 1))
    rows = [[0] * n for _ in range(n)]
    for a in range(n):
        rows[a][a] = 2
        if a + 1 < n:
            rows[a][a + 1] = rows[a + 1][a] = -1
    return RootDatum(labels, tuple(tuple(r) for r in rows))


def _datum(Q: StarQuiver | RootDatum) -> RootDatum:
    return Q.datum if isinstance(Q, StarQuiver) else Q


def cartan_matrix(Q: StarQuiver | RootDatum) -> np.ndarray:
    return _datum(Q).matrix.copy()


@dataclass(frozen=True)
class WeylElement:
    m: np.ndarray = field(compare=False)
    datum: RootDatum = field(compare=False, repr=False)

    def __matmul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.m @ other.m, self.datum)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeylElement) and np.array_equal(self.m, other.m)

    def __hash__(self) -> int:
        return hash(self.m.tobytes())

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(a) for a in self.m @ np.asarray(v, dtype=np.int64))

    def is_identity(self) -> bool:
        return np.array_equal(self.m, np.eye(self.datum.rank, dtype=np.int64))

    def preserves_form(self) -> bool:
        C = self.datum.matrix
        return np.array_equal(self.m.T @ C @ self.m, C)

    def render(self) -> str:
        return ";".join(",".join(str(int(a)) for a in row) for row in self.m)


def identity(Q: StarQuiver | RootDatum) -> WeylElement:
    d = _datum(Q)
    return WeylElement(np.eye(d.rank, dtype=np.int64), d)


def reflection_in_root(Q: StarQuiver | RootDatum, alpha: Sequence[int]) -> WeylElement:
    """mu -> mu - (mu, alpha) alpha for a real root alpha."""
    d = _datum(Q)
    a = np.asarray(alpha, dtype=np.int64)
    if d.pair(a, a) != 2:
        raise ValueError(f"{tuple(alpha)} is not a real root: self-pairing {d.pair(a, a)}")
    m = np.eye(d.rank, dtype=np.int64) - np.outer(a, a @ d.matrix)
    return WeylElement(m, d)


def simple_reflection(Q: StarQuiver | RootDatum, v: Hashable) -> WeylElement:
    d = _datum(Q)
    if v not in d.index:
        raise KeyError(f"unknown vertex {v!r}")
    return reflection_in_root(d, d.simple(v))


def compose(*elements: WeylElement) -> WeylElement:
    out = elements[0]
    for e in elements[1:]:
        out = out @ e
    return out


def braid_order(Q: StarQuiver | RootDatum, u: Hashable, v: Hashable, cap: int = 6) -> int:
    if u == v:
        raise ValueError("braid order needs two distinct vertices")
    d = _datum(Q)
    step = simple_reflection(d, u) @ simple_reflection(d, v)
    acc = step
    for m in range(1, cap + 1):
        if acc.is_identity():
            return m
        acc = acc @ step
    raise ValueError(f"braid order exceeds cap {cap}")


@dataclass(frozen=True)
class RootSet:
    roots: frozenset[tuple[int, ...]]
    real: frozenset[tuple[int, ...]]
    height_cap: int | None
    partial: bool

    def __len__(self) -> int:
        return len(self.roots)

    def is_real(self, r: tuple[int, ...]) -> bool:
        return r in self.real

    def positive(self) -> list[tuple[int, ...]]:
        return sorted(r for r in self.roots if sum(r) > 0)


def _finite_roots(d: RootDatum) -> set[tuple[int, ...]]:
    simples = [d.simple(v) for v in d.labels]
    refls = [simple_reflection(d, v) for v in d.labels]
    seen = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for r in frontier:
            for s in refls:
                img = s.apply(r)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return seen


def _positive_roots_by_height(d: RootDatum, cap: int) -> set[tuple[int, ...]]:
    """Positive roots of height <= cap via the alpha-string recursion.

    Real roots come from the Weyl orbit walk restricted to height; imaginary
    roots are the connected-support vectors in the W-orbit of the fundamental
    chamber (the standard Kac characterisation), generated the same way.
    """
    n = d.rank
    C = d.matrix
    found: set[tuple[int, ...]] = set()
    layer = [d.simple(v) for v in d.labels]
    found.update(layer)
    # grow by adding simple roots, keeping vectors that pass the root test
    for h in range(2, cap + 1):
        nxt = set()
        for r in layer:
            for k in range(n):
                cand = list(r)
                cand[k] += 1
                cand_t = tuple(cand)
                if cand_t in nxt or cand_t in found:
                    continue
                if _is_positive_root(cand_t, d, C):
                    nxt.add(cand_t)
        found.update(nxt)
        layer = list(nxt)
    return found


def _support_connected(r: Sequence[int], C: np.ndarray) -> bool:
    supp = [k for k, a in enumerate(r) if a]
    if not supp:
        return False
    seen = {supp[0]}
    stack = [supp[0]]
    while stack:
        a = stack.pop()
        for b in supp:
            if b not in seen and C[a][b] != 0:
                seen.add(b)
                stack.append(b)
    return len(seen) == len(supp)


def _is_positive_root(r: tuple[int, ...], d: RootDatum, C: np.ndarray) -> bool:
    """Reduce by simple reflections towards the fundamental chamber."""
    cur = list(r)
    for _ in range(10_000):
        if any(a < 0 for a in cur):
            return False
        if sum(cur) == 1:
            return True
        if not _support_connected(cur, C):
            return False
        pairing = C @ np.asarray(cur, dtype=np.int64)
        bad = [k for k in range(len(cur)) if pairing[k] > 0]
        if not bad:
            return True  # in the fundamental set: imaginary root
        k = bad[0]
        cur[k] -= int(pairing[k])
        if all(a == 0 for a in cur):
            return False
    raise RuntimeError("root test did not terminate")


def enumerate_roots(Q: StarQuiver | RootDatum, height_cap: int = 30) -> RootSet:
    if height_cap < 1:
        raise ValueError("height_cap must be positive")
    d = _datum(Q)
    finite = isinstance(Q, StarQuiver) and Q.is_finite_type() or (
        not isinstance(Q, StarQuiver) and _is_positive_definite(d)
    )
    if finite:
        roots = _finite_roots(d)
        return RootSet(frozenset(roots), frozenset(roots), None, False)
    pos = _positive_roots_by_height(d, height_cap)
    roots = pos | {tuple(-a for a in r) for r in pos}
    real = {r for r in roots if d.pair(r, r) == 2}
    return RootSet(frozenset(roots), frozenset(real), height_cap, True)


def _is_positive_definite(d: RootDatum) -> bool:
    return bool(np.all(np.linalg.eigvalsh(d.matrix.astype(float)) > 1e-9))


def solve_integer(basis: Sequence[Sequence[int]], target: Sequence[int]) -> tuple[Fraction, ...]:
    """Exact coordinates of target in a basis (columns), by Gaussian elimination."""
    n = len(basis)
    rows = [[Fraction(basis[c][r]) for c in range(n)] + [Fraction(target[r])] for r in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular basis")
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [a / p for a in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return tuple(rows[r][n] for r in range(n))


def determinant(vectors: Sequence[Sequence[int]]) -> int:
    n = len(vectors)
    rows = [[Fraction(vectors[c][r]) for c in range(n)] for r in range(n)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, n):
            f = rows[r][col] / rows[col][col]
            rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return int(det)


def projective_dimvec(n: int, i: int) -> tuple[int, ...]:
    """dim P_i = alpha_1 + ... + alpha_i for the chain with arrows i <- i+1."""
    return tuple(1 if k < i else 0 for k in range(n))


def verify_linear_identities(n: int) -> Report:
    """Reflections in projective dimension vectors on the A_n chain."""
    if n < 2:
        raise ValueError("need n >= 2")
    d = linear_quiver(n)
    s = {i: simple_reflection(d, i) for i in range(1, n + 1)}
    sp = {i: reflection_in_root(d, projective_dimvec(n, i)) for i in range(1, n + 1)}
    rep = Report("weyl", {"n": n})
    ref1 = 'Lemma "A-type" (1)'
    ref2 = 'Lemma "A-type" (2)'
    for i in range(1, n + 1):
        down = [s[k] for k in range(i, 0, -1)]  # s_i ... s_1
        up = [s[k] for k in range(1, i + 1)]  # s_1 ... s_i
        lhs_a = compose(*(down + up[1:]))  # s_i ... s_1 ... s_i
        lhs_b = compose(*(up + down[1:]))  # s_1 ... s_i ... s_1
        rep.record(f"projective-reflection/descending/n={n}/i={i}", ref1, sp[i] == lhs_a, sp[i].render(), lhs_a.render())
        rep.record(f"projective-reflection/ascending/n={n}/i={i}", ref1, sp[i] == lhs_b, sp[i].render(), lhs_b.render())
    for i in range(2, n + 1):
        a = compose(sp[i - 1], sp[i], sp[i - 1])
        b = compose(sp[i], sp[i - 1], sp[i])
        rep.record(f"simple-from-projectives/outer-lower/n={n}/i={i}", ref2, s[i] == a, s[i].render(), a.render())
        rep.record(f"simple-from-projectives/outer-upper/n={n}/i={i}", ref2, s[i] == b, s[i].render(), b.render())
    return rep
