"""Grading group L(p) and the Grothendieck group K0 in (ZI, delta) coordinates.

Vertices of the star quiver are encoded as pairs: ``STAR = (0, 0)`` for the
central vertex and ``(i, j)`` with ``1 <= j <= p_i - 1`` for the arm vertex
omega_{ij} (arms are 1-based).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

Vertex = tuple[int, int]
STAR: Vertex = (0, 0)


@dataclass(frozen=True)
class WeightData:
    p: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", tuple(int(a) for a in self.p))
        if len(self.p) < 1:
            raise ValueError("need at least one arm")
        if any(a < 1 for a in self.p):
            raise ValueError(f"weights must be positive: {self.p}")

    @property
    def t(self) -> int:
        return len(self.p)

    def weight(self, i: int) -> int:
        if not 1 <= i <= self.t:
            raise ValueError(f"invalid arm index {i} for weights {self.p}")
        return self.p[i - 1]

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        out: list[Vertex] = [STAR]
        for i, pi in enumerate(self.p, start=1):
            out.extend((i, j) for j in range(1, pi))
        return tuple(out)

    @cached_property
    def index(self) -> dict[Vertex, int]:
        return {v: n for n, v in enumerate(self.vertices)}

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def neighbours(self, v: Vertex) -> list[Vertex]:
        if v == STAR:
            return [(i, 1) for i, pi in enumerate(self.p, start=1) if pi >= 2]
        i, j = v
        out: list[Vertex] = [STAR if j == 1 else (i, j - 1)]
        if j + 1 <= self.p[i - 1] - 1:
            out.append((i, j + 1))
        return out

    @cached_property
    def cartan(self) -> tuple[tuple[int, ...], ...]:
        n = self.rank
        rows = [[0] * n for _ in range(n)]
        for v in self.vertices:
            a = self.index[v]
            rows[a][a] = 2
            for u in self.neighbours(v):
                rows[a][self.index[u]] = -1
        return tuple(tuple(r) for r in rows)

    def is_finite_type(self) -> bool:
        """ADE test for the star: sum of 1/p_i exceeds t - 2."""
        from fractions import Fraction

        return sum(Fraction(1, a) for a in self.p) > self.t - 2

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.p) + ")"


def parse_weights(text: str) -> WeightData:
    return WeightData(tuple(int(s) for s in text.replace("(", "").replace(")", "").split(",") if s.strip()))


@dataclass(frozen=True)
class LVector:
    """Sum of a_i x_i plus a_c c, not necessarily normal."""

    coeffs: tuple[int, ...]

    @classmethod
    def make(cls, w: WeightData, arms: dict[int, int] | None = None, c: int = 0) -> "LVector":
        a = [0] * w.t
        for i, k in (arms or {}).items():
            a[i - 1] += k
        return cls(tuple(a) + (c,))

    def __add__(self, other: "LVector") -> "LVector":
        return LVector(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "LVector":
        return LVector(tuple(-x for x in self.coeffs))

    def __sub__(self, other: "LVector") -> "LVector":
        return self + (-other)


@dataclass(frozen=True, order=True)
class LNormalForm:
    l: tuple[int, ...]
    lc: int

    def to_vector(self) -> LVector:
        return LVector(self.l + (self.lc,))

    def shifted(self, w: WeightData, i: int, k: int) -> "LNormalForm":
        """Normal form of x + k x_i."""
        return normal_form(self.to_vector() + LVector.make(w, {i: k}), w)

    def plus_c(self, r: int = 1) -> "LNormalForm":
        return LNormalForm(self.l, self.lc + r)

    def mod_c(self) -> "LNormalForm":
        return LNormalForm(self.l, 0)

    def render(self) -> str:
        parts = []
        for i, li in enumerate(self.l, start=1):
            if li:
                parts.append(f"x{i}" if li == 1 else f"{li}x{i}")
        if self.lc:
            parts.append("c" if self.lc == 1 else f"{self.lc}c")
        if not parts:
            return "0"
        return "+".join(parts).replace("+-", "-")


def normal_form(x: LVector | LNormalForm, w: WeightData) -> LNormalForm:
    if isinstance(x, LNormalForm):
        return x
    if len(x.coeffs) != w.t + 1:
        raise ValueError("coefficient vector does not match the weight data")
    lc = x.coeffs[-1]
    l = []
    for a, pi in zip(x.coeffs[:-1], w.p):
        q, r = divmod(a, pi)
        l.append(r)
        lc += q
    return LNormalForm(tuple(l), lc)


def as_normal(x: LVector | LNormalForm, w: WeightData) -> LNormalForm:
    return normal_form(x, w)


def special_elements(w: WeightData) -> tuple[LNormalForm, LNormalForm]:
    """The canonical element c and the dualizing element (t-2)c - sum x_i."""
    c = normal_form(LVector.make(w, c=1), w)
    omega = normal_form(LVector.make(w, {i: -1 for i in range(1, w.t + 1)}, c=w.t - 2), w)
    return c, omega


@dataclass(frozen=True)
class K0Class:
    zi: tuple[int, ...]
    nd: int = 0

    def __add__(self, other: "K0Class") -> "K0Class":
        return K0Class(tuple(a + b for a, b in zip(self.zi, other.zi)), self.nd + other.nd)

    def __neg__(self) -> "K0Class":
        return K0Class(tuple(-a for a in self.zi), -self.nd)

    def __sub__(self, other: "K0Class") -> "K0Class":
        return self + (-other)

    def scale(self, k: int) -> "K0Class":
        return K0Class(tuple(k * a for a in self.zi), k * self.nd)


def zero_class(w: WeightData) -> K0Class:
    return K0Class((0,) * w.rank, 0)


def simple_root(w: WeightData, v: Vertex) -> tuple[int, ...]:
    out = [0] * w.rank
    out[w.index[v]] = 1
    return tuple(out)


def delta(w: WeightData) -> K0Class:
    return K0Class((0,) * w.rank, 1)


def class_of_line_bundle(x: LVector | LNormalForm, w: WeightData) -> K0Class:
    nf = normal_form(x, w)
    zi = [0] * w.rank
    zi[w.index[STAR]] = 1
    for i, li in enumerate(nf.l, start=1):
        for j in range(1, li + 1):
            zi[w.index[(i, j)]] += 1
    return K0Class(tuple(zi), nf.lc)


def class_of_simple_torsion(i: int, j: int, w: WeightData) -> K0Class:
    pi = w.weight(i)
    j %= pi
    zi = [0] * w.rank
    if j != 0:
        zi[w.index[(i, j)]] = 1
        return K0Class(tuple(zi), 0)
    for l in range(1, pi):
        zi[w.index[(i, l)]] -= 1
    return K0Class(tuple(zi), 1)


def class_of_torsion(i: int, j: int, k: int, w: WeightData) -> K0Class:
    """Class of the uniserial torsion sheaf with top S_{ij} and length k."""
    w.weight(i)
    if k < 1:
        raise ValueError("torsion length must be positive")
    total = zero_class(w)
    for m in range(k):
        total = total + class_of_simple_torsion(i, j - m, w)
    return total


def pair_vectors(a: Sequence[int], b: Sequence[int], w: WeightData) -> int:
    C = w.cartan
    return sum(a[r] * C[r][s] * b[s] for r in range(len(a)) if a[r] for s in range(len(b)) if b[s])


def euler_sym(a: K0Class, b: K0Class, w: WeightData) -> int:
    """Symmetrized Euler form; the delta coordinate is radical."""
    return pair_vectors(a.zi, b.zi, w)


def reduce_mod_delta(a: K0Class) -> tuple[int, ...]:
    return a.zi


def vector_sum(vectors: Iterable[Sequence[int]], n: int) -> tuple[int, ...]:
    out = [0] * n
    for v in vectors:
        for r, a in enumerate(v):
            out[r] += a
    return tuple(out)
