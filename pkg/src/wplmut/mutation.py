"""Mutation operators on K0/Z(delta) and the simple-reflection theorem."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .lattice import (
    STAR,
    K0Class,
    LNormalForm,
    LVector,
    Vertex,
    WeightData,
    class_of_line_bundle,
    class_of_torsion,
    normal_form,
    reduce_mod_delta,
    special_elements,
)
from .reports import Report
from .weyl import (
    StarQuiver,
    WeylElement,
    compose,
    determinant,
    enumerate_roots,
    reflection_in_root,
    simple_reflection,
    solve_integer,
)


@dataclass(frozen=True)
class MutationOperator:
    x: LNormalForm
    action: WeylElement

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.action.apply(v)


def mutation_reflection(x: LVector | LNormalForm, w: WeightData) -> MutationOperator:
    """Reflection in the reduced class of O(x)."""
    nf = normal_form(x, w)
    u = reduce_mod_delta(class_of_line_bundle(nf, w))
    return MutationOperator(nf, reflection_in_root(StarQuiver(w), u))


def verify_simple_reflection_theorem(w: WeightData) -> Report:
    Q = StarQuiver(w)
    rep = Report("mutation", {"weights": list(w.p)})
    ref = 'Theorem "mutations realize simple reflections"'
    r0 = mutation_reflection(LVector.make(w), w).action
    rs = simple_reflection(Q, STAR)
    rep.record(f"mutation/{w}/star", ref, r0 == rs, rs.render(), r0.render())
    for i, pi in enumerate(w.p, start=1):
        for j in range(1, pi):
            a = mutation_reflection(LVector.make(w, {i: j - 1}), w).action
            b = mutation_reflection(LVector.make(w, {i: j}), w).action
            composite = compose(a, b, a)
            target = simple_reflection(Q, (i, j))
            rep.record(f"mutation/{w}/r{i}{j}", ref, composite == target, target.render(), composite.render())
    return rep


# ---------------------------------------------------------------------------
# perpendicular categories through the L-order and Serre duality


def l_nonnegative(x: LVector | LNormalForm, w: WeightData) -> bool:
    """x >= 0 in L, i.e. Hom(O, O(x)) != 0."""
    return normal_form(x, w).lc >= 0


def line_bundle_in_right_perp(y: LNormalForm, x: LNormalForm, w: WeightData) -> bool:
    """O(y) in O(x)^perp: Hom(O(x), O(y)) = 0 = Ext^1(O(x), O(y))."""
    _, om = special_elements(w)
    hom = l_nonnegative(y.to_vector() - x.to_vector(), w)
    ext = l_nonnegative(x.to_vector() + om.to_vector() - y.to_vector(), w)
    return not hom and not ext


def torsion_run(i: int, j: int, k: int, w: WeightData) -> set[int]:
    pi = w.weight(i)
    return {(j - m) % pi for m in range(k)}


def torsion_in_right_perp(i: int, j: int, k: int, x: LNormalForm, w: WeightData) -> bool:
    """Hom(O(x), S) != 0 exactly when S_{i,l_i} is a composition factor."""
    return x.l[i - 1] % w.weight(i) not in torsion_run(i, j, k, w)


def torsion_in_left_perp(i: int, j: int, k: int, x: LNormalForm, w: WeightData) -> bool:
    """Ext^1(S, O(x)) = D Hom(O(x), S(omega)) and S_{ij}(omega) = S_{i,j-1}."""
    return x.l[i - 1] % w.weight(i) not in torsion_run(i, j - 1, k, w)


def right_perp_basis_vectors(x: LNormalForm, w: WeightData) -> list[LNormalForm]:
    """The line bundles O(x - y), 0 < y <= c, spanning K0(O(x)^perp)."""
    out = []
    for y in _interval_elements(w):
        out.append(normal_form(x.to_vector() - y, w))
    return out


def _interval_elements(w: WeightData) -> list[LVector]:
    """Elements 0 < y <= c of L: c and the multiples k x_i with 1 <= k < p_i."""
    out = [LVector.make(w, c=1)]
    for i, pi in enumerate(w.p, start=1):
        out.extend(LVector.make(w, {i: k}) for k in range(1, pi))
    return out


def _lift(v: Sequence[int], gens: list[K0Class]) -> K0Class:
    """Integer combination of gens whose ZI part equals v."""
    n = len(v)
    cols = [g.zi for g in gens]
    # gens has length n; solve exactly
    coeffs = solve_integer(cols, v)
    if any(c.denominator != 1 for c in coeffs):
        raise ValueError("lift is not integral")
    total = K0Class((0,) * n, 0)
    for c, g in zip(coeffs, gens):
        total = total + g.scale(int(c))
    return total


Side = Literal["right", "left"]


def transported_basis(x: LVector | LNormalForm, side: Side, w: WeightData) -> list[K0Class]:
    """Lifts of the reduced classes of O and S_{ij} into K0 of the perpendicular category.

    The right perpendicular category of O(x) has Grothendieck group spanned by
    the classes of O(x - y) for 0 < y <= c; the left one equals the right
    perpendicular category of O(x - omega).  Reduced mod delta every lift is a
    standard basis vector of ZI; the delta coordinate records the lift.
    """
    nf = normal_form(x, w)
    if side == "left":
        _, om = special_elements(w)
        nf = normal_form(nf.to_vector() - om.to_vector(), w)
    elif side != "right":
        raise ValueError(f"unknown side {side}")
    gens = [class_of_line_bundle(y, w) for y in right_perp_basis_vectors(nf, w)]
    if len(gens) != w.rank:
        raise AssertionError("perpendicular basis has wrong size")
    out = []
    for v in w.vertices:
        e = [0] * w.rank
        e[w.index[v]] = 1
        out.append(_lift(e, gens))
    return out


def transported_basis_is_unimodular(x: LVector | LNormalForm, side: Side, w: WeightData) -> bool:
    return abs(determinant([b.zi for b in transported_basis(x, side, w)])) == 1


def express_in_basis(target: K0Class, basis: list[K0Class]) -> tuple[Fraction, ...]:
    """Exact coordinates of a K0 class in the lifted basis; the delta coordinate must agree."""
    coeffs = solve_integer([b.zi for b in basis], target.zi)
    nd = sum(c * b.nd for c, b in zip(coeffs, basis))
    if nd != target.nd:
        raise ValueError("class does not lie in the span of the lifted basis")
    return coeffs


def verify_sign_coherence(x: LVector | LNormalForm, w: WeightData, height_cap: int = 12) -> Report:
    Q = StarQuiver(w)
    nf = normal_form(x, w)
    rs = enumerate_roots(Q, height_cap)
    basis = transported_basis(nf, "right", w)
    rep = Report("sign-coherence", {"weights": list(w.p), "x": nf.render(), "partial": rs.partial})
    ref = 'Prop "transported positive roots" (sign coherence)'
    bad = []
    for r in sorted(rs.roots):
        coeffs = solve_integer([b.zi for b in basis], r)
        if not (all(c >= 0 for c in coeffs) or all(c <= 0 for c in coeffs)) or not any(coeffs):
            bad.append(r)
    rep.record(f"sign/{w}/{nf.render()}", ref, not bad, f"{len(rs.roots)} roots", f"{len(bad)} incoherent",
               detail="partial root set" if rs.partial else "")
    return rep


# ---------------------------------------------------------------------------
# the weight-(1,3) worked example; the weight-3 arm is arm 2 here

REMARK_WEIGHTS = WeightData((1, 3))
REMARK_ARM = 2

# (object, displayed expression in a, b, c) for every position of the AR quiver
REMARK_DIAGRAM: tuple[tuple[str, str], ...] = (
    ("O(-x)[-1]", "-a-b-c"),
    ("S0[-1]", "b+c"),
    ("S1[-1]", "-b"),
    ("O(x)", "a+b"),
    ("O[-1]", "-a"),
    ("S1^(2)[-1]", "c"),
    ("O", "a"),
    ("S1^(2)", "-c"),
    ("O(x)[-1]", "-a-b"),
    ("O(-x)", "a+b+c"),
    ("S0", "-b-c"),
    ("S1", "b"),
)


def parse_expression(expr: str) -> tuple[int, int, int]:
    out = {"a": 0, "b": 0, "c": 0}
    for sign, name in re.findall(r"([+-]?)([abc])", expr):
        out[name] += -1 if sign == "-" else 1
    return out["a"], out["b"], out["c"]


def remark_object_class(name: str) -> K0Class:
    """K0 class of a named object of the example, shifts negating."""
    w, i = REMARK_WEIGHTS, REMARK_ARM
    shift = name.endswith("[-1]")
    base = name[:-4] if shift else name
    if base.startswith("O"):
        inner = base[1:].strip("()") or "0"
        k = {"0": 0, "x": 1, "-x": -1}[inner]
        cls = class_of_line_bundle(LVector.make(w, {i: k}), w)
    else:
        m = re.fullmatch(r"S(\d)(?:\^\((\d)\))?", base)
        if not m:
            raise ValueError(name)
        cls = class_of_torsion(i, int(m.group(1)), int(m.group(2) or 1), w)
    return -cls if shift else cls


def remark_basis() -> list[K0Class]:
    """{[O], [S_1], [S_1^(2)[-1]]}, computed as the transported basis at x = 2x."""
    w = REMARK_WEIGHTS
    return transported_basis(LVector.make(w, {REMARK_ARM: 2}), "right", w)


def verify_remark_example() -> Report:
    w = REMARK_WEIGHTS
    rep = Report("remark-1-3", {"weights": list(w.p), "x": "2x (weight-3 arm)"})
    ref = 'Remark "weight type (1,3)"'
    basis = remark_basis()
    named = [remark_object_class(n) for n in ("O", "S1", "S1^(2)[-1]")]
    rep.record("remark/basis", ref, basis == named, [str(b) for b in basis], [str(b) for b in named])
    x = normal_form(LVector.make(w, {REMARK_ARM: 2}), w)
    roots_seen = set()
    for name, expr in REMARK_DIAGRAM:
        cls = remark_object_class(name)
        coeffs = express_in_basis(cls, basis)
        got = tuple(int(c) for c in coeffs)
        want = parse_expression(expr)
        roots_seen.add(reduce_mod_delta(cls))
        coherent = all(c >= 0 for c in got) or all(c <= 0 for c in got)
        rep.record(f"remark/{name}", ref, got == want and coherent, got, want)
    base_names = ("O(-x)", "O", "O(x)", "S0", "S1", "S1^(2)")
    perp_ok = True
    for name in base_names:
        if name.startswith("O"):
            k = {"O(-x)": -1, "O": 0, "O(x)": 1}[name]
            perp_ok &= line_bundle_in_right_perp(normal_form(LVector.make(w, {REMARK_ARM: k}), w), x, w)
        else:
            j, length = (0, 1) if name == "S0" else (1, 1) if name == "S1" else (1, 2)
            perp_ok &= torsion_in_right_perp(REMARK_ARM, j, length, x, w)
    rep.record("remark/objects-in-perp", ref, perp_ok, "all six objects", "in O(2x)^perp")
    a3 = enumerate_roots(StarQuiver(w)).roots
    rep.record("remark/root-bijection", ref, roots_seen == set(a3) and len(roots_seen) == 12,
               len(roots_seen), len(a3))
    return rep


# ---------------------------------------------------------------------------
# sigma maps


def _star_perp_index(x: LNormalForm, w: WeightData, side: Side) -> int:
    """The unique k with O(kc) in the perpendicular category of O(x)."""
    if side == "left":
        _, om = special_elements(w)
        x = normal_form(x.to_vector() - om.to_vector(), w)
    hits = [k for k in range(x.lc - 2 * w.t - 3, x.lc + 2 * w.t + 4)
            if line_bundle_in_right_perp(LNormalForm((0,) * w.t, k), x, w)]
    if len(hits) != 1:
        raise AssertionError(f"expected a unique perpendicular O(kc), got {hits}")
    return hits[0]


def sigma_closed_form(x: LVector | LNormalForm, w: WeightData) -> tuple[int, int]:
    """Star values as displayed in the text: sum l_i + l -/+ 1."""
    nf = normal_form(x, w)
    return sum(nf.l) + nf.lc - 1, sum(nf.l) + nf.lc + 1


def sigma_maps(x: LVector | LNormalForm, w: WeightData) -> tuple[dict[Vertex, int], dict[Vertex, int]]:
    """Right and left sigma maps from the perpendicularity criteria."""
    nf = normal_form(x, w)
    right: dict[Vertex, int] = {STAR: _star_perp_index(nf, w, "right")}
    left: dict[Vertex, int] = {STAR: _star_perp_index(nf, w, "left")}
    for (i, j) in w.vertices[1:]:
        li = nf.l[i - 1]
        right[(i, j)] = -1 if j == li else 0
        left[(i, j)] = -1 if j % w.weight(i) == (li + 1) % w.weight(i) else 0
    return right, left


def verify_sigma_maps(w: WeightData, lc_range: Sequence[int] = (-1, 0, 1)) -> Report:
    from itertools import product

    rep = Report("sigma", {"weights": list(w.p)})
    ref = 'Prop "attach to each x a map"'
    for ls in product(*(range(pi) for pi in w.p)):
        for lc in lc_range:
            nf = LNormalForm(tuple(ls), lc)
            right, left = sigma_maps(nf, w)
            ok = True
            for (i, j) in w.vertices[1:]:
                in_r = torsion_in_right_perp(i, j, 1, nf, w)
                in_l = torsion_in_left_perp(i, j, 1, nf, w)
                ok &= (right[(i, j)] == 0) == in_r
                ok &= (left[(i, j)] == 0) == in_l
            closed = sigma_closed_form(nf, w)
            note = ""
            if closed != (right[STAR], left[STAR]):
                note = f"closed form gives star values {closed}"
            rep.record(f"sigma/{w}/{nf.render()}", ref, ok, (right[STAR], left[STAR]), closed, detail=note)
    return rep


# ---------------------------------------------------------------------------
# Grothendieck-level consequence used by the object-level mutation


def reflected_class(x: LVector | LNormalForm, cls: K0Class, w: WeightData) -> tuple[int, ...]:
    return mutation_reflection(x, w).apply(reduce_mod_delta(cls))
