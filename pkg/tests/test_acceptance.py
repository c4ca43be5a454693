"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import itertools
import random
import time

import pytest

from wplmut import hall
from wplmut.kacmoody import build_algebra, phi_dictionary, verify_corollary_for_Rx, verify_model_integrity, verify_omega_tilde
from wplmut.lattice import (
    LNormalForm,
    LVector,
    WeightData,
    class_of_line_bundle,
    class_of_simple_torsion,
    class_of_torsion,
    euler_sym,
    zero_class,
)
from wplmut.mutation import (
    REMARK_ARM,
    REMARK_WEIGHTS,
    mutation_reflection,
    verify_remark_example,
    verify_sign_coherence,
    verify_simple_reflection_theorem,
)
from wplmut.quantum import defining_relations, equality_oracle, verify_lusztig_appendix
from wplmut.rootcat import verify_exp_ad_theorems, verify_upsilon_braid
from wplmut.theta import star_algebra, star_model, theta_and_theorem5
from wplmut.weyl import verify_linear_identities


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, summary: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}: {summary}")
        assert ok, summary

    return emit


def _fails(reps):
    return [c for r in reps for c in r.failures]


def _ids(checks, k=4):
    out = ", ".join(c.id for c in checks[:k])
    return out + (" ..." if len(checks) > k else "")


def test_criterion_01_weyl_identities(verdict):
    t0 = time.perf_counter()
    reps = [verify_linear_identities(n) for n in range(2, 7)]
    dt = time.perf_counter() - t0
    bad = _fails(reps)
    n = sum(len(r.checks) for r in reps)
    verdict(1, not bad and dt < 1.0, f"{n} identities for n=2..6, {len(bad)} failures, {dt:.3f}s (limit 1s)")


def test_criterion_02_simple_reflection_theorem(verdict):
    rows, ok = [], True
    for p in [(2, 3), (2, 2, 2), (3, 3, 3), (2, 3, 5), (2, 3, 7)]:
        t0 = time.perf_counter()
        rep = verify_simple_reflection_theorem(WeightData(p))
        dt = time.perf_counter() - t0
        ok &= rep.ok and dt < 1.0
        rows.append(f"{p}:{len(rep.checks)}/{len(rep.failures)}f/{dt:.3f}s")
    verdict(2, ok, "; ".join(rows))


def test_criterion_03_remark(verdict):
    rep = verify_remark_example()
    x = LVector.make(REMARK_WEIGHTS, {REMARK_ARM: 2})
    coh = verify_sign_coherence(x, REMARK_WEIGHTS)
    bij = next(c for c in rep.checks if c.id == "remark/root-bijection")
    verdict(3, rep.ok and coh.ok,
            f"{len(rep.checks)} checks ({len(rep.failures)} failures), root bijection {bij.lhs}/{bij.rhs}, "
            f"sign coherence {coh.checks[0].status}")


def test_criterion_04_upsilon_braid(verdict):
    t0 = time.perf_counter()
    w = WeightData((2, 3))
    twists = [LNormalForm(l, lc) for l in itertools.product(range(2), range(3)) for lc in (-2, -1, 0, 1)]
    reps = [verify_upsilon_braid(w, x, k) for x in twists for k in (1, 2)]
    d4 = WeightData((2, 2, 2))
    reps += [verify_upsilon_braid(d4, LVector.make(d4, a), 1) for a in ({}, {1: 1})]
    dt = time.perf_counter() - t0
    bad = _fails(reps)
    n = sum(len(r.checks) for r in reps)
    verdict(4, not bad and dt < 5.0 and len(twists) == 24,
            f"{len(twists)} twists of (2,3) x 2 arms + (2,2,2) arm 1: {n} generator checks, "
            f"{len(bad)} failures, {dt:.2f}s (limit 5s)")


def test_criterion_05_exp_ad(verdict):
    w = WeightData((2, 3))
    xs = [LVector.make(w), LVector.make(w, {1: 1}), LVector.make(w, {2: 1}), LVector.make(w, {2: 2})]
    reps = [verify_exp_ad_theorems(w, x) for x in xs]
    bad = _fails(reps)
    n = sum(len(r.checks) for r in reps)
    verdict(5, not bad, f"{n} checks, {len(bad)} failures: {_ids(bad)}")


def test_criterion_06_corollary(verdict):
    t0 = time.perf_counter()
    rows, ok = [], True
    for p in [(2, 2), (2, 2, 2)]:
        a = build_algebra(WeightData(p))
        rep = verify_corollary_for_Rx(a)
        ok &= rep.ok
        chars = [c.detail for c in rep.checks if c.detail.startswith("character")]
        rows.append(f"{p} dim {a.dim}: {len(rep.checks) - len(rep.failures)}/{len(rep.checks)} ({len(chars)} characters)")
    dt = time.perf_counter() - t0
    verdict(6, ok and dt < 30.0, "; ".join(rows) + f"; {dt:.1f}s (limit 30s)")


def test_criterion_07_km_integrity(verdict):
    reps = []
    for p in [(2, 2), (2, 2, 2), (2, 3)]:
        a = build_algebra(WeightData(p))
        reps += [verify_model_integrity(a), verify_omega_tilde(a)]
    bad = _fails(reps)
    n = sum(len(r.checks) for r in reps)
    verdict(7, not bad, f"{n} checks (Jacobi, Serre, omega-tilde) on (2,2), (2,2,2), (2,3); {len(bad)} failures")


def test_criterion_08_hall_appendix(verdict):
    hall.set_cache(hall.HallCache(None))
    hall.monomial_counts.cache_clear()
    reps = [hall.verify_appendix_hall(n, (2, 3)) for n in (2, 3, 4)]
    reps += [hall.verify_appendix_hall(n, (5,)) for n in (2, 3)]
    t0 = time.perf_counter()
    reps.append(hall.verify_appendix_hall(4, (5,)))
    dt = time.perf_counter() - t0
    bad = _fails(reps)
    n = sum(len(r.checks) for r in reps)
    verdict(8, not bad and dt < 60.0, f"{n} checks for n=2,3,4 q=2,3,5, {len(bad)} failures; n=4 q=5 cold {dt:.2f}s")


def test_criterion_09_lusztig_appendix(verdict):
    reps = [verify_lusztig_appendix(n, (2, 3, 5), "probabilistic") for n in (2, 3, 4)]
    reps += [verify_lusztig_appendix(n, (2, 3, 5), "exact") for n in (2, 3)]
    bad = _fails(reps)
    n = sum(len(r.checks) for r in reps)
    verdict(9, not bad, f"{n} checks (probabilistic n<=4, exact n<=3), {len(bad)} failures")


def test_criterion_10_theorem5(verdict):
    t0 = time.perf_counter()
    exact = theta_and_theorem5(WeightData((2, 2)), (2, 3, 5), "exact")
    prob = theta_and_theorem5(WeightData((2, 3)), (2, 3, 5), "probabilistic")
    dt = time.perf_counter() - t0
    bad = _fails([exact, prob])
    verdict(10, not bad and dt < 600,
            f"(2,2) exact {len(exact.checks)} checks, (2,3) probabilistic {len(prob.checks)} checks, "
            f"{len(bad)} failures: {_ids(bad)}; {dt:.1f}s")


def test_criterion_11_property_suites(verdict):
    rng = random.Random(20261016)
    problems = []

    # (delta, x) = 0 on random classes, delta assembled from an arm period
    for _ in range(1000):
        w = WeightData(rng.choice([(2, 3), (2, 2, 2), (3, 4), (2, 3, 7)]))
        x = zero_class(w)
        for _ in range(rng.randint(1, 4)):
            if rng.random() < 0.5:
                arms = {i: rng.randint(-6, 6) for i in range(1, w.t + 1)}
                part = class_of_line_bundle(LVector.make(w, arms, rng.randint(-3, 3)), w)
            else:
                i = rng.randint(1, w.t)
                part = class_of_torsion(i, rng.randint(0, 5), rng.randint(1, w.weight(i)), w)
            x = x + part.scale(rng.randint(-3, 3))
        d = class_of_simple_torsion(1, 0, w)
        for j in range(1, w.weight(1)):
            d = d + class_of_simple_torsion(1, j, w)
        if euler_sym(d, x, w) != 0:
            problems.append("delta pairing")
            break

    # mutation operators: form-preserving involutions, checked on every basis vector
    for p in [(2, 3), (2, 2, 2), (2, 3, 7)]:
        w = WeightData(p)
        for l in itertools.product(*(range(a) for a in p)):
            op = mutation_reflection(LNormalForm(l, 0), w)
            basis = [tuple(int(k == r) for k in range(w.rank)) for r in range(w.rank)]
            if not op.action.preserves_form() or any(op.apply(op.apply(e)) != e for e in basis):
                problems.append(f"mutation {p} {l}")

    for p in [(2, 2), (2, 2, 2)]:
        d = phi_dictionary(build_algebra(WeightData(p)), depth=3)
        if d.conflicts:
            problems.append(f"phi {p}: {d.conflicts[0]}")

    configs = [(hall.A(2), 2), (hall.A(3), 2), (hall.cyclic(2), 3), (hall.cyclic(3), 2)]
    for Q, q in configs:
        dims = [dv for dv in itertools.product(range(2), repeat=Q.n) if any(dv)]
        for _ in range(200):
            a, b, c = (hall.HallElement.basis(rng.choice(hall.enumerate_isoclasses(Q, rng.choice(dims))), q)
                       for _ in range(3))
            if hall.hall_product(hall.hall_product(a, b), c) != hall.hall_product(a, hall.hall_product(b, c)):
                problems.append(f"associativity {Q.key}")
                break

    smoke = 0
    for p in [(2, 2), (2, 3)]:
        w = WeightData(p)
        alg, model = star_algebra(w), star_model(w)
        for label, lhs, rhs in defining_relations(alg):
            smoke += 1
            if not equality_oracle(lhs, rhs, model, (2, 3, 5)).ok:
                problems.append(f"smoke {p} {label}")

    verdict(11, not problems,
            f"1000 delta pairings, mutation involutions, phi depth 3, {len(configs)}x200 Hall triples, "
            f"{smoke} relation smoke checks; problems: {problems[:3] or 'none'}")
