"""Critical-point solvers against closed forms of the catalog models."""

import cmath

import pytest

from mirrorkit import critical, toric
from mirrorkit.critical import SolverConfig
from mirrorkit.errors import DegenerateCritical, IncompleteCriticalSet, NoConvergence


def _by_real(points):
    return sorted(points, key=lambda pt: pt.p[0].real)


def test_point_model_single_critical_point():
    model = toric.catalog_model("pt")
    sample = critical.critical_points_H(model, (0.7,))
    assert len(sample.points) == 1
    pt = sample.points[0]
    assert abs(pt.p[0] - 0.7) < 1e-12
    assert abs(pt.f - 0.7) < 1e-12
    assert abs(pt.hessian - 1.0) < 1e-12


def test_p1_closed_form_points():
    # p^2 = Q: at Q = 4 the points are p = +-2 with value 2p and Hessian 2p
    model = toric.catalog_model("P1")
    sample = critical.critical_points_H(model, (4.0,))
    assert len(sample.points) == 2
    lo, hi = _by_real(sample.points)
    assert abs(lo.p[0] + 2.0) < 1e-10 and abs(hi.p[0] - 2.0) < 1e-10
    assert abs(lo.f + 4.0) < 1e-10 and abs(hi.f - 4.0) < 1e-10
    assert abs(lo.hessian + 4.0) < 1e-10 and abs(hi.hessian - 4.0) < 1e-10


def test_p2_cube_roots():
    model = toric.catalog_model("P2")
    sample = critical.critical_points_H(model, (1.0,))
    assert len(sample.points) == 3
    for pt in sample.points:
        p = pt.p[0]
        assert abs(p ** 3 - 1.0) < 1e-10
        assert abs(pt.f - 3 * p) < 1e-9
        assert abs(pt.hessian - 3 * p * p) < 1e-9


def test_p1xp1_product_points():
    model = toric.catalog_model("P1xP1")
    sample = critical.critical_points_H(model, (1.0, 1.0))
    assert len(sample.points) == 4
    got = {(round(pt.p[0].real), round(pt.p[1].real)) for pt in sample.points}
    assert got == {(1, 1), (1, -1), (-1, 1), (-1, -1)}


def test_sampling_is_deterministic():
    model = toric.catalog_model("P2")
    Q = (0.8 + 0.3j,)
    a = critical.critical_points_H(model, Q)
    b = critical.critical_points_H(model, Q)
    assert len(a.points) == len(b.points)
    for pa, pb in zip(a.points, b.points):
        assert pa.p == pb.p
        assert pa.hessian == pb.hessian


def test_point_count_stable_under_seed_doubling():
    model = toric.catalog_model("P2")
    Q = (0.8 + 0.1j,)
    base = critical.critical_points_H(model, Q)
    dense = critical.critical_points_H(model, Q, config=SolverConfig(seeds=128))
    assert len(base.points) == len(dense.points) == 3
    for pa, pb in zip(base.points, dense.points):
        assert abs(pa.p[0] - pb.p[0]) < 1e-9


def test_deduped_points_are_separated():
    model = toric.catalog_model("P2")
    sample = critical.critical_points_H(model, (1.3 - 0.4j,))
    cfg = SolverConfig()
    pts = [pt.p for pt in sample.points]
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            gap = max(abs(x - y) for x, y in zip(pts[a], pts[b]))
            assert gap > cfg.dedupe_tol


def test_coordinate_values_follow_weights():
    model = toric.catalog_model("P1xP1")
    sample = critical.critical_points_H(model, (0.9, 1.7))
    for pt in sample.points:
        for j in range(model.N):
            u = sum(model.weights[i][j] * pt.p[i] for i in range(model.K))
            assert abs(u - pt.x[j]) < 1e-12
        assert abs(pt.f - sum(pt.x)) < 1e-12
        assert pt.residual < 1e-10


def test_zero_novikov_rejected():
    model = toric.catalog_model("P1")
    with pytest.raises(NoConvergence):
        critical.critical_points_H(model, (0.0,))
    with pytest.raises(NoConvergence):
        critical.critical_points_K(model, (0.0,))
    with pytest.raises(NoConvergence):
        critical.critical_points_K(model, (0.5,), m=0)


def test_k_variety_order_one_closed_form():
    # (1 - P)^2 = Q: at Q = 1/4 the multipliers are P in {1/2, 3/2}
    model = toric.catalog_model("P1")
    sample = critical.critical_points_K(model, (0.25,), m=1)
    assert sample.root_order == 1
    assert len(sample.points) == 2
    got = sorted(pt.P[0].real for pt in sample.points)
    assert abs(got[0] - 0.5) < 1e-10 and abs(got[1] - 1.5) < 1e-10
    for pt in sample.points:
        assert pt.residual < 1e-10
        prod = 1.0
        for j, X in enumerate(pt.X):
            prod *= X
        assert abs(prod - 0.25) < 1e-8


def test_k_variety_order_two_branches():
    # (1 - P^2)^2 = Q^2: P^2 in {3/4, 5/4}, two consistent root branches each
    model = toric.catalog_model("P1")
    sample = critical.critical_points_K(model, (0.25,), m=2)
    assert len(sample.points) == 8
    hit = set()
    for pt in sample.points:
        sq = pt.P[0] ** 2
        target = min((0.75, 1.25), key=lambda t: abs(sq - t))
        assert abs(sq - target) < 1e-8
        hit.add(target)
    assert hit == {0.75, 1.25}
    assert sample.diagnostics["solutions_without_consistent_branch"] == []
    for pt in sample.points:
        assert abs(pt.X[0] * pt.X[1] - 0.25) < 1e-8
        assert all(t in (0, 1) for t in pt.branch)


def test_power_map_lands_on_order_one_variety():
    model = toric.catalog_model("P1")
    # hand instance: P = 3, Q = 8 sits on the order-2 variety since
    # (1 - 9)^2 = 64 = Q^2, and its square lands on the order-1 variety
    assert critical.lm_residual(model, (3.0,), (8.0,), 2) < 1e-14
    assert critical.lm_residual(model, (9.0,), (64.0,), 1) < 1e-14
    for m in (2, 3):
        sample = critical.critical_points_K(model, (0.25,), m=m)
        rep = critical.adams_check(sample, tol=1e-9)
        assert rep["all_ok"]
        assert rep["root_order"] == m
        assert rep["max_residual"] < 1e-9


def test_residue_pairing_closed_form():
    model = toric.catalog_model("P1")
    pair_11 = critical.residue_pairing(model, (4.0,))
    assert abs(pair_11) < 1e-10  # 1/4 + 1/(-4)
    pair_p1 = critical.residue_pairing(model, (4.0,), phi=lambda p: p[0])
    assert abs(pair_p1 - 1.0) < 1e-10  # 2/4 + (-2)/(-4)


def test_residue_pairing_requires_full_critical_set():
    model = toric.catalog_model("P1")
    with pytest.raises(IncompleteCriticalSet):
        critical.residue_pairing(model, (4.0,), expected_count=5)


def test_hessian_direct_matches_formula():
    for name, Q in (("P1", (0.9 + 0.2j,)), ("P2", (1.1,))):
        model = toric.catalog_model(name)
        sample = critical.critical_points_H(model, Q)
        for pt in sample.points:
            hf = critical.hessian_formula(model, pt.p)
            hd = critical.hessian_direct(model, pt)
            assert abs(hf - hd) / abs(hf) < 1e-8


def test_hessian_direct_rejects_multiplicative_points():
    model = toric.catalog_model("P1")
    sample = critical.critical_points_K(model, (0.25,), m=1)
    with pytest.raises(DegenerateCritical):
        critical.hessian_direct(model, sample.points[0])


def test_classical_points_solve_vertex_systems():
    model = toric.catalog_model("P1")
    lam = (0.3, -0.7j)
    pts = dict(critical.classical_points(model, lam))
    assert abs(pts[(0,)][0] - 0.3) < 1e-14
    assert abs(pts[(1,)][0] + 0.7j) < 1e-14


def test_localization_report():
    model = toric.catalog_model("P1")
    lam = (0.3, -0.7j)
    pairs = [
        (lambda p: 1.0, lambda p: 1.0, "unit"),
        (lambda p: p[0], lambda p: 1.0, "linear"),
    ]
    rep = critical.localization_check(model, lam, steps=40, target=1e-8, pairs=pairs)
    assert rep["all_tracked"]
    assert abs(rep["final_Q_magnitude"] - 1e-8) < 1e-12
    # Hessians approach the vertex products lam_i - lam_j
    for row in rep["branches"]:
        assert row["hessian_error"] < 1e-6
    by_label = {r["pair"]: r for r in rep["pairings"]}
    assert by_label["unit"]["difference"] < 1e-6
    assert by_label["linear"]["difference"] < 1e-6
    got = complex(*by_label["linear"]["pairing"])
    assert abs(got - 1.0) < 1e-6


def test_mori_filter_catalog_counts():
    for name, count in (("P1", 2), ("P2", 3), ("P1xP1", 4)):
        model = toric.catalog_model(name)
        sample = critical.critical_points_H(model, (1.0,) * model.K)
        rep = critical.mori_limit_filter(model, sample)
        assert rep["bounded_count"] == count
        assert rep["escaping"] == []


def test_mori_filter_validates_ray():
    model = toric.catalog_model("P1xP1")
    sample = critical.critical_points_H(model, (1.0, 1.0))
    with pytest.raises(NoConvergence):
        critical.mori_limit_filter(model, sample, ray=(1,))
    with pytest.raises(NoConvergence):
        critical.mori_limit_filter(model, sample, ray=(1, 0))
