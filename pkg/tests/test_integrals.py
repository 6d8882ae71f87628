"""Numeric contour integrals against independent references."""

import math

import pytest
from scipy import special

from mirrorkit import integrals, toric
from mirrorkit.errors import (
    ContourDivergence,
    DominantCriticalAmbiguous,
    PoleOnContour,
    QuadratureFailure,
)
from mirrorkit.integrals import IntegralSpec

P1 = toric.catalog_model("P1")
PT = toric.catalog_model("pt")


def test_ray_integral_matches_bessel():
    # phase t + Q/t on the ray gives 2 K_0(2 sqrt(Q)/z)
    for Q, z in ((1.0, 0.5), (2.0, 0.3), (0.5, 0.7)):
        got = integrals.eval_integral_H(IntegralSpec(P1, "h", (Q,), z=z, tol=1e-12))
        ref = 2 * special.kv(0, 2 * math.sqrt(Q) / z)
        assert abs(got.value - ref) / abs(ref) < 1e-12


def test_ray_integral_scaling_identity():
    # t -> sqrt(Q) t maps the integral at (Q, z) to the one at (1, z/sqrt(Q))
    a = integrals.eval_integral_H(IntegralSpec(P1, "h", (2.3,), z=0.4, tol=1e-12))
    b = integrals.eval_integral_H(
        IntegralSpec(P1, "h", (1.0,), z=0.4 / math.sqrt(2.3), tol=1e-12)
    )
    assert abs(a.value - b.value) / abs(a.value) < 1e-12


def test_ray_integral_divergence_guards():
    with pytest.raises(ContourDivergence):
        integrals.eval_integral_H(IntegralSpec(P1, "h", (0.0,), z=0.5))
    with pytest.raises(ContourDivergence):
        integrals.eval_integral_H(IntegralSpec(P1, "h", (1.0,), z=-0.5))
    with pytest.raises(ContourDivergence):
        integrals.eval_integral_H(IntegralSpec(P1, "h", (1.0,), z=0.3j))


def test_fiber_dimension_guards():
    with pytest.raises(QuadratureFailure):
        integrals.eval_integral_H(IntegralSpec(PT, "h", (1.0,), z=0.5))
    p1xp1 = toric.catalog_model("P1xP1")
    with pytest.raises(QuadratureFailure):
        integrals.eval_integral_H(IntegralSpec(p1xp1, "h", (1.0, 1.0), z=0.5))
    with pytest.raises(QuadratureFailure):
        integrals.eval_integral_K(IntegralSpec(p1xp1, "k", (1.0, 1.0), q=0.5))
    with pytest.raises(QuadratureFailure):
        integrals.check_equation_numeric(P1, "x", (1.0,), z=0.5)


def test_pochhammer_reciprocal_against_finite_product():
    X, q = 0.3 + 0.1j, 0.4
    direct = 1.0
    for r in range(200):
        direct *= 1.0 / (1.0 - X * q ** r)
    got = integrals.pochhammer_reciprocal(X, q)
    assert abs(got - direct) / abs(direct) < 1e-13


def test_pochhammer_series_identity_exact():
    rep = integrals.pochhammer_identity_check(order=8)
    assert rep["order"] == 8
    assert len(rep["coefficients_match"]) == 9
    assert rep["all_match"]


def test_circle_integral_pole_guards():
    with pytest.raises(PoleOnContour):
        integrals.eval_integral_K(IntegralSpec(P1, "k", (0.1,), q=1.5))
    # radius 1 puts the r = 0 pole of the amplitude exactly on the contour
    with pytest.raises(PoleOnContour):
        integrals.eval_integral_K(IntegralSpec(P1, "k", (0.1,), q=0.5, radius=1.0))


def test_zero_dimensional_circle_integral_is_closed_form():
    got = integrals.eval_integral_K(IntegralSpec(PT, "k", (0.1,), q=0.5))
    assert got.nodes == 1
    ref = integrals.pochhammer_reciprocal(0.1, 0.5)
    assert abs(got.value - ref) < 1e-14


def test_equation_residuals_k_flavor():
    rep = integrals.check_equation_numeric(PT, "k", (0.1,), q=0.5)
    assert rep["max_residual"] < 1e-12
    rep = integrals.check_equation_numeric(P1, "k", (0.1,), q=0.5, tol=1e-11)
    assert rep["max_residual"] < 1e-10
    assert rep["evaluations"] >= 3


def test_equation_residuals_h_flavor():
    rep = integrals.check_equation_numeric(PT, "h", (0.3,), z=0.25)
    assert rep["max_residual"] < 1e-12
    rep = integrals.check_equation_numeric(P1, "h", (1.0,), z=0.5, tol=1e-10)
    assert rep["max_residual"] < 1e-8


def test_quadrature_refinement_is_monotone():
    coarse = integrals.eval_integral_H(IntegralSpec(P1, "h", (1.0,), z=0.5, tol=1e-4))
    fine = integrals.eval_integral_H(IntegralSpec(P1, "h", (1.0,), z=0.5, tol=1e-12))
    assert fine.nodes >= coarse.nodes
    assert fine.error_estimate <= coarse.error_estimate
    ref = 2 * special.kv(0, 4.0)
    assert abs(fine.value - ref) <= abs(coarse.value - ref) + 1e-13


def test_gaussian_calibration():
    rep = integrals.gaussian_calibration([0.2, 0.1 + 0.05j])
    assert rep["max_deviation"] < 1e-10


def test_stationary_phase_tracks_first_correction():
    # the ratio to the leading term is 1 - z/16 + O(z^2) here
    zs = (0.2, 0.1, 0.05)
    rep = integrals.stationary_phase_compare(P1, (1.0,), list(zs))
    devs = [row["deviation"] for row in rep["rows"]]
    for dev, z in zip(devs, zs):
        assert abs(dev - z / 16) / (z / 16) < 0.1
    assert devs[1] < 0.6 * devs[0]
    assert devs[2] < 0.6 * devs[1]


def test_stationary_phase_needs_ray_point():
    # at negative Q both critical points leave the positive ray
    with pytest.raises(DominantCriticalAmbiguous):
        integrals.stationary_phase_compare(P1, (-1.0,), [0.1])
