"""Exact ring-valued series coefficients against hand-expanded oracles."""

import math

import pytest

from mirrorkit import rings, series, toric


def test_pt_cohomology_matches_factorial_oracle():
    model = toric.catalog_model("pt")
    S = series.series_H(model, None, dmax=6)
    field = S.field
    z = field.var("z")
    for d in range(0, 7):
        # independent oracle: 1 / ((-z)^d d!)
        expect = field.one / (((-z) ** d) * field.const(math.factorial(d)))
        got = S.coefficient((d,))
        assert (got.coords[0] - expect).is_zero
        assert (got - S.ring.unit(field).scale(expect)).is_zero


def test_pt_cohomology_closed_form_agrees():
    model = toric.catalog_model("pt")
    S = series.series_H(model, None, dmax=6)
    field = S.field
    for d in range(-2, 7):
        cf = series.closed_form_pt_H(field, (d,))
        assert (S.coefficient((d,)).coords[0] - cf).is_zero


def test_pt_k_theory_matches_q_factorial_oracle():
    model = toric.catalog_model("pt")
    S = series.series_K(model, None, dmax=6)
    field = S.field
    q = field.var("q")
    for d in range(0, 7):
        denom = field.one
        for r in range(1, d + 1):
            denom = denom * (field.one - q ** r)
        got = S.coefficient((d,))
        assert (got.coords[0] * denom - field.one).is_zero
        cf = series.closed_form_pt_K(field, (d,))
        assert (got.coords[0] - cf).is_zero


def test_p1_cohomology_degree_one_expansion():
    # both columns contribute (p - z), so the coefficient is (p - z)^-2
    # = 1/z^2 + (2/z^3) p in the basis (1, p) with p^2 = 0
    model = toric.catalog_model("P1")
    S = series.series_H(model, None, dmax=2)
    field = S.field
    z = field.var("z")
    c = S.coefficient((1,))
    assert (c.coords[0] - field.one / (z * z)).is_zero
    assert (c.coords[1] - field.const(2) / (z ** 3)).is_zero


def test_p1_cohomology_negative_degree_is_reflected_product():
    # at d = -1 the reciprocal flips to the product over r = 0, -1, ...,
    # which includes the r = 0 factor p, and p * p = 0 kills d <= -2
    model = toric.catalog_model("P1")
    S = series.series_H(model, None, dmax=3)
    field = S.field
    z = field.var("z")
    c = S.coefficient((-1,))
    # ((p)(p + z))^2 = (p^2 + pz)^2 = (pz)^2 = 0 in the chain ring
    assert c.is_zero
    assert S.coefficient((-2,)).is_zero


def test_p1_k_theory_degree_one_expansion():
    # (1 - P q)^-2 over the basis (1, (1-P)):
    # with n = 1 - P, (1 - P q) = (1 - q) + q n, n^2 = 0
    model = toric.catalog_model("P1")
    S = series.series_K(model, None, dmax=2)
    field = S.field
    q = field.var("q")
    c = S.coefficient((1,))
    one = field.one
    assert (c.coords[0] - one / ((one - q) * (one - q))).is_zero
    assert (c.coords[1] + field.const(2) * q / ((one - q) ** 3)).is_zero


def test_p1xp1_factorizes_across_components():
    # independent weights: coefficient at (d1, d2) is the product of the
    # one-factor coefficients, checked on the mixed degree (1, 1)
    model = toric.catalog_model("P1xP1")
    S = series.series_H(model, None, dmax=2)
    field = S.field
    z = field.var("z")
    c = S.coefficient((1, 1))
    # (p1 - z)^-2 (p2 - z)^-2 over basis (1, p1, p2, p1 p2)
    inv2 = field.one / (z * z)
    inv3 = field.const(2) / (z ** 3)
    assert (c.coords[0] - inv2 * inv2).is_zero
    assert (c.coords[1] - inv3 * inv2).is_zero
    assert (c.coords[2] - inv2 * inv3).is_zero
    assert (c.coords[3] - inv3 * inv3).is_zero


def test_equivariant_p1_degree_one():
    model = toric.catalog_model("P1")
    ring = rings.catalog_ring(model, "cohomology", equivariant=True)
    S = series.series_H(model, ring, dmax=1)
    field = S.field
    z = field.var("z")
    a = field.var("lam1") + z
    b = field.var("lam2") + z
    c = S.coefficient((1,))
    # ((p - lam1 - z)(p - lam2 - z))^-1 = 1/(ab) + (a+b)/(ab)^2 p
    assert (c.coords[0] - field.one / (a * b)).is_zero
    assert (c.coords[1] - (a + b) / ((a * b) ** 2)).is_zero


def test_bundle_support_restriction():
    model = toric.catalog_model("P1_O(-1)+O(-1)")
    E = series.series_E(model, None, dmax=3)
    PiE = series.series_PiE(model, None, dmax=3)
    for d in range(-3, 0):
        assert not E.in_support((d,))
        assert E.coefficient((d,)).is_zero
        assert PiE.coefficient((d,)).is_zero
    assert all(d >= (0,) for d in E.degrees())


def test_bundle_series_closed_forms():
    # each summand has pairing degree d; at d >= 1 the twisted factor
    # includes (1 - P)^2 = 0, while the dual-parity factor exactly cancels
    # the base coefficient (1 - P q^r)^-2, leaving the unit
    model = toric.catalog_model("P1_O(-1)+O(-1)")
    E = series.series_E(model, None, dmax=4)
    PiE = series.series_PiE(model, None, dmax=4)
    unit = E.ring.unit(E.field)
    assert (E.coefficient((0,)) - unit).is_zero
    assert (PiE.coefficient((0,)) - unit).is_zero
    for d in range(1, 5):
        assert E.coefficient((d,)).is_zero
        assert (PiE.coefficient((d,)) - unit).is_zero


def test_truncation_box_is_enforced():
    model = toric.catalog_model("P1")
    S = series.series_H(model, None, dmax=2)
    with pytest.raises(ValueError):
        S.coefficient((3,))
    with pytest.raises(ValueError):
        S.coefficient((1, 1))


def test_coefficients_stable_under_box_growth():
    model = toric.catalog_model("P2")
    small = series.series_H(model, None, dmax=2)
    large = series.series_H(model, None, dmax=4)
    for d in range(-2, 3):
        a = small.coefficient((d,))
        b = large.coefficient((d,))
        assert (a - b).is_zero


def test_dump_skips_zero_rows():
    model = toric.catalog_model("pt")
    S = series.series_H(model, None, dmax=2)
    rows = S.dump()
    ds = [tuple(r["d"]) for r in rows]
    assert ds == [(0,), (1,), (2,)]
    for r in rows:
        assert set(r) == {"d", "coeff"}
        assert all(isinstance(v, str) for v in r["coeff"].values())
