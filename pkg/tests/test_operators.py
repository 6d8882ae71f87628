"""Shift-operator algebra and exact annihilator verification."""

import pytest

from mirrorkit import operators, rings, series, toric
from mirrorkit.errors import MissingBundleData, RingMismatch
from mirrorkit.operators import ShiftOperator

CATALOG = ("pt", "P1", "P2", "P1xP1")


def _setup(name="P1", mode="cohomology"):
    model = toric.catalog_model(name)
    ring = rings.catalog_ring(model, mode)
    return model, ring, ring.field


def test_translation_commutes_past_novikov_with_q_weight():
    # T^v X^e = q^{<v,e>} X^e T^v
    model, ring, field = _setup("P1xP1", "k_theory")
    tr = ShiftOperator.q_translation(ring, field, 2, (2, -1))
    nov = ShiftOperator.novikov(ring, field, 2, (3, 4))
    lhs = tr * nov
    rhs = (nov * tr).scale(field.monomial("q", 2 * 3 + (-1) * 4))
    assert lhs.describe() == rhs.describe()


def test_euler_factor_commutes_past_novikov_with_offset():
    # z*(<w,d>+c) X^e = X^e z*(<w,d>+c+<w,e>)
    model, ring, field = _setup("P1xP1", "cohomology")
    w = (1, -2)
    nov = ShiftOperator.novikov(ring, field, 2, (2, 1))
    lhs = ShiftOperator.euler_factor(ring, field, 2, w, 3) * nov
    rhs = nov * ShiftOperator.euler_factor(ring, field, 2, w, 3 + (1 * 2 + (-2) * 1))
    assert lhs.describe() == rhs.describe()


@pytest.mark.parametrize("name", CATALOG)
def test_h_system_annihilates_series(name):
    model = toric.catalog_model(name)
    system = operators.build_system_H(model)
    s = series.series_H(model, None, dmax=3)
    report = operators.verify(system, s)
    assert report.passed
    assert report.checked > 0


@pytest.mark.parametrize("name", CATALOG)
def test_k_system_annihilates_series(name):
    model = toric.catalog_model(name)
    system = operators.build_system_K(model)
    s = series.series_K(model, None, dmax=3)
    report = operators.verify(system, s)
    assert report.passed
    assert report.checked > 0


def test_bundle_systems_annihilate_twisted_series():
    model = toric.catalog_model("P1_O(-1)+O(-1)")
    for build, make in (
        (operators.build_system_E, series.series_E),
        (operators.build_system_PiE, series.series_PiE),
    ):
        system = build(model)
        s = make(model, None, dmax=3)
        report = operators.verify(system, s)
        assert report.passed
        assert report.checked > 0


def test_bundle_system_requires_bundle_data():
    model = toric.catalog_model("P1")
    with pytest.raises(MissingBundleData):
        operators.build_system_E(model)
    with pytest.raises(MissingBundleData):
        operators.build_system_PiE(model)


def _corrupt(s, bad_degree):
    unit = s.ring.unit(s.field)

    def fn(d):
        c = s.coefficient(d)
        return c + unit if d == bad_degree else c

    return series.TruncatedSeries(s.model, s.mode, s.ring, s.field, s.dmax, s.kind, fn)


def test_verify_flags_corrupted_h_coefficient_at_exact_degree():
    model = toric.catalog_model("P1")
    system = operators.build_system_H(model)
    bad = _corrupt(series.series_H(model, None, dmax=3), (2,))
    report = operators.verify(system, bad)
    assert not report.passed
    assert [tuple(e["d"]) for e in report.failures()] == [(2,)]
    assert "residual" in report.failures()[0]


def test_verify_flags_corrupted_k_coefficient_at_both_reading_degrees():
    # the left side reads degree d, the shifted right side reads d-1,
    # so one bad coefficient at d=1 must fail exactly at d=1 and d=2
    model = toric.catalog_model("P1")
    system = operators.build_system_K(model)
    bad = _corrupt(series.series_K(model, None, dmax=3), (1,))
    report = operators.verify(system, bad)
    assert {tuple(e["d"]) for e in report.failures()} == {(1,), (2,)}


def test_verify_rejects_mismatched_rings():
    model = toric.catalog_model("P1")
    system = operators.build_system_H(model)
    s = series.series_K(model, None, dmax=2)
    with pytest.raises(RingMismatch):
        operators.verify(system, s)


NEG_WEIGHTS = ((1, 1, -1),)
DIM1_H = {"basis": ["1"], "table": {"1*1": [1]}, "generators": {"p1": [0]}}
DIM1_K = {"basis": ["1"], "table": {"1*1": [1]}, "generators": {"P1": [1]}}


def test_negative_weight_equivariant_h_system():
    # a negative column moves its factors behind the degree shift; only the
    # equivariant deformation keeps the one-dimensional series nonzero
    model = toric.ToricModel(weights=NEG_WEIGHTS, name="conifold-slice")
    ring = rings.catalog_ring(model, "cohomology", equivariant=True, table=DIM1_H)
    s = series.series_H(model, ring, dmax=3)
    assert not s.coefficient((1,)).is_zero
    system = operators.build_system_H(model, ring=ring)
    report = operators.verify(system, s)
    assert report.passed
    assert report.checked > 0


def test_negative_weight_equivariant_k_system():
    # dmax kept small: four-variable rational coefficients grow quickly here
    model = toric.ToricModel(weights=NEG_WEIGHTS, name="conifold-slice")
    ring = rings.catalog_ring(model, "k_theory", equivariant=True, table=DIM1_K)
    s = series.series_K(model, ring, dmax=2, equivariant=True)
    assert not s.coefficient((1,)).is_zero
    system = operators.build_system_K(model, ring=ring)
    report = operators.verify(system, s)
    assert report.passed
    assert report.checked > 0


def test_scalar_shift_identity_battery():
    rows = operators.scalar_shift_identity_check(r_max=4, order=8)
    assert [r["r"] for r in rows] == [0, 1, 2, 3, 4]
    assert all(r["ok"] for r in rows)


def test_report_json_shape():
    model = toric.catalog_model("pt")
    system = operators.build_system_H(model)
    report = operators.verify(system, series.series_H(model, None, dmax=2))
    d = report.to_json_dict()
    assert set(d) == {
        "model", "kind", "representation", "dmax", "safe_window",
        "degrees_checked", "all_pass", "normalization_notes", "entries",
    }
    assert d["all_pass"] is True
    assert d["degrees_checked"] == len(d["entries"])


def test_system_description_is_printable():
    model = toric.catalog_model("P1")
    system = operators.build_system_K(model)
    assert system.max_shift() == 1
    text = system.pretty()
    assert isinstance(text, str) and text
