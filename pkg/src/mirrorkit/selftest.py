"""Built-in acceptance checks.

Each criterion function recomputes one contract from scratch and returns a
row with a passed flag and enough detail to audit the run. run_all aggregates
the rows into a deterministic report; the final criterion repeats the whole
battery and compares report bytes, which pins down determinism end to end.
"""

import cmath
import math
import random

from . import critical as _critical
from . import integrals as _integrals
from . import operators as _operators
from . import reports as _reports
from . import series as _series
from . import toric as _toric

CATALOG = ("pt", "P1", "P2", "P1xP1")
BUNDLE_MODEL = "P1_O(-1)+O(-1)"


def _row(ident, title, passed, details):
    return {"criterion": ident, "title": title, "passed": bool(passed), "details": details}


def criterion_1():
    """Differential systems annihilate the cohomological series exactly."""
    per = {}
    ok = True
    for name in CATALOG:
        model = _toric.catalog_model(name)
        s = _series.series_H(model, None, 6)
        system = _operators.build_system_H(model)
        rep = _operators.verify(system, s)
        per[name] = {"checked": rep.checked, "all_pass": rep.passed}
        ok = ok and rep.passed and rep.checked > 0
    return _row(1, "exact annihilation, additive flavor, Dmax=6", ok, per)


def criterion_2():
    """q-difference systems annihilate the multiplicative series exactly."""
    per = {}
    ok = True
    for name in CATALOG:
        model = _toric.catalog_model(name)
        s = _series.series_K(model, None, 5)
        system = _operators.build_system_K(model)
        rep = _operators.verify(system, s)
        per[name] = {"checked": rep.checked, "all_pass": rep.passed}
        ok = ok and rep.passed and rep.checked > 0
    return _row(2, "exact annihilation, multiplicative flavor, Dmax=5", ok, per)


def criterion_3():
    """Bundle-twisted systems on the two-summand line model, exactly."""
    model = _toric.catalog_model(BUNDLE_MODEL)
    per = {}
    ok = True
    for label, build, make in (
        ("plain", _operators.build_system_E, _series.series_E),
        ("dual", _operators.build_system_PiE, _series.series_PiE),
    ):
        s = make(model, None, 5)
        rep = _operators.verify(build(model), s)
        per[label] = {"checked": rep.checked, "all_pass": rep.passed}
        ok = ok and rep.passed and rep.checked > 0
    return _row(3, "bundle-twisted annihilation, Dmax=5", ok, per)


def criterion_4():
    """Scalar shift identity underlying the difference-system proof."""
    rows = _operators.scalar_shift_identity_check(r_max=4, order=8)
    ok = all(r["ok"] for r in rows)
    return _row(4, "shift identity on monomial multiples, orders 0..4", ok, {"rows": rows})


def criterion_5():
    """Closed-form critical data (cube roots and square roots)."""
    m2 = _toric.catalog_model("P2")
    s2 = _critical.critical_points_H(m2, (1.0,))
    ok = len(s2.points) == 3
    details = {"P2_count": len(s2.points)}
    if ok:
        vals = sorted((pt.f for pt in s2.points), key=lambda v: (round(v.real, 9), round(v.imag, 9)))
        targets = sorted(
            (3 * cmath.exp(2j * math.pi * k / 3) for k in range(3)),
            key=lambda v: (round(v.real, 9), round(v.imag, 9)),
        )
        root_err = max(abs(pt.p[0] ** 3 - 1) for pt in s2.points)
        val_err = max(abs(a - b) for a, b in zip(vals, targets))
        details["P2_root_error"] = root_err
        details["P2_value_error"] = val_err
        ok = root_err < 1e-10 and val_err < 1e-9
    m1 = _toric.catalog_model("P1")
    s1 = _critical.critical_points_H(m1, (4.0,))
    ok1 = len(s1.points) == 2
    details["P1_count"] = len(s1.points)
    if ok1:
        ps = sorted((pt.p[0] for pt in s1.points), key=lambda v: v.real)
        perr = max(abs(ps[0] + 2), abs(ps[1] - 2))
        hs = sorted((pt.hessian for pt in s1.points), key=lambda v: v.real)
        herr = max(abs(hs[0] + 4), abs(hs[1] - 4))
        details["P1_p_error"] = perr
        details["P1_hessian_error"] = herr
        ok1 = perr < 1e-10 and herr < 1e-10
    return _row(5, "closed-form critical points and Hessians", ok and ok1, details)


def criterion_6():
    """Hessian sum formula agrees with numeric log-coordinate Hessian."""
    rng = random.Random(20240806)
    per = {}
    ok = True
    for name in CATALOG:
        model = _toric.catalog_model(name)
        worst = 0.0
        for _ in range(20):
            Q = tuple(
                cmath.rect(0.5 + 1.5 * rng.random(), 2 * math.pi * rng.random())
                for _ in range(model.K)
            )
            sample = _critical.critical_points_H(model, Q)
            for pt in sample.points:
                hf = _critical.hessian_formula(model, pt.p)
                hd = _critical.hessian_direct(model, pt)
                worst = max(worst, abs(hf - hd) / max(abs(hf), 1e-300))
        per[name] = worst
        ok = ok and worst < 1e-8
    return _row(6, "Hessian formula vs direct, 20 random Novikov points", ok, per)


def criterion_7():
    """Power-map self-similarity of the root-of-unity varieties."""
    per = {}
    ok = True
    for name, Q in (("P1", (0.25,)), ("P2", (0.3,))):
        model = _toric.catalog_model(name)
        for m in (2, 3):
            sample = _critical.critical_points_K(model, Q, m=m)
            rep = _critical.adams_check(sample, tol=1e-9)
            key = f"{name}_m{m}"
            per[key] = {
                "points": len(rep["points"]),
                "max_residual": rep["max_residual"],
                "ok": rep["all_ok"],
            }
            ok = ok and rep["all_ok"] and len(rep["points"]) > 0
    m1 = _toric.catalog_model("P1")
    hand = _critical.lm_residual(m1, (3.0 + 0j,), (8.0 + 0j,), 2)
    image = _critical.lm_residual(m1, (9.0 + 0j,), (64.0 + 0j,), 1)
    per["hand_instance"] = {"order2_residual": hand, "image_order1_residual": image}
    ok = ok and hand == 0.0 and image == 0.0
    return _row(7, "power-map self-similarity, orders 2 and 3", ok, per)


def criterion_8():
    """Classical limit: pairings and Hessian limits at tiny Novikov."""
    model = _toric.catalog_model("P1")
    lam = (0.3, -0.7j)
    pairs = [
        (lambda p: 1.0, lambda p: 1.0, "(1,1)"),
        (lambda p: p[0], lambda p: 1.0, "(p,1)"),
    ]
    rep = _critical.localization_check(model, lam, steps=40, target=1e-8, pairs=pairs)
    diff = lam[0] - lam[1]
    targets = {"(1,1)": 0.0 + 0.0j, "(p,1)": 1.0 + 0.0j}
    pair_err = {}
    for row in rep["pairings"]:
        got = complex(row["pairing"][0], row["pairing"][1])
        pair_err[row["pair"]] = abs(got - targets[row["pair"]])
    hess_limits = sorted(
        (complex(r["hessian"][0], r["hessian"][1]) for r in rep["branches"] if r["status"] == "tracked"),
        key=lambda v: (round(v.real, 9), round(v.imag, 9)),
    )
    expect = sorted([diff, -diff], key=lambda v: (round(v.real, 9), round(v.imag, 9)))
    hess_err = (
        max(abs(a - b) for a, b in zip(hess_limits, expect))
        if len(hess_limits) == 2
        else float("inf")
    )
    ok = (
        rep["all_tracked"]
        and all(e < 1e-6 for e in pair_err.values())
        and hess_err < 1e-6
    )
    details = {
        "pairing_errors": pair_err,
        "hessian_limit_error": hess_err,
        "all_tracked": rep["all_tracked"],
        "final_Q_magnitude": rep["final_Q_magnitude"],
    }
    return _row(8, "classical-limit pairings and Hessian limits", ok, details)


def criterion_9():
    """Numeric q-difference residual on the circle integral."""
    model = _toric.catalog_model("P1")
    rep = _integrals.check_equation_numeric(
        model, "k", (0.1,), q=0.5, radius=0.5, tol=1e-11
    )
    ok = rep["max_residual"] < 1e-8
    return _row(9, "circle-integral difference-equation residual", ok,
                {"max_residual": rep["max_residual"], "evaluations": rep["evaluations"]})


def criterion_10():
    """Stationary-phase ratios approach 1 with deviation halving in z."""
    model = _toric.catalog_model("P1")
    rep = _integrals.stationary_phase_compare(model, (1.0,), [0.2, 0.1, 0.05])
    devs = [r["deviation"] for r in rep["rows"]]
    bounds = [0.05, 0.025, 0.013]
    halving = all(devs[i + 1] < 0.7 * devs[i] for i in range(len(devs) - 1))
    ok = all(d < b for d, b in zip(devs, bounds)) and halving
    return _row(10, "stationary-phase leading-order ratios", ok,
                {"deviations": devs, "bounds": bounds, "halving": halving})


def criterion_11():
    """Bounded critical branches count the expected algebra dimension."""
    per = {}
    ok = True
    for name, expect in (("P1", 2), ("P2", 3), ("P1xP1", 4)):
        model = _toric.catalog_model(name)
        sample = _critical.critical_points_H(model, (1.0,) * model.K)
        part = _critical.mori_limit_filter(model, sample)
        per[name] = {"bounded": part["bounded_count"], "expected": expect,
                     "escaping": len(part["escaping"])}
        ok = ok and part["bounded_count"] == expect
    return _row(11, "small-Novikov bounded branch counts", ok, per)


ALL_CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
)


def _battery():
    return [fn() for fn in ALL_CRITERIA]


def determinism_check():
    """Run the full battery twice and byte-compare the rendered reports."""
    first = _reports.render(_reports.build_report("selftest-battery", _battery(), True))
    second = _reports.render(_reports.build_report("selftest-battery", _battery(), True))
    return _row(
        12,
        "byte-identical reports on repeated runs",
        first == second,
        {"bytes": len(first), "identical": first == second},
    )


def run_all(with_determinism=True):
    rows = _battery()
    if with_determinism:
        rows.append(determinism_check())
    return {
        "criteria": rows,
        "all_passed": all(r["passed"] for r in rows),
    }
