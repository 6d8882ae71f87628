"""Numeric oscillating integrals in fiber dimension one.

Evaluates the exponential-phase integral over the positive ray (differential
flavor) and the reciprocal q-Pochhammer amplitude over a circle (q-difference
flavor), checks the scalar annihilating equations on the numeric values, and
compares against stationary-phase leading-order predictions from the
critical-point data. All quadratures are deterministic and self-convergent:
node counts double until the value settles.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import critical as _critical
from . import field as _field
from . import toric as _toric
from .errors import (
    ContourDivergence,
    DominantCriticalAmbiguous,
    PoleOnContour,
    QuadratureFailure,
)


@dataclass(frozen=True)
class IntegralSpec:
    model: object
    kind: str  # "h" | "k"
    Q: tuple
    z: complex = None
    q: complex = None
    radius: float = 0.5
    nodes: int = 64
    tol: float = 1e-9
    pole_margin: float = 1e-6


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error_estimate: float
    nodes: int
    normalization: str


def _require_fiber_dim(model, allowed):
    dim = model.N - model.K
    if dim not in allowed:
        raise QuadratureFailure(
            f"numeric contours are only defined for fiber dimension in {sorted(allowed)}, "
            f"got {dim}; higher-dimensional cycles are out of scope"
        )


# -- differential-flavor integral ------------------------------------------


def eval_integral_H(spec):
    """Integral of exp(-sum_j x_j(t)/z) dln t over the positive ray,
    composite Gauss-Legendre in s = ln t with node doubling."""
    model = _toric.resolve_model(spec.model)
    _require_fiber_dim(model, {1})
    Q = tuple(complex(v) for v in spec.Q)
    if any(v == 0 for v in Q):
        raise ContourDivergence("a zero Novikov component removes the decay of the phase")
    z = complex(spec.z)
    if z.real <= 0:
        raise ContourDivergence("the positive-ray contour needs Re z > 0")
    chart = _toric.fiber_parametrization(model)

    def phase_over_z(s):
        x = chart.x_values(Q, (cmath.exp(s),))
        return sum(x) / z

    lo, hi = _decay_window(phase_over_z)
    integrand = lambda s: cmath.exp(-phase_over_z(s))
    value, err, nodes = _self_convergent_gl(integrand, lo, hi, spec.nodes, spec.tol)
    return IntegralResult(value, err, nodes, "ds on s = ln t")


def _decay_window(phase_over_z, drop=60.0, limit=800.0):
    """[lo, hi] in s outside which |integrand| < e^-drop of its peak."""
    grid = [k * 0.25 for k in range(-160, 161)]
    vals = [phase_over_z(s).real for s in grid]
    base = min(vals)

    def push(s0, step):
        s = s0
        while abs(s) < limit:
            if phase_over_z(s).real - base >= drop:
                return s
            s += step
        raise ContourDivergence(
            "integrand fails to decay along the ray (phase real part stays bounded)"
        )

    i0 = vals.index(base)
    return push(grid[i0], -0.5), push(grid[i0], 0.5)


def _self_convergent_gl(f, lo, hi, start_nodes, tol, max_doublings=14):
    """Composite 16-point Gauss-Legendre, panels doubled until the value
    moves by less than tol relative."""
    xg, wg = np.polynomial.legendre.leggauss(16)
    panels = max(4, start_nodes // 16)
    prev = None
    for _ in range(max_doublings):
        width = (hi - lo) / panels
        total = 0.0 + 0.0j
        for p in range(panels):
            a = lo + p * width
            mid, half = a + width / 2, width / 2
            for xk, wk in zip(xg, wg):
                total += wk * f(mid + half * xk)
            # accumulate per panel to keep summation order fixed
        total *= (hi - lo) / (2 * panels)
        if prev is not None:
            change = abs(total - prev) / max(abs(total), 1e-300)
            if change < tol:
                return total, change, panels * 16
        prev = total
        panels *= 2
    raise QuadratureFailure(f"no self-convergence after {panels // 2 * 16} nodes")


# -- q-difference-flavor integral ------------------------------------------


def pochhammer_reciprocal(X, q, cutoff=1e-18):
    """prod_{r>=0} (1 - X q^r)^(-1), truncated once |X q^r| < cutoff."""
    X = complex(X)
    q = complex(q)
    out = 1.0 + 0.0j
    term = X
    for _ in range(100000):
        if abs(term) < cutoff:
            break
        den = 1.0 - term
        if den == 0:
            raise PoleOnContour(f"amplitude pole hit exactly at X={X!r}")
        out /= den
        term *= q
    return out


def _amplitude(chart, Q, q, t=None, cutoff=1e-18):
    x = chart.x_values(Q, (t,) if chart.fiber_dim else ())
    out = 1.0 + 0.0j
    for X in x:
        out *= pochhammer_reciprocal(X, q, cutoff)
    return out


def _check_pole_margins(chart, Q, q, radius, margin, probes=512):
    """Distance of every coordinate value on the contour to the pole locus
    {q^-r} of the reciprocal Pochhammer factors must exceed margin."""
    worst = float("inf")
    tgrid = (
        [radius * cmath.exp(2j * math.pi * k / probes) for k in range(probes)]
        if chart.fiber_dim
        else [None]
    )
    for t in tgrid:
        x = chart.x_values(Q, (t,) if chart.fiber_dim else ())
        for X in x:
            pole = 1.0 + 0.0j
            while True:
                worst = min(worst, abs(X - pole))
                pole /= q
                if abs(pole) > abs(X) + 2.0:
                    break
    if worst <= margin:
        raise PoleOnContour(
            f"contour passes within {worst:.3e} of an amplitude pole (margin {margin:.1e})"
        )
    return worst


def eval_integral_K(spec):
    """Mean over the circle |t| = r of the product of reciprocal q-Pochhammer
    amplitudes (trapezoid rule; exact cyclic normalization dln t / 2 pi i).

    Fiber dimension 0 degenerates to direct evaluation of the amplitude.
    """
    model = _toric.resolve_model(spec.model)
    _require_fiber_dim(model, {0, 1})
    Q = tuple(complex(v) for v in spec.Q)
    q = complex(spec.q)
    if not abs(q) < 1:
        raise PoleOnContour("the amplitude product only converges for |q| < 1")
    chart = _toric.fiber_parametrization(model)
    _check_pole_margins(chart, Q, q, spec.radius, spec.pole_margin)
    if chart.fiber_dim == 0:
        v = _amplitude(chart, Q, q)
        return IntegralResult(v, 0.0, 1, "point evaluation (zero-dimensional fiber)")
    n = max(16, spec.nodes)
    prev = None
    for _ in range(18):
        total = 0.0 + 0.0j
        for k in range(n):
            t = spec.radius * cmath.exp(2j * math.pi * k / n)
            total += _amplitude(chart, Q, q, t)
        total /= n
        if prev is not None:
            change = abs(total - prev) / max(abs(total), 1e-300)
            if change < spec.tol:
                return IntegralResult(total, change, n, "dln t / (2 pi i)")
        prev = total
        n *= 2
    raise QuadratureFailure(f"circle quadrature did not settle by {n // 2} nodes")


def pochhammer_identity_check(order=12):
    """Exact series identity behind the amplitude: the exponential of
    sum_k X^k / (k (1-q^k)) equals sum_n X^n / prod_{s<=n}(1-q^s), checked
    coefficientwise over the rational function field in q."""
    F = _field.CoefficientField(("q",))
    one = F.const(1)
    # exp series via the standard derivative recurrence
    a = [None] + [
        (F.const(Fraction(1, k)) / (one - F.monomial("q", k))) for k in range(1, order + 1)
    ]
    b = [one]
    for n in range(1, order + 1):
        acc = F.const(0)
        for k in range(1, n + 1):
            acc = acc + F.const(k) * a[k] * b[n - k]
        b.append(F.const(Fraction(1, n)) * acc)
    rows = []
    for n in range(order + 1):
        rhs = one
        for s in range(1, n + 1):
            rhs = rhs / (one - F.monomial("q", s))
        rows.append(b[n] == rhs)
    return {"order": order, "coefficients_match": rows, "all_match": all(rows)}


# -- scalar equation checks on numeric values -------------------------------


def _apply_shift_factor(terms, col, coeff):
    out = dict(terms)
    for v, c in terms.items():
        w = tuple(a + b for a, b in zip(v, col))
        out[w] = out.get(w, 0.0 + 0.0j) - coeff * c
    return out


def _scalar_k_equation(model, i, q):
    lhs = {(0,) * model.K: 1.0 + 0.0j}
    rhs = {(0,) * model.K: 1.0 + 0.0j}
    for j in range(model.N):
        mij = model.weights[i][j]
        if mij == 0:
            continue
        col = tuple(model.weights[a][j] for a in range(model.K))
        for r in range(abs(mij)):
            fac = q ** (-r)
            if mij > 0:
                lhs = _apply_shift_factor(lhs, col, fac)
            else:
                rhs = _apply_shift_factor(rhs, col, fac)
    return lhs, rhs


def _poly_mul(a, b):
    out = {}
    for va, ca in a.items():
        for vb, cb in b.items():
            w = tuple(x + y for x, y in zip(va, vb))
            out[w] = out.get(w, 0.0 + 0.0j) + ca * cb
    return out


def _scalar_h_equation(model, i, z):
    """Sides as polynomials {theta exponent: coeff} in the log-derivative
    operators theta_i = Q_i d/dQ_i; column j contributes z*(-D_j + r) with
    D_j = sum_i m_ij theta_i."""
    K = model.K
    one = {(0,) * K: 1.0 + 0.0j}
    lhs, rhs = dict(one), dict(one)
    for j in range(model.N):
        mij = model.weights[i][j]
        if mij == 0:
            continue
        lin = {(0,) * K: 0.0 + 0.0j}
        for a in range(K):
            e = [0] * K
            e[a] = 1
            lin[tuple(e)] = -z * model.weights[a][j]
        for r in range(abs(mij)):
            fac = dict(lin)
            fac[(0,) * K] = z * r
            if mij > 0:
                lhs = _poly_mul(lhs, fac)
            else:
                rhs = _poly_mul(rhs, fac)
    return lhs, rhs


def _theta_stencil(orders, h):
    """Tensor stencil for prod theta_i^{orders_i}: offsets in ln Q ->
    weights, built by convolving the central first-derivative stencil."""
    stencils = []
    for o in orders:
        s = {0: 1.0}
        for _ in range(o):
            nxt = {}
            for off, w in s.items():
                nxt[off + 1] = nxt.get(off + 1, 0.0) + w / (2 * h)
                nxt[off - 1] = nxt.get(off - 1, 0.0) - w / (2 * h)
            s = nxt
        stencils.append(s)
    out = {(): 1.0}
    for s in stencils:
        nxt = {}
        for offs, w in out.items():
            for off, w2 in s.items():
                nxt[offs + (off,)] = w * w2
        out = nxt
    return out


def check_equation_numeric(model, kind, Q, z=None, q=None, radius=0.5,
                           nodes=64, tol=1e-9, h=1e-3, pole_margin=1e-6):
    """Residuals of the scalar annihilating equations on the numeric
    integral values.

    q-flavor: evaluates the integral at the finitely many dilated Novikov
    points the equation involves. z-flavor: log-derivative operators by
    central differences with one Richardson level (order 4) at step h.
    """
    model = _toric.resolve_model(model)
    _require_fiber_dim(model, {0, 1})
    Q = tuple(complex(v) for v in Q)
    memo = {}

    if kind == "k":
        def ival(shift):
            if shift not in memo:
                Qs = tuple(Q[i] * q ** shift[i] for i in range(model.K))
                spec = IntegralSpec(model, "k", Qs, q=q, radius=radius,
                                    nodes=nodes, tol=tol, pole_margin=pole_margin)
                memo[shift] = eval_integral_K(spec).value
            return memo[shift]

        base = ival((0,) * model.K)
        eqs = []
        for i in range(model.K):
            lhs_t, rhs_t = _scalar_k_equation(model, i, complex(q))
            lhs = sum(c * ival(v) for v, c in sorted(lhs_t.items()))
            rhs = Q[i] * sum(c * ival(v) for v, c in sorted(rhs_t.items()))
            eqs.append(
                {
                    "equation": i,
                    "lhs": [lhs.real, lhs.imag],
                    "rhs": [rhs.real, rhs.imag],
                    "residual_rel": abs(lhs - rhs) / max(abs(base), 1e-300),
                }
            )
    elif kind == "h":
        def ival_at(offsets, step):
            key = (offsets, step)
            if key not in memo:
                Qs = tuple(Q[i] * math.exp(step * offsets[i]) for i in range(model.K))
                spec = IntegralSpec(model, "h", Qs, z=z, nodes=nodes, tol=tol)
                if model.N - model.K == 0:
                    chart = _toric.fiber_parametrization(model)
                    memo[key] = cmath.exp(-sum(chart.x_values(Qs, ())) / complex(z))
                else:
                    memo[key] = eval_integral_H(spec).value
            return memo[key]

        def theta_value(orders, step):
            val = 0.0 + 0.0j
            for offs, w in sorted(_theta_stencil(orders, step).items()):
                val += w * ival_at(offs, step)
            return val

        def theta_richardson(orders):
            if all(o == 0 for o in orders):
                return ival_at((0,) * model.K, h)
            d1 = theta_value(orders, h)
            d2 = theta_value(orders, h / 2)
            return (4.0 * d2 - d1) / 3.0

        base = ival_at((0,) * model.K, h)
        eqs = []
        for i in range(model.K):
            lhs_t, rhs_t = _scalar_h_equation(model, i, complex(z))
            lhs = sum(c * theta_richardson(a) for a, c in sorted(lhs_t.items()))
            rhs = Q[i] * sum(c * theta_richardson(a) for a, c in sorted(rhs_t.items()))
            eqs.append(
                {
                    "equation": i,
                    "lhs": [lhs.real, lhs.imag],
                    "rhs": [rhs.real, rhs.imag],
                    "residual_rel": abs(lhs - rhs) / max(abs(base), 1e-300),
                }
            )
    else:
        raise QuadratureFailure(f"unknown kind {kind!r}; expected 'h' or 'k'")

    return {
        "model": model.name or "custom",
        "kind": kind,
        "Q": [[v.real, v.imag] for v in Q],
        "parameter": [complex(z or q).real, complex(z or q).imag],
        "equations": eqs,
        "max_residual": max(e["residual_rel"] for e in eqs),
        "evaluations": len(memo),
    }


# -- stationary phase --------------------------------------------------------


def gaussian_calibration(z_values, tol=1e-11):
    """Quadrature of exp(-t^2/2z) over the real line against sqrt(2 pi z);
    fixes the stationary-phase normalization constant."""
    rows = []
    for z in z_values:
        z = complex(z)
        L = math.sqrt(2 * abs(z) * 80.0)
        f = lambda t: cmath.exp(-t * t / (2 * z))
        val, err, n = _self_convergent_gl(f, -L, L, 64, tol)
        ref = cmath.sqrt(2 * math.pi * z)
        rows.append(
            {
                "z": [z.real, z.imag],
                "integral": [val.real, val.imag],
                "reference": [ref.real, ref.imag],
                "ratio": [(val / ref).real, (val / ref).imag],
                "deviation": abs(val / ref - 1),
            }
        )
    return {"normalization": "sqrt(2 pi z)", "rows": rows,
            "max_deviation": max(r["deviation"] for r in rows)}


def _dominant_real_ray_point(model, Q, config=None):
    """Critical point lying on the positive ray with maximal Re(-f)."""
    chart = _toric.fiber_parametrization(model)
    sample = _critical.critical_points_H(model, Q, config=config)
    on_ray = []
    for pt in sample.points:
        t = chart.t_values(pt.x)[0]
        if abs(t) > 0 and abs(cmath.phase(t)) < 1e-8 and t.real > 0:
            on_ray.append(pt)
    if not on_ray:
        raise DominantCriticalAmbiguous("no critical point lies on the positive ray")
    on_ray.sort(key=lambda pt: pt.f.real)
    if len(on_ray) > 1:
        gap = on_ray[1].f.real - on_ray[0].f.real
        if gap < 1e-10 * max(1.0, abs(on_ray[0].f)):
            raise DominantCriticalAmbiguous(
                "two critical values share the dominant real part"
            )
    return on_ray[0]


def stationary_phase_compare(model, Q, z_values, nodes=64, tol=1e-10, config=None):
    """Ratio of the numeric integral to the leading stationary-phase term
    sqrt(2 pi z) e^{-f/z} / sqrt(Delta) at the dominant ray critical point;
    the contract is ratio -> 1 with deviation O(z)."""
    model = _toric.resolve_model(model)
    _require_fiber_dim(model, {1})
    Q = tuple(complex(v) for v in Q)
    dom = _dominant_real_ray_point(model, Q, config)
    f = dom.f  # = sum of coordinate values; integrand is exp(-f/z) at the point
    delta = dom.hessian
    rows = []
    for z in z_values:
        z = complex(z)
        spec = IntegralSpec(model, "h", Q, z=z, nodes=nodes, tol=tol)
        val = eval_integral_H(spec).value
        pred = cmath.sqrt(2 * math.pi * z) * cmath.exp(-f / z) / cmath.sqrt(delta)
        ratio = val / pred
        rows.append(
            {
                "z": [z.real, z.imag],
                "integral": [val.real, val.imag],
                "prediction": [pred.real, pred.imag],
                "ratio": [ratio.real, ratio.imag],
                "deviation": abs(ratio - 1),
            }
        )
    return {
        "model": model.name or "custom",
        "Q": [[v.real, v.imag] for v in Q],
        "normalization": "sqrt(2 pi z) e^{-f/z} / sqrt(Delta)",
        "critical_value": [f.real, f.imag],
        "hessian": [delta.real, delta.imag],
        "rows": rows,
    }
