"""Critical-point geometry of the mirror phase functions.

Finds points on the multiplier varieties cut out by the constraint relations
(products of affine coordinate values against the weight columns), samples
their root-of-unity analogues, and evaluates Hessians, residue pairings, and
classical (small-Novikov) limits. All root finding is multi-start Newton on
denominator-cleared polynomial systems with analytic Jacobians; everything is
deterministic for a fixed solver seed.
"""

import cmath
import math
import random
from dataclasses import dataclass, field as dc_field

from . import toric as _toric
from .errors import (
    BranchEscape,
    DegenerateCritical,
    IncompleteCriticalSet,
    NoConsistentBranch,
    NoConvergence,
)


@dataclass(frozen=True)
class SolverConfig:
    seeds: int = 64
    max_iter: int = 80
    tol: float = 1e-12
    dedupe_tol: float = 1e-7
    rng_seed: int = 20240801
    annulus: tuple = (0.25, 2.5)
    escape_bound: float = 1e8
    degenerate_tol: float = 1e-10


@dataclass(frozen=True)
class CriticalPoint:
    mode: str  # "cohomological" | "k_theoretic"
    Q: tuple
    p: tuple = None  # multiplier vector (cohomological)
    x: tuple = None  # coordinate values u_j(p)
    P: tuple = None  # multiplicative multipliers (k_theoretic)
    X: tuple = None  # branch coordinate values
    branch: tuple = None  # root-selection tags per coordinate
    root_order: int = None
    f: complex = None  # critical value (cohomological: sum of x_j)
    hessian: complex = None
    residual: float = None
    newton_iters: int = None
    degenerate: bool = False


@dataclass(frozen=True)
class LagrangianSample:
    mode: str
    model_name: str
    Q: tuple
    points: tuple
    root_order: int = None
    zeta_index: int = 1  # which primitive root generates the branch tags
    lam: tuple = None
    model: object = None
    diagnostics: dict = dc_field(default_factory=dict)


# -- shared numeric kernels ----------------------------------------------


def _solve_complex(A, b):
    """Solve A x = b for small complex systems; None when singular."""
    n = len(b)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv, best = None, 0.0
        for r in range(col, n):
            v = abs(M[r][col])
            if v > best:
                piv, best = r, v
        if piv is None or best < 1e-280:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = 1.0 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def _newton(fun_jac, p0, cfg):
    """Damped Newton; fun_jac returns (F, J, scale). Converges on
    max|F_i|/scale_i < tol."""
    p = list(p0)
    for it in range(cfg.max_iter):
        F, J, scale = fun_jac(p)
        rel = max(abs(f) / s for f, s in zip(F, scale))
        if rel < cfg.tol:
            return p, it, True
        dp = _solve_complex(J, F)
        if dp is None:
            return p, it, False
        step = 1.0
        base = rel
        for _ in range(30):
            cand = [a - step * b for a, b in zip(p, dp)]
            Fc, _, sc = fun_jac(cand)
            if max(abs(f) / s for f, s in zip(Fc, sc)) < base:
                p = cand
                break
            step *= 0.5
        else:
            return p, it, False
        if any(abs(v) > cfg.escape_bound for v in p):
            return p, it, False
    F, J, scale = fun_jac(p)
    rel = max(abs(f) / s for f, s in zip(F, scale))
    return p, cfg.max_iter, rel < cfg.tol


def _sort_key(vec):
    return tuple((round(v.real, 10), round(v.imag, 10)) for v in vec)


def _dedupe(points, key, tol):
    """Keep one representative per tol-cluster, deterministic order."""
    out = []
    for pt in sorted(points, key=lambda t: _sort_key(key(t))):
        v = key(pt)
        dup = False
        for kept in out:
            w = key(kept)
            num = max(abs(a - b) for a, b in zip(v, w))
            den = max(1.0, max(abs(a) for a in v))
            if num <= tol * den:
                dup = True
                break
        if not dup:
            out.append(pt)
    return out


# -- cohomological critical points ----------------------------------------


def _u_values(model, p, lam):
    return tuple(
        sum(p[i] * model.weights[i][j] for i in range(model.K)) - lam[j]
        for j in range(model.N)
    )


def _cleared_system_H(model, Q, lam):
    """F_i = Q_i * prod_{neg} u_j^{-m_ij} - prod_{pos} u_j^{m_ij}, with
    analytic Jacobian via leave-one-out products."""
    K, N = model.K, model.N
    pos = [[(j, model.weights[i][j]) for j in range(N) if model.weights[i][j] > 0] for i in range(K)]
    neg = [[(j, -model.weights[i][j]) for j in range(N) if model.weights[i][j] < 0] for i in range(K)]

    def fun_jac(p):
        u = _u_values(model, p, lam)
        F, J, scale = [], [], []
        for i in range(K):
            A = Q[i]
            for j, e in neg[i]:
                A *= u[j] ** e
            B = 1.0 + 0.0j
            for j, e in pos[i]:
                B *= u[j] ** e
            F.append(A - B)
            scale.append(max(1.0, abs(A), abs(B)))
            row = []
            for k in range(K):
                dA = 0.0 + 0.0j
                for j, e in neg[i]:
                    loo = Q[i]
                    for j2, e2 in neg[i]:
                        loo *= u[j2] ** (e2 - 1 if j2 == j else e2)
                    dA += e * model.weights[k][j] * loo
                dB = 0.0 + 0.0j
                for j, e in pos[i]:
                    loo = 1.0 + 0.0j
                    for j2, e2 in pos[i]:
                        loo *= u[j2] ** (e2 - 1 if j2 == j else e2)
                    dB += e * model.weights[k][j] * loo
                row.append(dA - dB)
            J.append(row)
        return F, J, scale

    return fun_jac


def _seed_points(model, Q, cfg, center=0.0):
    rng = random.Random(cfg.rng_seed)
    degs = [max(1, sum(abs(model.weights[i][j]) for j in range(model.N))) for i in range(model.K)]
    scales = [abs(Q[i]) ** (1.0 / degs[i]) if Q[i] != 0 else 1.0 for i in range(model.K)]
    out = []
    for _ in range(cfg.seeds):
        p = []
        for i in range(model.K):
            r = scales[i] * (cfg.annulus[0] + (cfg.annulus[1] - cfg.annulus[0]) * rng.random())
            th = 2 * math.pi * rng.random()
            p.append(center + r * cmath.exp(1j * th))
        out.append(p)
    return out


def batyrev_residual(model, p, Q, lam):
    """max_i |Q_i - prod_j u_j^{m_ij}| / |Q_i|, integer exponents only."""
    u = _u_values(model, p, lam)
    worst = 0.0
    for i in range(model.K):
        prod = 1.0 + 0.0j
        for j in range(model.N):
            mij = model.weights[i][j]
            if mij:
                if u[j] == 0:
                    return float("inf")
                prod *= u[j] ** mij
        worst = max(worst, abs(Q[i] - prod) / max(abs(Q[i]), 1e-300))
    return worst


def hessian_formula(model, p, lam=None):
    """Sum over size-K weight column subsets of squared minor times the
    product of the remaining coordinate values."""
    lam = tuple(lam) if lam is not None else (0.0,) * model.N
    u = _u_values(model, tuple(p), lam)
    total = 0.0 + 0.0j
    for J, minor in _toric.vertex_minors(model).items():
        prod = complex(minor * minor)
        for j in range(model.N):
            if j not in J:
                prod *= u[j]
        total += prod
    return total


def critical_points_H(model, Q, lam=None, config=None):
    """Multi-start Newton sampling of the constraint variety
    Q_i = prod_j u_j(p)^{m_ij}; each point carries coordinates, critical
    value, Hessian, and convergence diagnostics."""
    cfg = config or SolverConfig()
    Q = tuple(complex(v) for v in Q)
    if any(v == 0 for v in Q):
        raise NoConvergence("all Novikov components must be nonzero")
    lam = tuple(complex(v) for v in lam) if lam is not None else (0.0,) * model.N
    fun_jac = _cleared_system_H(model, Q, lam)
    found = []
    failures = 0
    for p0 in _seed_points(model, Q, cfg):
        p, iters, ok = _newton(fun_jac, p0, cfg)
        if not ok:
            failures += 1
            continue
        res = batyrev_residual(model, p, Q, lam)
        if not (res < 1e-6):
            failures += 1
            continue
        found.append((tuple(p), iters))
    found = _dedupe(found, key=lambda t: t[0], tol=cfg.dedupe_tol)
    pts = []
    for p, iters in found:
        u = _u_values(model, p, lam)
        hess = hessian_formula(model, p, lam)
        scale = max(1.0, max(abs(v) for v in u)) ** max(model.N - model.K, 1)
        pts.append(
            CriticalPoint(
                mode="cohomological",
                Q=Q,
                p=p,
                x=u,
                f=sum(u),
                hessian=hess,
                residual=batyrev_residual(model, p, Q, lam),
                newton_iters=iters,
                degenerate=abs(hess) < cfg.degenerate_tol * scale,
            )
        )
    return LagrangianSample(
        mode="cohomological",
        model_name=model.name or "custom",
        Q=Q,
        points=tuple(pts),
        lam=lam,
        model=model,
        diagnostics={
            "seeds": cfg.seeds,
            "nonconverged_seeds": failures,
            "found": len(pts),
            "expected": _toric.expected_point_count(model),
        },
    )


# -- k-theoretic critical points ------------------------------------------


def _U_values(model, P):
    out = []
    for j in range(model.N):
        v = 1.0 + 0.0j
        for i in range(model.K):
            mij = model.weights[i][j]
            if mij:
                v *= P[i] ** mij
        out.append(v)
    return tuple(out)


def _cleared_system_K(model, Q, m):
    """F_i = Q_i^m * prod_{neg} W_j^{-m_ij} - prod_{pos} W_j^{m_ij} with
    W_j = 1 - U_j^m; Jacobian in the P variables, leave-one-out."""
    K, N = model.K, model.N
    pos = [[(j, model.weights[i][j]) for j in range(N) if model.weights[i][j] > 0] for i in range(K)]
    neg = [[(j, -model.weights[i][j]) for j in range(N) if model.weights[i][j] < 0] for i in range(K)]
    Qm = [Q[i] ** m for i in range(K)]

    def fun_jac(P):
        if any(v == 0 for v in P):
            big = [1e300] * K
            return big, [[1.0 if a == b else 0.0 for b in range(K)] for a in range(K)], [1.0] * K
        U = _U_values(model, P)
        Um = [v ** m for v in U]
        W = [1.0 - v for v in Um]
        # dW_j/dP_k = -m * m_kj * U_j^m / P_k
        F, J, scale = [], [], []
        for i in range(K):
            A = Qm[i]
            for j, e in neg[i]:
                A *= W[j] ** e
            B = 1.0 + 0.0j
            for j, e in pos[i]:
                B *= W[j] ** e
            F.append(A - B)
            scale.append(max(1.0, abs(A), abs(B)))
            row = []
            for k in range(K):
                dA = 0.0 + 0.0j
                for j, e in neg[i]:
                    loo = Qm[i]
                    for j2, e2 in neg[i]:
                        loo *= W[j2] ** (e2 - 1 if j2 == j else e2)
                    dA += e * loo * (-m * model.weights[k][j] * Um[j] / P[k])
                dB = 0.0 + 0.0j
                for j, e in pos[i]:
                    loo = 1.0 + 0.0j
                    for j2, e2 in pos[i]:
                        loo *= W[j2] ** (e2 - 1 if j2 == j else e2)
                    dB += e * loo * (-m * model.weights[k][j] * Um[j] / P[k])
                row.append(dA - dB)
            J.append(row)
        return F, J, scale

    return fun_jac


def lm_residual(model, P, Q, m):
    """max_i |Q_i^m - prod_j (1-U_j^m)^{m_ij}| / |Q_i^m|."""
    U = _U_values(model, P)
    worst = 0.0
    for i in range(model.K):
        prod = 1.0 + 0.0j
        for j in range(model.N):
            mij = model.weights[i][j]
            if mij:
                w = 1.0 - U[j] ** m
                if w == 0:
                    return float("inf")
                prod *= w ** mij
        worst = max(worst, abs(Q[i] ** m - prod) / max(abs(Q[i] ** m), 1e-300))
    return worst


def _enumerate_branches(model, P, Q, m, tol):
    """All coordinate root assignments X_j with X_j^m = 1-U_j^m whose
    weighted products reproduce Q exactly (within tol)."""
    U = _U_values(model, P)
    base = []
    for j in range(model.N):
        w = 1.0 - U[j] ** m
        base.append(w ** (1.0 / m) if w != 0 else 0.0)
    zeta = cmath.exp(2j * math.pi / m)
    out = []
    for tags in _tag_product(m, model.N):
        X = tuple(base[j] * zeta ** tags[j] for j in range(model.N))
        ok = True
        for i in range(model.K):
            prod = 1.0 + 0.0j
            for j in range(model.N):
                mij = model.weights[i][j]
                if mij:
                    if X[j] == 0:
                        ok = False
                        break
                    prod *= X[j] ** mij
            if not ok or abs(prod - Q[i]) > tol * max(1.0, abs(Q[i])):
                ok = False
                break
        if ok:
            out.append((tags, X))
    return out


def _tag_product(m, n):
    if n == 0:
        yield ()
        return
    for rest in _tag_product(m, n - 1):
        for k in range(m):
            yield rest + (k,)


def critical_points_K(model, Q, m=1, config=None, branch_tol=1e-8):
    """Root-of-unity multiplier variety sampling: solves the order-m defining
    relations for P, then enumerates coordinate-root branches consistent with
    the Novikov point. Points with no consistent branch are reported in the
    diagnostics rather than silently dropped."""
    cfg = config or SolverConfig()
    Q = tuple(complex(v) for v in Q)
    if any(v == 0 for v in Q):
        raise NoConvergence("all Novikov components must be nonzero")
    if m < 1:
        raise NoConvergence("root order must be a positive integer")
    fun_jac = _cleared_system_K(model, Q, m)
    raw = []
    failures = 0
    seeds = _seed_points(model, Q, cfg) + _seed_points(model, Q, cfg, center=1.0)
    for p0 in seeds:
        P, iters, ok = _newton(fun_jac, p0, cfg)
        if not ok:
            failures += 1
            continue
        res = lm_residual(model, P, Q, m)
        if not (res < 1e-6):
            failures += 1
            continue
        raw.append((tuple(P), iters))
    raw = _dedupe(raw, key=lambda t: t[0], tol=cfg.dedupe_tol)
    pts = []
    branchless = []
    for P, iters in raw:
        branches = _enumerate_branches(model, P, Q, m, branch_tol)
        if not branches:
            branchless.append(list(_split_complex(P)))
            continue
        for tags, X in branches:
            pts.append(
                CriticalPoint(
                    mode="k_theoretic",
                    Q=Q,
                    P=P,
                    X=X,
                    branch=tags,
                    root_order=m,
                    residual=lm_residual(model, P, Q, m),
                    newton_iters=iters,
                )
            )
    return LagrangianSample(
        mode="k_theoretic",
        model_name=model.name or "custom",
        Q=Q,
        points=tuple(pts),
        root_order=m,
        model=model,
        diagnostics={
            "seeds": 2 * cfg.seeds,
            "nonconverged_seeds": failures,
            "multiplier_solutions": len(raw),
            "points_with_branches": len(pts),
            "solutions_without_consistent_branch": branchless,
        },
    )


def _split_complex(vec):
    for v in vec:
        yield [v.real, v.imag]


def adams_check(sample, tol=1e-9):
    """Power map self-similarity: (P, Q) on the order-m variety must map to
    (P^m, Q^m) on the order-1 variety. Returns per-point residual rows."""
    m = sample.root_order or 1
    rows = []
    worst = 0.0
    model = sample.model or _toric.catalog_model(sample.model_name)
    for pt in sample.points:
        Pm = tuple(v ** m for v in pt.P)
        Qm = tuple(v ** m for v in pt.Q)
        # order-1 residual of the image point, independently recomputed
        res = lm_residual(model, Pm, Qm, 1)
        worst = max(worst, res)
        rows.append(
            {
                "P": [[v.real, v.imag] for v in pt.P],
                "image_P": [[v.real, v.imag] for v in Pm],
                "image_Q": [[v.real, v.imag] for v in Qm],
                "l1_residual": res,
                "ok": res < tol,
            }
        )
    return {
        "root_order": m,
        "points": rows,
        "max_residual": worst,
        "all_ok": all(r["ok"] for r in rows),
        "tol": tol,
    }


# -- direct Hessian --------------------------------------------------------


def hessian_direct(model, crit, h=5e-3):
    """Determinant of the numeric Hessian of the phase sum in logarithmic
    fiber coordinates, central differences with one Richardson level.

    The fiber chart is unimodular for the reference volume form, so the
    determinant needs no further normalization.
    """
    if crit.mode != "cohomological":
        raise DegenerateCritical("direct Hessian requires a cohomological critical point")
    chart = _toric.fiber_parametrization(model)
    n = chart.fiber_dim
    if n == 0:
        return 1.0 + 0.0j
    x_cr = crit.x

    def phase(svec):
        # x_j rescales by exp(<kernel column j, s>)
        tot = 0.0 + 0.0j
        for j in range(model.N):
            e = sum(chart.kernel[b][j] * svec[b] for b in range(n))
            tot += x_cr[j] * cmath.exp(e)
        return tot

    def hess_at(step):
        H = [[0.0 + 0.0j] * n for _ in range(n)]
        f0 = phase([0.0] * n)
        for b in range(n):
            for c in range(b, n):
                if b == c:
                    sp = [0.0] * n
                    sp[b] = step
                    sm = [0.0] * n
                    sm[b] = -step
                    H[b][b] = (phase(sp) - 2 * f0 + phase(sm)) / step ** 2
                else:
                    v = 0.0 + 0.0j
                    for sb in (step, -step):
                        for sc in (step, -step):
                            s = [0.0] * n
                            s[b] = sb
                            s[c] = sc
                            v += phase(s) * (1 if sb * sc > 0 else -1)
                    H[b][c] = H[c][b] = v / (4 * step ** 2)
        return H

    H1 = hess_at(h)
    H2 = hess_at(h / 2)
    H = [
        [(4.0 * H2[b][c] - H1[b][c]) / 3.0 for c in range(n)]
        for b in range(n)
    ]
    det = _det_complex(H)
    scale = max(1.0, max(abs(v) for v in x_cr)) ** n
    if abs(det) < 1e-13 * scale:
        raise DegenerateCritical(f"numeric Hessian determinant {det} below scale {scale}")
    return det


def _det_complex(A):
    n = len(A)
    M = [row[:] for row in A]
    det = 1.0 + 0.0j
    for col in range(n):
        piv, best = None, 0.0
        for r in range(col, n):
            if abs(M[r][col]) > best:
                piv, best = r, abs(M[r][col])
        if piv is None or best == 0.0:
            return 0.0 + 0.0j
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1.0 / M[col][col]
        for r in range(col + 1, n):
            f = M[r][col] * inv
            if f != 0:
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return det


# -- residue pairing and limits --------------------------------------------


def residue_pairing(model, Q, lam=None, phi=None, psi=None, config=None,
                    expected_count=None, sample=None):
    """Sum of phi(p) psi(p) / Hessian over the critical set at Q.

    phi and psi are callables of the multiplier tuple; defaults are the
    constant 1. When an expected point count is supplied (or known for the
    catalog model) and not met, the pairing is considered unreliable.
    """
    if sample is None:
        sample = critical_points_H(model, Q, lam, config)
    expect = expected_count
    if expect is None:
        expect = _toric.expected_point_count(model)
    if expect is not None and len(sample.points) < expect:
        raise IncompleteCriticalSet(
            f"found {len(sample.points)} critical points, expected {expect}"
        )
    phi = phi or (lambda p: 1.0)
    psi = psi or (lambda p: 1.0)
    total = 0.0 + 0.0j
    for pt in sample.points:
        if pt.degenerate:
            raise DegenerateCritical("degenerate critical point in pairing")
        total += phi(pt.p) * psi(pt.p) / pt.hessian
    return total


def _continue_branches(model, sample, lam, taus, cfg, power=None):
    """Warm-start Newton continuation of each point along Q(tau); returns
    final points (or None per branch on escape/failure)."""
    branches = [list(pt.p) for pt in sample.points]
    status = ["tracked"] * len(branches)
    Q0 = sample.Q
    for tau in taus:
        Q = tuple(tau ** (1 if power is None else power[i]) * Q0[i] for i in range(model.K))
        fun_jac = _cleared_system_H(model, Q, lam)
        for b, p in enumerate(branches):
            if status[b] != "tracked":
                continue
            pnew, _, ok = _newton(fun_jac, p, cfg)
            if not ok:
                status[b] = "lost"
            elif any(abs(v) > cfg.escape_bound for v in pnew):
                status[b] = "escaped"
            else:
                branches[b] = pnew
    return branches, status


def classical_points(model, lam):
    """For each vertex J: the unique p with u_j(p) = 0 for all j in J
    (exact complex linear solve)."""
    out = []
    for J in _toric.enumerate_vertices(model):
        A = [[complex(model.weights[i][j]) for i in range(model.K)] for j in J]
        b = [complex(lam[j]) for j in J]
        p = _solve_complex(A, b)
        if p is None:
            raise DegenerateCritical(f"vertex {J} gives a singular classical system")
        out.append((J, tuple(p)))
    return out


def localization_check(model, lam, Q0=None, steps=40, target=1e-8,
                       pairs=None, config=None):
    """Continue the critical set along Q -> 0 and compare against the
    fixed-point data: branch limits, Hessian limits, and residue pairings of
    the supplied test pairs against the localization sums."""
    cfg = config or SolverConfig()
    lam = tuple(complex(v) for v in lam)
    if Q0 is None:
        Q0 = (1.0,) * model.K
    Q0 = tuple(complex(v) for v in Q0)
    sample = critical_points_H(model, Q0, lam, cfg)
    ratio = (target) ** (1.0 / steps)
    taus = [ratio ** k for k in range(1, steps + 1)]
    branches, status = _continue_branches(model, sample, lam, taus, cfg)
    Qf = tuple(taus[-1] * v for v in Q0)
    classical = classical_points(model, lam)

    rows = []
    for b, p in enumerate(branches):
        if status[b] != "tracked":
            rows.append({"branch": b, "status": status[b]})
            continue
        # nearest classical point
        dists = [max(abs(a - c) for a, c in zip(p, pc)) for _, pc in classical]
        best = min(range(len(classical)), key=lambda t: dists[t])
        J, pc = classical[best]
        u_c = _u_values(model, pc, lam)
        delta_limit = 1.0 + 0.0j
        for j in range(model.N):
            if j not in J:
                delta_limit *= u_c[j]
        hess = hessian_formula(model, p, lam)
        rows.append(
            {
                "branch": b,
                "status": "tracked",
                "vertex": list(J),
                "distance_to_classical": dists[best],
                "hessian": [hess.real, hess.imag],
                "hessian_limit": [delta_limit.real, delta_limit.imag],
                "hessian_error": abs(hess - delta_limit),
            }
        )
    report = {
        "model": model.name or "custom",
        "lambda": [[v.real, v.imag] for v in lam],
        "final_Q_magnitude": abs(Qf[0]),
        "branches": rows,
        "classical_points": [
            {"vertex": list(J), "p": [[v.real, v.imag] for v in pc]} for J, pc in classical
        ],
        "all_tracked": all(r["status"] == "tracked" for r in rows),
    }
    if pairs:
        final_sample_pts = []
        for b, p in enumerate(branches):
            if status[b] != "tracked":
                continue
            hess = hessian_formula(model, p, lam)
            final_sample_pts.append((tuple(p), hess))
        pair_rows = []
        for phi, psi, label in pairs:
            val = sum(phi(p) * psi(p) / h for p, h in final_sample_pts)
            loc = 0.0 + 0.0j
            for J, pc in classical:
                u_c = _u_values(model, pc, lam)
                den = 1.0 + 0.0j
                for j in range(model.N):
                    if j not in J:
                        den *= u_c[j]
                loc += phi(pc) * psi(pc) / den
            pair_rows.append(
                {
                    "pair": label,
                    "pairing": [val.real, val.imag],
                    "localization": [loc.real, loc.imag],
                    "difference": abs(val - loc),
                }
            )
        report["pairings"] = pair_rows
    return report


def mori_limit_filter(model, sample, ray=None, steps=30, target=1e-8, config=None):
    """Partition a cohomological sample into bounded and escaping branches
    along Q(tau)_i = tau^{ray_i} * Q0_i as tau -> 0."""
    cfg = config or SolverConfig()
    lam = sample.lam or (0.0,) * model.N
    if ray is not None and (len(ray) != model.K or any(c <= 0 for c in ray)):
        raise NoConvergence("ray must assign a positive exponent to every Novikov variable")
    ratio = target ** (1.0 / steps)
    taus = [ratio ** k for k in range(1, steps + 1)]
    branches, status = _continue_branches(model, sample, lam, taus, cfg, power=ray)
    bounded, escaping = [], []
    for b, pt in enumerate(sample.points):
        entry = {
            "start_p": [[v.real, v.imag] for v in pt.p],
            "status": status[b],
        }
        if status[b] == "tracked":
            entry["limit_p"] = [[v.real, v.imag] for v in branches[b]]
            bounded.append(entry)
        else:
            escaping.append(entry)
    return {
        "model": model.name or "custom",
        "bounded": bounded,
        "escaping": escaping,
        "bounded_count": len(bounded),
        "expected_dimension": _toric.expected_point_count(model),
    }
