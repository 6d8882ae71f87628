"""Command-line workbench.

Subcommands map one-to-one onto the library surface: series expansion,
operator verification, critical-point sampling, power-map checks, residue
pairings, classical-limit continuation, numeric integrals, and the built-in
acceptance battery. Every run writes one deterministic JSON report and exits
0 exactly when the requested checks pass.
"""

import argparse
import os
import re
import sys
from fractions import Fraction

from . import critical as _critical
from . import integrals as _integrals
from . import operators as _operators
from . import reports as _reports
from . import rings as _rings
from . import selftest as _selftest
from . import series as _series
from . import toric as _toric
from .errors import MirrorkitError

_PART_RE = re.compile(r"^[+-]?(\d+/\d+|\d*\.?\d+([eE][+-]?\d+)?|\d+)$")


def parse_complex(text):
    """Parse 'a+bi' with rational or decimal parts; plain reals allowed."""
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise ValueError("empty complex literal")

    def part(v):
        if v in ("", "+"):
            return 1.0
        if v == "-":
            return -1.0
        if not _PART_RE.match(v):
            raise ValueError(f"bad numeric part {v!r} in {text!r}")
        if "/" in v:
            return float(Fraction(v))
        return float(v)

    if s.endswith("i"):
        body = s[:-1]
        # split into real and imaginary at the last sign not leading
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                return complex(part(body[:k]), part(body[k:]))
        return complex(0.0, part(body))
    return complex(part(s), 0.0)


def parse_complex_list(text, expect=None):
    vals = tuple(parse_complex(tok) for tok in text.split(","))
    if expect is not None and len(vals) != expect:
        raise ValueError(f"expected {expect} comma-separated values, got {len(vals)}")
    return vals


_EXPR_RE = re.compile(r"^[0-9pI+\-*/^(). ]*$")


def parse_poly(expr, nvars):
    """Small evaluator for pairing insertions: polynomials in p1..pK
    (alias p = p1) with I as the imaginary unit."""
    expr = expr.strip()
    if not _EXPR_RE.match(expr) or "__" in expr:
        raise ValueError(f"disallowed characters in expression {expr!r}")
    code = expr.replace("^", "**")

    def fn(p):
        env = {"I": 1j, "p": p[0]}
        for i in range(nvars):
            env[f"p{i + 1}"] = p[i]
        return complex(eval(code, {"__builtins__": {}}, env))

    fn(tuple(0.1 + 0.1j for _ in range(nvars)))  # fail fast on bad syntax
    return fn


def _thread_cap():
    raw = os.environ.get("MIRRORKIT_THREADS", "")
    if not raw:
        return None
    try:
        cap = int(raw)
    except ValueError:
        raise SystemExit(f"MIRRORKIT_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise SystemExit("MIRRORKIT_THREADS must be >= 1")
    return cap


def _solver_config(args):
    kw = {}
    if getattr(args, "seeds", None):
        kw["seeds"] = args.seeds
    if getattr(args, "solver_tol", None):
        kw["tol"] = args.solver_tol
    return _critical.SolverConfig(**kw) if kw else None


def _emit(args, report):
    text = _reports.write(report, args.output)
    if not args.output:
        sys.stdout.write(text)
    return 0 if report["passed"] else 1


def _cmd_series(args):
    model = _toric.resolve_model(args.model)
    make = {
        "h": _series.series_H,
        "k": _series.series_K,
        "e": _series.series_E,
        "pie": _series.series_PiE,
    }[args.kind]
    if args.kind == "h":
        ring = _rings.catalog_ring(model, "cohomology", equivariant=args.equivariant)
        s = make(model, ring, args.dmax)
    elif args.kind == "k":
        ring = _rings.catalog_ring(model, "k_theory", equivariant=args.equivariant)
        s = make(model, ring, args.dmax, equivariant=args.equivariant)
    else:
        s = make(model, None, args.dmax)
    results = {"kind": args.kind, "dmax": args.dmax, "coefficients": s.dump()}
    return _emit(args, _reports.build_report("series", results, True, model=model))


def _cmd_verify(args):
    model = _toric.resolve_model(args.model)
    if args.kind == "h":
        s = _series.series_H(model, None, args.dmax)
        system = _operators.build_system_H(model, representation=args.representation)
    elif args.kind == "k":
        s = _series.series_K(model, None, args.dmax)
        system = _operators.build_system_K(model, representation=args.representation)
    elif args.kind == "e":
        s = _series.series_E(model, None, args.dmax)
        system = _operators.build_system_E(model)
    else:
        s = _series.series_PiE(model, None, args.dmax)
        system = _operators.build_system_PiE(model)
    rep = _operators.verify(system, s)
    return _emit(
        args,
        _reports.build_report(
            "verify", rep.to_json_dict(), rep.passed and rep.checked > 0, model=model
        ),
    )


def _point_rows(sample):
    rows = []
    for pt in sample.points:
        row = {"mode": pt.mode, "residual": pt.residual}
        if pt.p is not None:
            row["p"] = [_reports.complex_to_str(v) for v in pt.p]
            row["x"] = [_reports.complex_to_str(v) for v in pt.x]
            row["critical_value"] = _reports.complex_to_str(pt.f)
            row["hessian"] = _reports.complex_to_str(pt.hessian)
            row["degenerate"] = pt.degenerate
        if pt.P is not None:
            row["P"] = [_reports.complex_to_str(v) for v in pt.P]
            row["X"] = [_reports.complex_to_str(v) for v in pt.X]
            row["branch"] = list(pt.branch)
        rows.append(row)
    return rows


def _cmd_critical(args):
    model = _toric.resolve_model(args.model)
    Q = parse_complex_list(args.Q, model.K)
    cfg = _solver_config(args)
    if args.kind == "h":
        lam = parse_complex_list(args.lam, model.N) if args.lam else None
        sample = _critical.critical_points_H(model, Q, lam, cfg)
    else:
        sample = _critical.critical_points_K(model, Q, m=args.m, config=cfg)
    expected = _toric.expected_point_count(model)
    found_ok = len(sample.points) > 0
    if args.kind == "h" and expected is not None:
        found_ok = len(sample.points) == expected
    results = {
        "kind": args.kind,
        "Q": [_reports.complex_to_str(v) for v in Q],
        "points": _point_rows(sample),
        "diagnostics": sample.diagnostics,
        "expected_count": expected,
    }
    if args.kind == "k":
        results["root_order"] = args.m
    return _emit(args, _reports.build_report("critical", results, found_ok, model=model))


def _cmd_adams(args):
    model = _toric.resolve_model(args.model)
    Q = parse_complex_list(args.Q, model.K)
    sample = _critical.critical_points_K(model, Q, m=args.m, config=_solver_config(args))
    rep = _critical.adams_check(sample, tol=args.tol)
    ok = rep["all_ok"] and len(rep["points"]) > 0
    return _emit(args, _reports.build_report("adams", rep, ok, model=model))


def _cmd_pairing(args):
    model = _toric.resolve_model(args.model)
    Q = parse_complex_list(args.Q, model.K)
    lam = parse_complex_list(args.lam, model.N) if args.lam else None
    phi = parse_poly(args.phi, model.K)
    psi = parse_poly(args.psi, model.K)
    value = _critical.residue_pairing(
        model, Q, lam, phi, psi, config=_solver_config(args)
    )
    results = {
        "Q": [_reports.complex_to_str(v) for v in Q],
        "phi": args.phi,
        "psi": args.psi,
        "pairing": _reports.complex_to_str(value),
    }
    return _emit(args, _reports.build_report("pairing", results, True, model=model))


def _cmd_localize(args):
    model = _toric.resolve_model(args.model)
    lam = parse_complex_list(args.lam, model.N)
    Q0 = parse_complex_list(args.Q0, model.K) if args.Q0 else None
    pairs = [
        (lambda p: 1.0, lambda p: 1.0, "(1,1)"),
        (lambda p: p[0], lambda p: 1.0, "(p1,1)"),
    ]
    rep = _critical.localization_check(
        model, lam, Q0=Q0, steps=args.steps, target=args.target, pairs=pairs,
        config=_solver_config(args),
    )
    hess_ok = all(
        r.get("hessian_error", float("inf")) < args.tol
        for r in rep["branches"]
        if r["status"] == "tracked"
    )
    pair_ok = all(row["difference"] < args.tol for row in rep["pairings"])
    ok = rep["all_tracked"] and hess_ok and pair_ok
    return _emit(args, _reports.build_report("localize", rep, ok, model=model))


def _cmd_integrate(args):
    model = _toric.resolve_model(args.model)
    Q = parse_complex_list(args.Q, model.K)
    results = {"kind": args.kind, "Q": [_reports.complex_to_str(v) for v in Q]}
    ok = True
    if args.kind == "h":
        if args.z is None:
            raise SystemExit("--z is required for kind h")
        spec = _integrals.IntegralSpec(
            model, "h", Q, z=parse_complex(args.z), nodes=args.nodes, tol=args.tol
        )
        res = _integrals.eval_integral_H(spec)
    else:
        if args.q is None:
            raise SystemExit("--q is required for kind k")
        spec = _integrals.IntegralSpec(
            model, "k", Q, q=parse_complex(args.q), radius=args.radius,
            nodes=args.nodes, tol=args.tol,
        )
        res = _integrals.eval_integral_K(spec)
    results["value"] = _reports.complex_to_str(res.value)
    results["error_estimate"] = res.error_estimate
    results["nodes"] = res.nodes
    results["normalization"] = res.normalization
    if args.check_equation:
        eq = _integrals.check_equation_numeric(
            model, args.kind, Q,
            z=parse_complex(args.z) if args.z else None,
            q=parse_complex(args.q) if args.q else None,
            radius=args.radius, nodes=args.nodes, tol=min(args.tol, 1e-10),
        )
        results["equation_check"] = eq
        bound = args.residual_tol if args.residual_tol else (1e-8 if args.kind == "k" else 1e-5)
        results["residual_bound"] = bound
        ok = ok and eq["max_residual"] < bound
    if args.stationary_phase:
        zs = [parse_complex(tok).real for tok in args.stationary_phase.split(",")]
        sp = _integrals.stationary_phase_compare(model, Q, zs, nodes=args.nodes)
        results["stationary_phase"] = sp
        devs = [r["deviation"] for r in sp["rows"]]
        ok = ok and all(
            devs[i + 1] < devs[i] for i in range(len(devs) - 1)
        )
        if args.plot_data:
            with open(args.plot_data, "w") as fh:
                for row in sp["rows"]:
                    fh.write(f"{row['z'][0]!r} {row['deviation']!r}\n")
    return _emit(args, _reports.build_report("integrate", results, ok, model=model))


def _cmd_selftest(args):
    rep = _selftest.run_all(with_determinism=not args.skip_determinism)
    return _emit(args, _reports.build_report("selftest", rep, rep["all_passed"]))


def build_parser():
    ap = argparse.ArgumentParser(
        prog="mirrorkit",
        description="symbolic-numeric workbench for toric mirror series, "
        "shift-operator systems, critical loci, and oscillating integrals",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, model=True):
        if model:
            p.add_argument("--model", required=True,
                           help="catalog name (pt, P1, P2, P1xP1, P1_O(-1)+O(-1)) or JSON file path")
        p.add_argument("--output", help="write the JSON report here instead of stdout")

    p = sub.add_parser("series", help="expand a ring-valued series")
    common(p)
    p.add_argument("--kind", choices=["h", "k", "e", "pie"], default="h")
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--equivariant", action="store_true")
    p.set_defaults(fn=_cmd_series)

    p = sub.add_parser("verify", help="check an operator system against a series, exactly")
    common(p)
    p.add_argument("--kind", choices=["h", "k", "e", "pie"], default="h")
    p.add_argument("--dmax", type=int, default=5)
    p.add_argument("--representation", choices=["vector", "scalar"], default="vector")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("critical", help="sample critical points / multiplier varieties")
    common(p)
    p.add_argument("--kind", choices=["h", "k"], default="h")
    p.add_argument("--Q", required=True, help="comma-separated complex values, 'a+bi'")
    p.add_argument("--lambda", dest="lam", help="equivariant parameters, comma-separated")
    p.add_argument("--m", type=int, default=1, help="root order (kind k)")
    p.add_argument("--seeds", type=int)
    p.add_argument("--tol", dest="solver_tol", type=float)
    p.set_defaults(fn=_cmd_critical)

    p = sub.add_parser("adams", help="power-map self-similarity residuals")
    common(p)
    p.add_argument("--Q", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seeds", type=int)
    p.set_defaults(fn=_cmd_adams)

    p = sub.add_parser("pairing", help="residue pairing over the critical set")
    common(p)
    p.add_argument("--Q", required=True)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--phi", default="1")
    p.add_argument("--psi", default="1")
    p.add_argument("--seeds", type=int)
    p.set_defaults(fn=_cmd_pairing)

    p = sub.add_parser("localize", help="classical-limit continuation checks")
    common(p)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--Q0", help="starting Novikov point (default all ones)")
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--target", type=float, default=1e-8)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seeds", type=int)
    p.set_defaults(fn=_cmd_localize)

    p = sub.add_parser("integrate", help="numeric oscillating integrals")
    common(p)
    p.add_argument("--kind", choices=["h", "k"], required=True)
    p.add_argument("--Q", required=True)
    p.add_argument("--z")
    p.add_argument("--q")
    p.add_argument("--radius", type=float, default=0.5)
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--check-equation", action="store_true")
    p.add_argument("--residual-tol", type=float)
    p.add_argument("--stationary-phase", help="comma-separated z values")
    p.add_argument("--plot-data", help="write 'z deviation' rows to this file")
    p.set_defaults(fn=_cmd_integrate)

    p = sub.add_parser("selftest", help="run the acceptance battery")
    common(p, model=False)
    p.add_argument("--skip-determinism", action="store_true",
                   help="skip the double-run byte comparison")
    p.set_defaults(fn=_cmd_selftest)

    return ap


def main(argv=None):
    _thread_cap()  # validated; evaluation is single-threaded and deterministic
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (MirrorkitError, ValueError) as exc:
        report = _reports.build_report(
            args.command,
            {"error": type(exc).__name__, "message": str(exc)},
            False,
        )
        out = getattr(args, "output", None)
        text = _reports.write(report, out)
        if not out:
            sys.stdout.write(text)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
