"""Deterministic JSON report assembly.

Reports carry a schema tag, a static tool version, the convention notes that
fix every sign/indexing choice the workbench makes, and command results.
Serialization is stable: sorted keys, fixed indentation, no timestamps, exact
ring values as strings. Identical inputs therefore produce identical bytes.
"""

import json
from fractions import Fraction

SCHEMA = "mirrorkit/1"
TOOL_VERSION = "1.0.0"

# Convention ledger surfaced in every report so downstream readers can
# reproduce values without consulting the source.
INTERPRETATION_NOTES = (
    "constraint degrees D_j(d) drive series factors: nonnegative degrees "
    "contribute reciprocal products over offsets 1..D_j, negative degrees "
    "contribute direct products over offsets D_j+1..0 (zero offset included)",
    "difference/differential systems put positive-weight columns on the left; "
    "negative-weight columns move to the right behind the Novikov translation",
    "bundle summand factors take the side opposite to base columns: positive "
    "bundle weights sit on the right; dual-summand offsets start at one, "
    "plain-summand offsets start at zero",
    "multiplicative coordinate classes are U_j = prod_i P_i^{m_ij}; additive "
    "ones are u_j = sum_i p_i m_ij minus the j-th equivariant parameter; "
    "multiplicative equivariance divides by the parameter",
    "the circle integral is normalized as the mean over the contour "
    "(dln t / 2 pi i); the ray integral integrates ds at s = ln t",
    "stationary-phase predictions use sqrt(2 pi z) exp(-f/z)/sqrt(Delta) "
    "with f the sum of coordinate values at the dominant ray point; the "
    "constant is fixed by the Gaussian calibration",
    "log-derivative residuals use order-4 central differences (one "
    "Richardson level) at step 1e-3 in ln Q",
)


def complex_to_str(v):
    """Render a complex number as 'a+bi' with round-trip-exact parts."""
    v = complex(v)
    re, im = repr(v.real), repr(v.imag)
    if im.startswith("-"):
        return f"{re}{im}i"
    return f"{re}+{im}i"


def value_to_jsonable(v):
    """Exact values go to strings; complex to 'a+bi'; containers recurse."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return complex_to_str(v)
    if isinstance(v, dict):
        return {str(k): value_to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [value_to_jsonable(x) for x in v]
    return v


def build_report(command, results, passed, model=None, extra_notes=(), config=None):
    report = {
        "schema": SCHEMA,
        "tool_version": TOOL_VERSION,
        "command": command,
        "passed": bool(passed),
        "interpretation_notes": list(INTERPRETATION_NOTES) + list(extra_notes),
        "results": value_to_jsonable(results),
    }
    if model is not None:
        report["model"] = {
            "name": model.name or "custom",
            "weights": [list(r) for r in model.weights],
            "bundle_weights": [list(r) for r in model.bundle_weights]
            if model.bundle_weights
            else [],
            "equivariance": model.equivariance,
        }
    if config is not None:
        report["config"] = value_to_jsonable(config)
    return report


def render(report):
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def write(report, path=None):
    text = render(report)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
