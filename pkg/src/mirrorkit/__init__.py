"""mirrorkit: a symbolic-numeric workbench for toric mirror data.

From an integer weight matrix describing a torus quotient, the package
expands ring-valued hypergeometric and q-hypergeometric series with exact
coefficients, builds and verifies the shift-operator systems that annihilate
them, samples the critical geometry of the associated phase functions
(including root-of-unity variants and classical limits), and evaluates the
one-dimensional oscillating integrals numerically with stationary-phase
validation.
"""

from .critical import (
    CriticalPoint,
    LagrangianSample,
    SolverConfig,
    adams_check,
    batyrev_residual,
    classical_points,
    critical_points_H,
    critical_points_K,
    hessian_direct,
    hessian_formula,
    lm_residual,
    localization_check,
    mori_limit_filter,
    residue_pairing,
)
from .errors import (
    BranchEscape,
    ContourDivergence,
    DegenerateCritical,
    DivisionByZero,
    DominantCriticalAmbiguous,
    EmptyChamber,
    IncompleteCriticalSet,
    MirrorkitError,
    MissingBundleData,
    NoConsistentBranch,
    NoConvergence,
    NotAUnit,
    PoleOnContour,
    QuadratureFailure,
    RankDeficient,
    RingMismatch,
    UnknownModel,
    ZeroColumn,
)
from .field import CoefficientField, Poly, RatFun
from .integrals import (
    IntegralResult,
    IntegralSpec,
    check_equation_numeric,
    eval_integral_H,
    eval_integral_K,
    gaussian_calibration,
    pochhammer_identity_check,
    pochhammer_reciprocal,
    stationary_phase_compare,
)
from .operators import (
    OperatorSystem,
    ShiftOperator,
    Term,
    VerificationReport,
    apply,
    build_system_E,
    build_system_H,
    build_system_K,
    build_system_PiE,
    scalar_shift_identity_check,
    verify,
)
from .reports import SCHEMA, TOOL_VERSION, build_report, render
from .rings import (
    RingElement,
    RingPresentation,
    catalog_ring,
    coefficient_field_for,
    invert_unit,
    presentation_from_json,
)
from .series import (
    TruncatedSeries,
    closed_form_pt_H,
    closed_form_pt_K,
    series_E,
    series_H,
    series_K,
    series_PiE,
)
from .toric import (
    CATALOG_DIMENSIONS,
    FiberChart,
    ToricModel,
    catalog_model,
    enumerate_vertices,
    expected_point_count,
    fiber_parametrization,
    model_from_json,
    model_to_json,
    resolve_model,
    smith_normal_form,
    validate_model,
    vertex_minors,
)

__version__ = TOOL_VERSION

__all__ = [name for name in dir() if not name.startswith("_")]
