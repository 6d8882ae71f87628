"""Exception types shared across the workbench.

Names match the error surface of the public API. Solver-level conditions that
are reported as data (per-seed divergence, escaping branches) have exception
classes too, for the cases where the caller asked for a hard failure.
"""


class MirrorkitError(Exception):
    """Base class for all workbench errors."""


class RankDeficient(MirrorkitError):
    """Weight matrix does not have full row rank over the integers."""


class ZeroColumn(MirrorkitError):
    """A coordinate weight column is identically zero."""


class EmptyChamber(MirrorkitError):
    """Chamber vector is missing or not representable in the weight cone."""


class UnknownModel(MirrorkitError):
    """Catalog lookup failed and no explicit data was supplied."""


class MissingBundleData(MirrorkitError):
    """Operation requires bundle weights the model does not carry."""


class RingMismatch(MirrorkitError):
    """Ring presentation does not match the model or mode of the operation."""


class NotAUnit(MirrorkitError):
    """Element has no inverse in the presented ring."""


class DivisionByZero(MirrorkitError):
    """Division by the zero rational function."""


class NoConvergence(MirrorkitError):
    """Newton iteration failed to converge from every seed."""


class DegenerateCritical(MirrorkitError):
    """Critical point with vanishing Hessian where a finite one is required."""


class NoConsistentBranch(MirrorkitError):
    """No root-of-unity branch assignment matches the Novikov point."""


class IncompleteCriticalSet(MirrorkitError):
    """Fewer critical points found than the model predicts."""


class BranchEscape(MirrorkitError):
    """A tracked critical branch left every bounded region."""


class ContourDivergence(MirrorkitError):
    """Integration contour does not give a convergent integral."""


class QuadratureFailure(MirrorkitError):
    """Quadrature failed its node-doubling self-convergence check."""


class PoleOnContour(MirrorkitError):
    """Integration contour passes too close to an integrand pole."""


class DominantCriticalAmbiguous(MirrorkitError):
    """Two critical points share the maximal phase on the contour."""
