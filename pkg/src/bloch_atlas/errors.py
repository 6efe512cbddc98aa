"""Exception types shared across the package."""


class BlochAtlasError(Exception):
    """Base class for all package-specific errors."""


class NumericalFailureError(BlochAtlasError):
    """An iterative numeric routine failed to converge.

    Carries enough context to diagnose the failure: which routine, the
    achieved residual, and the tolerance it had to meet.
    """

    def __init__(self, routine, residual, tolerance, detail=""):
        self.routine = routine
        self.residual = residual
        self.tolerance = tolerance
        msg = (f"{routine} did not converge: residual {residual:.3e} "
               f"exceeds tolerance {tolerance:.3e}")
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class QuadratureError(BlochAtlasError):
    """An adaptive quadrature failed to reach its target accuracy."""


class ComparisonError(BlochAtlasError):
    """Computed results disagree with stored reference values."""
