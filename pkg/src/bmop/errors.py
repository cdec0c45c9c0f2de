"""Exception and warning types shared across the package."""


class BmopError(Exception):
    """Base class for all package-specific errors."""


class DomainError(BmopError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class PoleError(BmopError, ValueError):
    """A gamma factor was requested at a non-positive integer."""


class NonConvergence(BmopError, RuntimeError):
    """An iterative scheme failed to reach the requested tolerance."""


class CapExceeded(BmopError, ValueError):
    """Requested degree exceeds the configured cap for this code path."""


class SymmetryViolation(BmopError, RuntimeError):
    """Imaginary residual of a contour integral exceeded its threshold."""


class DimensionError(BmopError, ValueError):
    """Matrix dimensions incompatible with the sampling model."""


class PrecisionLossWarning(UserWarning):
    """Catastrophic cancellation detected; evaluation escalated to extended precision."""


class BinUnderflowWarning(UserWarning):
    """A histogram bin had expected count below threshold and was merged."""
