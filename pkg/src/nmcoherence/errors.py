"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """Base class for numerical failures (quadrature, solver, consistency)."""


class SolverDivergenceError(NumericalError):
    """Non-finite values appeared during time integration."""


class InternalConsistencyError(NumericalError):
    """Two redundant computations of the same quantity disagree."""


class PhysicalityError(NumericalError):
    """A propagated state violates a physical bound beyond roundoff."""


class TruncationError(NumericalError):
    """A truncated-basis construction leaked probability above tolerance."""


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""
