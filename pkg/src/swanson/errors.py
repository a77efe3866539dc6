"""Exception types shared across the package."""

from __future__ import annotations


class SwansonError(Exception):
    """Base class for all package-specific errors."""


class ContractViolation(SwansonError, ValueError):
    """An input violates a documented precondition (wrong tag, bad range, ...)."""


class ConvergenceFailure(SwansonError, RuntimeError):
    """An iterative computation did not converge within its budget."""

    def __init__(self, message: str, *, iterations: int | None = None,
                 indices: list[int] | None = None):
        super().__init__(message)
        self.iterations = iterations
        self.indices = indices or []


class NotPositiveDefinite(SwansonError, ValueError):
    """A matrix required to be positive definite has a non-positive eigenvalue."""

    def __init__(self, message: str, *, eigenvalue: float):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class DivergentIntegral(SwansonError, ValueError):
    """A Gaussian integrand fails to decay (combined exponent not positive)."""

    def __init__(self, message: str, *, exponent: float):
        super().__init__(message)
        self.exponent = exponent


class TruncationTailError(SwansonError, ValueError):
    """The truncation size is too small for the requested object."""


class DegenerateState(SwansonError, ValueError):
    """A state with zero physical norm was passed where a unit ray is needed."""
