"""Exception hierarchy shared by every module.

``DomainError`` subclasses signal bad inputs (a usage problem); ``NumericalError``
subclasses signal that a valid input could not be evaluated.
"""

from __future__ import annotations


class DomainError(ValueError):
    """Argument outside the domain of the requested quantity."""


class DegenerateVarianceError(DomainError):
    """Plug-in variance y(1-y)/n is zero because y is 0 or n."""


class DesignError(DomainError):
    """Covariate design cannot identify the regression coefficients."""


class NumericalError(ArithmeticError):
    """A valid computation failed to converge or lost definiteness."""

    def __init__(self, message: str, *, iterations: int | None = None, trace=None):
        super().__init__(message)
        self.iterations = iterations
        self.trace = trace


class ConditioningError(NumericalError):
    """Cholesky factorization of a supposedly SPD matrix failed."""


class FittingError(NumericalError):
    """Likelihood optimizer did not converge."""


class SamplerDivergenceError(NumericalError):
    """Gibbs sampler produced non-finite conditional parameters."""
