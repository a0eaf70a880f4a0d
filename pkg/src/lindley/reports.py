"""Result containers returned by the frequentist and Bayesian calculators."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DomainError


def check_probability(value: float, name: str = "probability") -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def two_sided(lower: float, upper: float) -> float:
    """Twice the smaller tail, capped at 1."""
    return min(1.0, 2.0 * min(lower, upper))


def odds(p: float) -> float:
    return math.inf if p >= 1.0 else p / (1.0 - p)


@dataclass(frozen=True)
class TestReport:
    """Frequentist test summary.

    ``p_upper`` is Pr(T >= t | H0) for the null ``theta <= theta0``;
    ``p_lower`` is Pr(T <= t | H0) for the null ``theta >= theta0``.
    ``boundary`` marks a statistic that is undefined because the estimate
    sits on the edge of the parameter space.
    """

    __test__ = False  # keep pytest from collecting this class

    statistic: float
    p_upper: float
    p_lower: float
    p_two_sided: float
    boundary: bool = False

    def __post_init__(self):
        for name in ("p_upper", "p_lower", "p_two_sided"):
            check_probability(getattr(self, name), name)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PosteriorReport:
    """Posterior probabilities of the two one-sided nulls.

    ``bayes_factor`` is the odds of ``pop_le`` (null oriented as
    ``theta <= theta0``); ``bayes_factor_two_sided`` is the odds of
    ``pop_two_sided``.
    """

    pop_le: float
    pop_ge: float
    pop_two_sided: float
    bayes_factor: float
    bayes_factor_two_sided: float

    @classmethod
    def from_tails(cls, pop_le: float, pop_ge: float) -> "PosteriorReport":
        pop2 = two_sided(pop_le, pop_ge)
        return cls(pop_le, pop_ge, pop2, odds(pop_le), odds(pop2))

    def __post_init__(self):
        for name in ("pop_le", "pop_ge", "pop_two_sided"):
            check_probability(getattr(self, name), name)

    def as_dict(self) -> dict:
        return asdict(self)
