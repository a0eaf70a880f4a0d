"""Binomial and negative-binomial p-values next to Beta-posterior probabilities.

All tail probabilities go through the incomplete beta identities

    Pr(Y >= y | Bin(n, p))      = I_p(y, n - y + 1)
    Pr(Y >= y | NegBin(r, p))   = I_p(y, r)
    Pr(theta <= t | Beta(a, b)) = I_t(a, b)

so nothing here sums factorials, and n in the tens of thousands is cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateVarianceError, DomainError
from .reports import PosteriorReport, TestReport, two_sided
from .special import inc_beta_pair, normal_cdf

__all__ = [
    "BinomialSample",
    "BetaParams",
    "binom_exact_pvalue",
    "binom_exact_test",
    "binom_normal_approx_pvalue",
    "binom_normal_approx_test",
    "negbinom_pvalue",
    "beta_posterior_pop",
    "lindley_point_mass_pop",
    "two_sided_pvalue_discrete",
]

_SIDES = ("upper", "lower")
_METHODS = ("exact", "normal_approx")


@dataclass(frozen=True)
class BinomialSample:
    """``y`` successes out of ``n`` trials."""

    y: int
    n: int

    def __post_init__(self):
        if int(self.y) != self.y or int(self.n) != self.n:
            raise DomainError(f"y and n must be integers, got y={self.y!r}, n={self.n!r}")
        if self.n < 1 or not (0 <= self.y <= self.n):
            raise DomainError(f"need n >= 1 and 0 <= y <= n, got y={self.y}, n={self.n}")
        object.__setattr__(self, "y", int(self.y))
        object.__setattr__(self, "n", int(self.n))

    @property
    def proportion(self) -> float:
        return self.y / self.n

    @property
    def failures(self) -> int:
        return self.n - self.y


@dataclass(frozen=True)
class BetaParams:
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"Beta prior {name} must be positive and finite, got {v!r}")


def _check_theta0(theta0: float) -> float:
    theta0 = float(theta0)
    if not (0.0 < theta0 < 1.0):
        raise DomainError(f"null value theta0 must lie in (0, 1), got {theta0!r}")
    return theta0


def _check_side(side: str) -> str:
    if side not in _SIDES:
        raise DomainError(f"side must be one of {_SIDES}, got {side!r}")
    return side


def _plugin_sd(data: BinomialSample) -> float:
    if data.y in (0, data.n):
        raise DegenerateVarianceError(
            f"plug-in variance y(1-y)/n vanishes at y={data.y}, n={data.n}"
        )
    ybar = data.proportion
    return math.sqrt(ybar * (1.0 - ybar) / data.n)


def _exact_tails(data: BinomialSample, theta0: float) -> tuple[float, float]:
    y, n = data.y, data.n
    # Pr(Y >= y) = I_theta0(y, n - y + 1); Pr(Y <= y) = 1 - I_theta0(y + 1, n - y)
    upper = 1.0 if y == 0 else inc_beta_pair(theta0, y, n - y + 1)[0]
    lower = 1.0 if y == n else inc_beta_pair(theta0, y + 1, n - y)[1]
    return upper, lower


def binom_exact_pvalue(data: BinomialSample, theta0: float = 0.5, side: str = "upper") -> float:
    """Exact binomial tail probability at the null value.

    ``side="upper"`` gives Pr(Y >= y | theta0), the p-value for
    H0: theta <= theta0; ``side="lower"`` gives Pr(Y <= y | theta0).
    """
    upper, lower = _exact_tails(data, _check_theta0(theta0))
    return upper if _check_side(side) == "upper" else lower


def binom_exact_test(data: BinomialSample, theta0: float = 0.5) -> TestReport:
    upper, lower = _exact_tails(data, _check_theta0(theta0))
    return TestReport(float(data.y), upper, lower, two_sided(lower, upper))


def _normal_z(data: BinomialSample, theta0: float) -> float:
    return (data.proportion - theta0) / _plugin_sd(data)


def binom_normal_approx_pvalue(
    data: BinomialSample, theta0: float = 0.5, side: str = "upper"
) -> float:
    """Normal-approximation p-value with plug-in variance ybar(1 - ybar)/n."""
    z = _normal_z(data, _check_theta0(theta0))
    return normal_cdf(-z) if _check_side(side) == "upper" else normal_cdf(z)


def binom_normal_approx_test(data: BinomialSample, theta0: float = 0.5) -> TestReport:
    z = _normal_z(data, _check_theta0(theta0))
    upper, lower = normal_cdf(-z), normal_cdf(z)
    return TestReport(z, upper, lower, two_sided(lower, upper))


def negbinom_pvalue(data: BinomialSample, theta0: float = 0.5) -> float:
    """Pr(Y >= y) when sampling stops at the r-th failure, r = n - y.

    Equals I_theta0(y, n - y).
    """
    theta0 = _check_theta0(theta0)
    if data.y == 0 or data.y == data.n:
        raise DomainError(
            f"negative binomial p-value needs 1 <= y <= n - 1 (r = n - y failures), "
            f"got y={data.y}, n={data.n}"
        )
    return inc_beta_pair(theta0, data.y, data.failures)[0]


def beta_posterior_pop(
    data: BinomialSample, prior: BetaParams = BetaParams(1.0, 1.0), theta0: float = 0.5
) -> PosteriorReport:
    """Posterior probabilities of theta <= theta0 and theta >= theta0.

    The posterior is Beta(y + alpha, n - y + beta), so
    ``pop_le = I_theta0(y + alpha, n - y + beta)``.
    """
    theta0 = _check_theta0(theta0)
    le, ge = inc_beta_pair(theta0, data.y + prior.alpha, data.failures + prior.beta)
    return PosteriorReport.from_tails(le, ge)


def lindley_point_mass_pop(data: BinomialSample, theta0: float = 0.5) -> float:
    """Posterior probability of the point null under the point-mass prior.

    Half the prior mass sits on ``theta0`` and half is spread uniformly on
    [0, 1]; the likelihood is the normal approximation with plug-in variance.
    The shared normal constant cancels between numerator and denominator,
    and the uniform part integrates in closed form.
    """
    theta0 = _check_theta0(theta0)
    sd = _plugin_sd(data)
    ybar = data.proportion
    at_null = math.exp(-0.5 * ((ybar - theta0) / sd) ** 2)
    spread = math.sqrt(2.0 * math.pi) * sd * (
        normal_cdf((1.0 - ybar) / sd) - normal_cdf(-ybar / sd)
    )
    return at_null / (at_null + spread)


def two_sided_pvalue_discrete(
    data: BinomialSample, theta0: float = 0.5, method: str = "exact"
) -> float:
    """2 * min(Pr(Y <= y), Pr(Y >= y)), capped at 1."""
    if method == "exact":
        return binom_exact_test(data, theta0).p_two_sided
    if method == "normal_approx":
        return binom_normal_approx_test(data, theta0).p_two_sided
    raise DomainError(f"method must be one of {_METHODS}, got {method!r}")
