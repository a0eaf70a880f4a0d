"""Two-sample Z-tests with known variance and their conjugate-normal posteriors.

Under a flat prior the posterior of the mean difference is N(theta_hat, 2 sigma^2 / n),
which makes the one-sided posterior probability of the null and the one-sided
p-value the same closed form. A normal prior N(mu0, sigma0^2) reaches the same
answer only as sigma0^2 grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .discrete import BinomialSample, _check_theta0, _plugin_sd
from .errors import DomainError
from .reports import PosteriorReport, TestReport, two_sided
from .special import normal_cdf

__all__ = [
    "TwoSampleSummary",
    "NormalPrior",
    "FLAT",
    "z_statistic",
    "z_pvalues",
    "normal_posterior",
    "normal_pop",
    "birth_example_pop",
    "flat_truncation_gap",
]


@dataclass(frozen=True)
class TwoSampleSummary:
    """Observed mean difference ``theta_hat`` of two groups of size ``n``.

    ``sigma2`` is the known per-observation variance.
    """

    theta_hat: float
    sigma2: float
    n: int

    def __post_init__(self):
        if not math.isfinite(self.theta_hat):
            raise DomainError(f"theta_hat must be finite, got {self.theta_hat!r}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise DomainError(f"sigma2 must be positive, got {self.sigma2!r}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")

    @property
    def variance(self) -> float:
        """Sampling variance of theta_hat, 2 sigma^2 / n."""
        return 2.0 * self.sigma2 / self.n


@dataclass(frozen=True)
class NormalPrior:
    """N(mu0, sigma0_sq) prior on the mean difference; ``sigma0_sq=inf`` is flat."""

    mu0: float = 0.0
    sigma0_sq: float = math.inf

    def __post_init__(self):
        if not (self.sigma0_sq > 0) or math.isnan(self.sigma0_sq):
            raise DomainError(f"sigma0_sq must be positive, got {self.sigma0_sq!r}")
        if not self.flat and not math.isfinite(self.mu0):
            raise DomainError(f"mu0 must be finite, got {self.mu0!r}")

    @property
    def flat(self) -> bool:
        return math.isinf(self.sigma0_sq)


FLAT = NormalPrior()


def z_statistic(s: TwoSampleSummary) -> float:
    return s.theta_hat * math.sqrt(s.n / (2.0 * s.sigma2))


def z_pvalues(s: TwoSampleSummary) -> TestReport:
    z = z_statistic(s)
    upper, lower = normal_cdf(-z), normal_cdf(z)
    return TestReport(z, upper, lower, two_sided(upper, lower))


def normal_posterior(s: TwoSampleSummary, prior: NormalPrior = FLAT) -> tuple[float, float]:
    """Posterior mean and variance of the mean difference."""
    v = s.variance
    if prior.flat:
        return s.theta_hat, v
    s0 = prior.sigma0_sq
    mean = (s.theta_hat * s0 + prior.mu0 * v) / (s0 + v)
    var = s0 * v / (s0 + v)
    return mean, var


def normal_pop(s: TwoSampleSummary, prior: NormalPrior = FLAT) -> PosteriorReport:
    """Posterior probabilities of theta <= 0 and theta >= 0."""
    if prior.flat:
        # same expression as z_pvalues, so the identity holds bit for bit
        z = z_statistic(s)
    else:
        mean, var = normal_posterior(s, prior)
        z = mean / math.sqrt(var)
    return PosteriorReport.from_tails(normal_cdf(-z), normal_cdf(z))


def birth_example_pop(
    data: BinomialSample, theta0: float = 0.5, direction: str = "le", truncate: bool = False
) -> float:
    """Posterior Pr(theta <= theta0) (or >=) under the normal approximation.

    The likelihood is N(ybar, ybar(1 - ybar)/n) and the prior is flat on the
    real line. With ``truncate=True`` the flat prior is restricted to [0, 1]
    instead; the two agree up to the posterior mass outside [0, 1], which
    :func:`flat_truncation_gap` bounds.
    """
    theta0 = _check_theta0(theta0)
    if direction not in ("le", "ge"):
        raise DomainError(f"direction must be 'le' or 'ge', got {direction!r}")
    sd = _plugin_sd(data)
    ybar = data.proportion
    below = normal_cdf((theta0 - ybar) / sd)
    above = normal_cdf((ybar - theta0) / sd)
    if truncate:
        lo = normal_cdf(-ybar / sd)
        hi = normal_cdf((ybar - 1.0) / sd)
        mass = 1.0 - lo - hi
        below, above = (below - lo) / mass, (above - hi) / mass
    return below if direction == "le" else above


def flat_truncation_gap(data: BinomialSample) -> float:
    """Posterior mass that the unbounded flat prior places outside [0, 1].

    Twice this bounds |truncated - unbounded| for either one-sided probability.
    """
    sd = _plugin_sd(data)
    ybar = data.proportion
    return normal_cdf(-ybar / sd) + normal_cdf((ybar - 1.0) / sd)
