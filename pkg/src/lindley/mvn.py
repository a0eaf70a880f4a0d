"""Contrast tests on a multivariate normal mean with known covariance.

For each contrast c_k the statistic is c_k' xbar / sqrt(c_k' Sigma c_k / n).
The Bayesian side uses the conjugate N_p(mu0, Sigma0) prior; every contrast
c_k' mu is then univariate normal a posteriori, so the posterior
probabilities are closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import ConditioningError, DomainError
from .reports import PosteriorReport, TestReport, two_sided
from .special import normal_cdf

__all__ = [
    "MvnModel",
    "MvnPrior",
    "MvnPosterior",
    "as_contrasts",
    "sasabuchi_z",
    "mvn_pvalues",
    "reject_all",
    "mvn_posterior",
    "mvn_pop",
]

DEFAULT_ALPHA = 0.05


def _symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def _spd(a, name: str) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"{name} must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} has non-finite entries")
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise DomainError(f"{name} is not symmetric")
    try:
        linalg.cholesky(a, lower=True)
    except linalg.LinAlgError as exc:
        raise ConditioningError(f"{name} is not positive definite") from exc
    return _symmetrize(a)


@dataclass(frozen=True)
class MvnModel:
    sigma: np.ndarray
    n: int

    def __post_init__(self):
        object.__setattr__(self, "sigma", _spd(self.sigma, "sigma"))
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")

    @property
    def p(self) -> int:
        return self.sigma.shape[0]


@dataclass(frozen=True)
class MvnPrior:
    mu0: np.ndarray
    sigma0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigma0", _spd(self.sigma0, "sigma0"))
        mu0 = np.asarray(self.mu0, dtype=float).reshape(-1)
        if mu0.shape[0] != self.sigma0.shape[0]:
            raise DomainError("mu0 and sigma0 dimensions disagree")
        object.__setattr__(self, "mu0", mu0)

    @classmethod
    def vague(cls, p: int, scale: float = 1000.0) -> "MvnPrior":
        return cls(np.zeros(p), scale * np.eye(p))


@dataclass(frozen=True)
class MvnPosterior:
    mu_n: np.ndarray
    sigma_n: np.ndarray


def as_contrasts(contrasts, p: int) -> np.ndarray:
    """Validate contrasts as a (K, p) array of nonzero rows."""
    c = np.atleast_2d(np.asarray(contrasts, dtype=float))
    if c.shape[1] != p:
        raise DomainError(f"contrasts must have {p} columns, got shape {c.shape}")
    if np.any(np.linalg.norm(c, axis=1) == 0):
        raise DomainError("every contrast must be nonzero")
    return c


def _xbar(xbar, p: int) -> np.ndarray:
    x = np.asarray(xbar, dtype=float).reshape(-1)
    if x.shape[0] != p:
        raise DomainError(f"xbar must have length {p}, got {x.shape[0]}")
    return x


def sasabuchi_z(model: MvnModel, xbar, contrasts) -> np.ndarray:
    """Contrast-wise likelihood-ratio statistics, one per row of ``contrasts``."""
    c = as_contrasts(contrasts, model.p)
    x = _xbar(xbar, model.p)
    quad = np.einsum("kp,pq,kq->k", c, model.sigma, c) / model.n
    if np.any(quad <= 0):
        raise ConditioningError("c' Sigma c is not positive for some contrast")
    return c @ x / np.sqrt(quad)


def mvn_pvalues(z) -> list[TestReport]:
    out = []
    for zk in np.atleast_1d(np.asarray(z, dtype=float)):
        upper, lower = normal_cdf(-zk), normal_cdf(zk)
        out.append(TestReport(float(zk), upper, lower, two_sided(upper, lower)))
    return out


def reject_all(p_values, alpha: float = DEFAULT_ALPHA) -> bool:
    """The intersection-union rule: reject only if every p-value is below alpha."""
    return bool(np.all(np.asarray(p_values) < alpha))


def mvn_posterior(model: MvnModel, xbar, prior: MvnPrior) -> MvnPosterior:
    """Conjugate update, written with solves against A = Sigma0 + Sigma/n.

    mu_n    = Sigma0 A^-1 xbar + (Sigma/n) A^-1 mu0
    Sigma_n = (Sigma/n) A^-1 Sigma0

    Sigma_n is the inverse of Sigma0^-1 + n Sigma^-1; the trailing factor is
    the prior covariance, not Sigma.
    """
    if prior.sigma0.shape != model.sigma.shape:
        raise DomainError("prior and model dimensions disagree")
    x = _xbar(xbar, model.p)
    s_n = model.sigma / model.n
    a = _symmetrize(prior.sigma0 + s_n)
    try:
        factor = linalg.cho_factor(a, lower=True)
    except linalg.LinAlgError as exc:
        raise ConditioningError("Sigma0 + Sigma/n is not positive definite") from exc
    mu_n = prior.sigma0 @ linalg.cho_solve(factor, x) + s_n @ linalg.cho_solve(factor, prior.mu0)
    sigma_n = _symmetrize(s_n @ linalg.cho_solve(factor, prior.sigma0))
    return MvnPosterior(mu_n, sigma_n)


def mvn_pop(post: MvnPosterior, contrasts) -> list[PosteriorReport]:
    c = as_contrasts(contrasts, post.mu_n.shape[0])
    means = c @ post.mu_n
    sds = np.sqrt(np.einsum("kp,pq,kq->k", c, post.sigma_n, c))
    out = []
    for m, s in zip(means, sds):
        r = m / s
        out.append(PosteriorReport.from_tails(normal_cdf(-r), normal_cdf(r)))
    return out
