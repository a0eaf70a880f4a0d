"""Balanced random-intercept model: simulation, ML fit, Wald tests, Gibbs PoP.

Model: y_ij = beta0 + beta1 x_ij + b_i + e_ij with b_i ~ N(0, tau^2) and
e_ij ~ N(0, sigma^2), i = 1..n clusters of size J. Each cluster has
compound-symmetric covariance V = sigma^2 I + tau^2 11', whose inverse and
determinant are closed form:

    V^-1   = (I - w 11') / sigma^2,   w = tau^2 / (sigma^2 + J tau^2)
    log|V| = (J - 1) log sigma^2 + log(sigma^2 + J tau^2)

so the likelihood and its gradient cost O(nJ) per evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import DesignError, DomainError, FittingError, SamplerDivergenceError
from .reports import TestReport, check_probability, two_sided
from .special import normal_cdf

__all__ = [
    "LmmConfig",
    "LmmData",
    "LmmFit",
    "HypothesisThresholds",
    "GibbsDraws",
    "GibbsPop",
    "SIMULATION_TRUTH",
    "generate_lmm",
    "lmm_loglik",
    "fit_lmm_ml",
    "wald_test_beta1",
    "tau2_asymptotic_variance",
    "wald_test_tau2",
    "gibbs_sample",
    "gibbs_pop",
    "pop_below",
    "batch_means_se",
]

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class LmmConfig:
    n: int = 500
    J: int = 5
    beta0: float = 0.2
    beta1: float = 1.0
    tau: float = 0.5
    sigma: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n < 2 or self.J < 2:
            raise DomainError(f"need n >= 2 and J >= 2, got n={self.n}, J={self.J}")
        if not (self.tau > 0 and self.sigma > 0):
            raise DomainError(f"tau and sigma must be positive, got {self.tau}, {self.sigma}")


SIMULATION_TRUTH = dict(beta0=0.2, beta1=1.0, tau=0.5, sigma=0.5)


@dataclass(frozen=True)
class LmmData:
    """Covariates and outcomes, one row per cluster."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 2 or x.shape != y.shape:
            raise DomainError(f"x and y must be matching (n, J) arrays, got {x.shape}, {y.shape}")
        if x.shape[0] < 2 or x.shape[1] < 2:
            raise DomainError(f"need at least 2 clusters of size >= 2, got {x.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DomainError("x and y must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def J(self) -> int:
        return self.x.shape[1]

    @property
    def N(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class LmmFit:
    beta0_hat: float
    beta1_hat: float
    tau2_hat: float
    sigma2_hat: float
    se_beta0: float
    se_beta1: float
    loglik: float
    n: int
    J: int
    boundary: bool = False
    n_evals: int = 0

    @property
    def N(self) -> int:
        return self.n * self.J


@dataclass(frozen=True)
class HypothesisThresholds:
    delta: float
    xi: float

    def __post_init__(self):
        if not self.xi > 0:
            raise DomainError(f"xi must be positive, got {self.xi!r}")


def generate_lmm(cfg: LmmConfig) -> LmmData:
    rng = np.random.default_rng(cfg.seed)
    x = rng.uniform(-1.0, 1.0, size=(cfg.n, cfg.J))
    b = rng.normal(0.0, cfg.tau, size=cfg.n)
    e = rng.normal(0.0, cfg.sigma, size=(cfg.n, cfg.J))
    y = cfg.beta0 + cfg.beta1 * x + b[:, None] + e
    return LmmData(x, y)


class _Stats:
    """Sufficient statistics of the balanced design with columns (1, x)."""

    def __init__(self, data: LmmData):
        x, y = data.x, data.y
        self.n, self.J, self.N = data.n, data.J, data.N
        self.x, self.y = x, y
        self.sx = x.sum(axis=1)
        self.sy = y.sum(axis=1)
        self.xtx = np.array([[self.N, x.sum()], [x.sum(), (x * x).sum()]])
        self.xty = np.array([y.sum(), (x * y).sum()])
        self.yty = float((y * y).sum())
        # within-cluster part (intercept row is exactly zero) and cluster totals
        xc = x - x.mean(axis=1, keepdims=True)
        yc = y - y.mean(axis=1, keepdims=True)
        self.wxx = np.array([[0.0, 0.0], [0.0, float((xc * xc).sum())]])
        self.wxy = np.array([0.0, float((xc * yc).sum())])
        self.cxx = np.array(
            [[self.n * self.J**2, self.J * self.sx.sum()],
             [self.J * self.sx.sum(), (self.sx**2).sum()]]
        )
        self.cxy = np.array([self.J * self.sy.sum(), (self.sx * self.sy).sum()])
        if np.ptp(x) == 0.0:
            raise DesignError("covariate is constant; beta0 and beta1 are not identified")

    def info(self, tau2: float, sigma2: float) -> tuple[np.ndarray, np.ndarray]:
        """sigma^2 X'V^-1 X and sigma^2 X'V^-1 y.

        Uses X'(I - w 11')X = W + (1/J - w) C with 1/J - w = sigma^2/(J lam),
        which avoids the cancellation in X'X - w C as tau^2/sigma^2 grows.
        """
        c = sigma2 / (self.J * (sigma2 + self.J * tau2))
        return self.wxx + c * self.cxx, self.wxy + c * self.cxy

    def gls(self, tau2: float, sigma2: float) -> tuple[np.ndarray, np.ndarray]:
        """GLS coefficients and sigma^2 X'V^-1 X."""
        info, rhs = self.info(tau2, sigma2)
        return np.linalg.solve(info, rhs), info

    def residuals(self, beta) -> np.ndarray:
        return self.y - beta[0] - beta[1] * self.x

    def loglik_and_grad(self, tau2: float, sigma2: float, beta=None):
        """Log-likelihood at (beta, tau2, sigma2) and its gradient in (tau2, sigma2).

        With ``beta=None`` beta is profiled out by GLS; by the envelope
        theorem the gradient of the profile equals the partial gradient.
        """
        J = self.J
        lam = sigma2 + J * tau2
        w = tau2 / lam
        if beta is None:
            beta, _ = self.gls(tau2, sigma2)
        r = self.residuals(beta)
        s = r.sum(axis=1)
        s2 = float((s * s).sum())
        within = float(((r - s[:, None] / J) ** 2).sum())
        quad = within / sigma2 + s2 / (J * lam)
        logdet = self.n * ((J - 1) * math.log(sigma2) + math.log(lam))
        ll = -0.5 * (self.N * _LOG_2PI + logdet + quad)
        g_tau2 = -0.5 * (self.n * J / lam - s2 / lam**2)
        vinv_r = r - w * s[:, None]
        vinv_r_sq = float((vinv_r * vinv_r).sum()) / sigma2**2
        g_sigma2 = -0.5 * (self.n * ((J - 1) / sigma2 + 1.0 / lam) - vinv_r_sq)
        return ll, np.array([g_tau2, g_sigma2]), beta

    def moment_start(self) -> tuple[float, float]:
        # one-way ANOVA on OLS residuals
        beta = np.linalg.solve(self.xtx, self.xty)
        r = self.residuals(beta)
        rbar = r.mean(axis=1)
        msw = ((r - rbar[:, None]) ** 2).sum() / (self.n * (self.J - 1))
        msb = self.J * ((rbar - rbar.mean()) ** 2).sum() / (self.n - 1)
        sigma2 = max(msw, 1e-8 * max(self.yty / self.N, 1e-300))
        tau2 = max((msb - msw) / self.J, 0.05 * sigma2)
        return tau2, sigma2


def lmm_loglik(data: LmmData, beta0: float, beta1: float, tau2: float, sigma2: float) -> float:
    """Marginal Gaussian log-likelihood at the given parameters (tau2 may be 0)."""
    if tau2 < 0 or sigma2 <= 0:
        raise DomainError(f"need tau2 >= 0 and sigma2 > 0, got {tau2}, {sigma2}")
    return _Stats(data).loglik_and_grad(tau2, sigma2, np.array([beta0, beta1]))[0]


def _fit_from(stats: _Stats, tau2: float, sigma2: float, boundary: bool, n_evals: int) -> LmmFit:
    beta, info = stats.gls(tau2, sigma2)
    cov = sigma2 * np.linalg.inv(info)
    ll = stats.loglik_and_grad(tau2, sigma2, beta)[0]
    return LmmFit(
        beta0_hat=float(beta[0]),
        beta1_hat=float(beta[1]),
        tau2_hat=float(tau2),
        sigma2_hat=float(sigma2),
        se_beta0=float(math.sqrt(cov[0, 0])),
        se_beta1=float(math.sqrt(cov[1, 1])),
        loglik=float(ll),
        n=stats.n,
        J=stats.J,
        boundary=boundary,
        n_evals=n_evals,
    )


_RESTART_FACTORS = ((1.0, 1.0), (4.0, 0.5), (0.25, 2.0))


def fit_lmm_ml(data: LmmData, max_iter: int = 500) -> LmmFit:
    """Maximum-likelihood fit of the random-intercept model.

    The profile log-likelihood over (log tau^2, log sigma^2) is maximized by
    L-BFGS-B with an analytic gradient, from the ANOVA moment estimates and
    two perturbed copies of them. If the likelihood is no better inside the
    parameter space than on the tau^2 = 0 edge, the edge fit is returned with
    ``boundary=True``.

    Raises:
        DesignError: If the covariate is constant.
        FittingError: If no start converges.
    """
    stats = _Stats(data)
    scale = max(stats.yty / stats.N, 1e-300)
    lo_log_tau2 = math.log(scale) - 30.0
    n_evals = 0

    def negll(theta):
        nonlocal n_evals
        n_evals += 1
        tau2, sigma2 = math.exp(theta[0]), math.exp(theta[1])
        ll, g, _ = stats.loglik_and_grad(tau2, sigma2)
        return -ll, -g * np.array([tau2, sigma2])

    tau2_0, sigma2_0 = stats.moment_start()
    bounds = [(lo_log_tau2, math.log(scale) + 20.0), (math.log(scale) - 30.0, math.log(scale) + 20.0)]
    best, trace = None, []
    for ft, fs in _RESTART_FACTORS:
        x0 = np.array([math.log(tau2_0 * ft), math.log(sigma2_0 * fs)])
        res = optimize.minimize(
            negll, x0, jac=True, method="L-BFGS-B", bounds=bounds,
            options=dict(maxiter=max_iter, ftol=1e-15, gtol=1e-10),
        )
        trace.append((tuple(x0), res.status, float(res.fun), res.message))
        ok = res.success or np.max(np.abs(res.jac)) < 1e-5 * max(1.0, abs(res.fun))
        if ok and (best is None or res.fun < best.fun):
            best = res
    if best is None:
        raise FittingError("random-intercept ML fit did not converge", iterations=max_iter, trace=trace)

    tau2, sigma2 = math.exp(best.x[0]), math.exp(best.x[1])

    # tau2 = 0 edge: OLS coefficients with sigma2 = RSS / N
    beta_ols = np.linalg.solve(stats.xtx, stats.xty)
    r = stats.residuals(beta_ols)
    sigma2_edge = float((r * r).sum()) / stats.N
    ll_edge = stats.loglik_and_grad(0.0, sigma2_edge, beta_ols)[0]
    if best.x[0] <= lo_log_tau2 + 1e-6 or ll_edge >= -best.fun - 1e-10:
        return _fit_from(stats, 0.0, sigma2_edge, True, n_evals)
    return _fit_from(stats, tau2, sigma2, False, n_evals)


def _wald_report(z: float) -> TestReport:
    upper, lower = normal_cdf(-z), normal_cdf(z)
    return TestReport(z, upper, lower, two_sided(upper, lower))


def wald_test_beta1(fit: LmmFit, delta: float) -> TestReport:
    """Wald test of H0: beta1 <= delta; the p-value is ``p_upper``."""
    return _wald_report((fit.beta1_hat - delta) / fit.se_beta1)


def tau2_asymptotic_variance(tau2: float, sigma2: float, J: int) -> float:
    """Limiting variance of sqrt(N) (tau2_hat - tau2), N = total observations."""
    return 2.0 * sigma2**2 / (J * (J - 1)) + 2.0 * (J * tau2 + sigma2) ** 2 / J


def wald_test_tau2(fit: LmmFit, xi: float, J: int | None = None, N: int | None = None) -> TestReport:
    """Wald test of H0: tau^2 <= xi on the log scale (delta method).

    ``N`` is the total observation count n*J. A fit on the tau^2 = 0 edge has
    no log-scale statistic; the report then carries p_upper = 1 and
    ``boundary=True``.
    """
    if not xi > 0:
        raise DomainError(f"xi must be positive, got {xi!r}")
    J = fit.J if J is None else J
    N = fit.N if N is None else N
    if fit.tau2_hat <= 0.0:
        return TestReport(-math.inf, 1.0, 0.0, 0.0, boundary=True)
    var = tau2_asymptotic_variance(fit.tau2_hat, fit.sigma2_hat, J) / (N * fit.tau2_hat**2)
    return _wald_report((math.log(fit.tau2_hat) - math.log(xi)) / math.sqrt(var))


# --------------------------------------------------------------------------
# Gibbs sampler


@dataclass(frozen=True)
class GibbsDraws:
    """Post-burn-in draws, one entry per retained iteration."""

    beta0: np.ndarray
    beta1: np.ndarray
    tau2: np.ndarray
    sigma2: np.ndarray
    seed: int
    burnin: int


@dataclass(frozen=True)
class GibbsPop:
    pop_beta1: float
    pop_tau2: float
    mcse_beta1: float
    mcse_tau2: float
    draws: GibbsDraws | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        check_probability(self.pop_beta1, "pop_beta1")
        check_probability(self.pop_tau2, "pop_tau2")


def gibbs_sample(
    data: LmmData,
    iters: int = 20000,
    burnin: int = 5000,
    seed: int = 0,
    prior_shape: float = 0.001,
    prior_rate: float = 0.001,
) -> GibbsDraws:
    """Gibbs sampler for the random-intercept model.

    Priors: flat on (beta0, beta1), inverse-gamma(shape, rate) on tau^2 and
    sigma^2. Each sweep draws (beta, b) as a block given the variances
    (beta from its b-marginal conditional, then b | beta), followed by the
    two inverse-gamma conditionals.
    """
    if not (isinstance(iters, (int, np.integer)) and isinstance(burnin, (int, np.integer))):
        raise DomainError("iters and burnin must be integers")
    if not (iters > burnin >= 0):
        raise DomainError(f"need iters > burnin >= 0, got iters={iters}, burnin={burnin}")
    st = _Stats(data)
    rng = np.random.default_rng(seed)
    n, J, N = st.n, st.J, st.N
    sx, sy = st.sx, st.sy
    xtx, xty, yty = st.xtx, st.xty, st.yty
    shape_sigma = prior_shape + 0.5 * N
    shape_tau = prior_shape + 0.5 * n

    tau2, sigma2 = st.moment_start()
    keep = iters - burnin
    out = np.empty((4, keep))
    for it in range(iters):
        info, rhs = st.info(tau2, sigma2)
        chol = np.linalg.cholesky(info)
        mean = np.linalg.solve(info, rhs)
        # beta ~ N(mean, sigma2 info^-1): solve L' u = z
        z = rng.standard_normal(2)
        beta = mean + math.sqrt(sigma2) * np.linalg.solve(chol.T, z)
        b0, b1 = float(beta[0]), float(beta[1])

        s = sy - J * b0 - b1 * sx
        v = 1.0 / (J / sigma2 + 1.0 / tau2)
        b = v * s / sigma2 + math.sqrt(v) * rng.standard_normal(n)

        # sum of squared residuals y - X beta - b, from sufficient statistics
        rss_fixed = yty - 2.0 * (b0 * xty[0] + b1 * xty[1]) + beta @ xtx @ beta
        bb = float(b @ b)
        sse = rss_fixed - 2.0 * float(b @ s) + J * bb
        sigma2 = (prior_rate + 0.5 * sse) / rng.gamma(shape_sigma)
        tau2 = (prior_rate + 0.5 * bb) / rng.gamma(shape_tau)
        if not (math.isfinite(sigma2) and math.isfinite(tau2) and math.isfinite(b0)
                and math.isfinite(b1) and sigma2 > 0 and tau2 > 0):
            raise SamplerDivergenceError(
                f"non-finite conditional parameters at iteration {it}", iterations=it
            )
        if it >= burnin:
            out[:, it - burnin] = (b0, b1, tau2, sigma2)
    return GibbsDraws(out[0], out[1], out[2], out[3], seed=seed, burnin=burnin)


def batch_means_se(series: np.ndarray, n_batches: int | None = None) -> float:
    """Monte Carlo standard error of a chain average by non-overlapping batch means."""
    series = np.asarray(series, dtype=float)
    m = series.size
    k = n_batches or max(2, int(math.sqrt(m)))
    size = m // k
    if size < 1:
        return float("nan")
    means = series[: k * size].reshape(k, size).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(k))


def pop_below(draws: np.ndarray, threshold: float) -> tuple[float, float]:
    """Posterior frequency of ``draws <= threshold`` and its batch-means MCSE."""
    ind = (np.asarray(draws) <= threshold).astype(float)
    return float(ind.mean()), batch_means_se(ind)


def gibbs_pop(
    data: LmmData,
    thresholds: HypothesisThresholds,
    iters: int = 20000,
    burnin: int = 5000,
    seed: int = 0,
    **prior,
) -> GibbsPop:
    """Posterior probabilities of H0: beta1 <= delta and H0: tau^2 <= xi."""
    draws = gibbs_sample(data, iters, burnin, seed, **prior)
    p1, se1 = pop_below(draws.beta1, thresholds.delta)
    p2, se2 = pop_below(draws.tau2, thresholds.xi)
    return GibbsPop(p1, p2, se1, se2, draws)
