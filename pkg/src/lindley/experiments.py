"""Seeded reproductions of the tables and figure datasets, written as CSV.

Every row is self-describing: it carries the experiment id and the full
parameter set next to the p-value and posterior probability. Monte Carlo
experiments derive one RNG stream per work unit (replication or design
cell) as ``splitmix64(master_seed + unit_index)``, so units can run in any
order or in parallel and still reproduce byte for byte.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import golden
from .discrete import (
    BetaParams,
    BinomialSample,
    beta_posterior_pop,
    binom_exact_pvalue,
    negbinom_pvalue,
)
from .errors import NumericalError
from .mvn import MvnModel, MvnPrior, mvn_pop, mvn_posterior, mvn_pvalues, sasabuchi_z
from .random_effects import (
    LmmConfig,
    fit_lmm_ml,
    generate_lmm,
    gibbs_sample,
    pop_below,
    wald_test_beta1,
    wald_test_tau2,
)

__all__ = [
    "ExperimentRecord",
    "splitmix64",
    "unit_seed",
    "records_to_csv",
    "write_csv",
    "run_table1",
    "run_table2",
    "run_fig_prior_sweep",
    "run_fig_birth_sweep",
    "run_fig_coin_sweep",
    "run_fig_mvn",
    "run_fig_raneff",
    "raneff_gap_summary",
    "EXPERIMENTS",
    "run_experiment",
    "OUTPUT_DIR_ENV",
]

OUTPUT_DIR_ENV = "LINDLEY_OUTPUT_DIR"
VAGUE_BETA = 1e-6
BIRTH_RATIO = 0.5044297
COIN_RATIO = 0.75

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One round of the SplitMix64 finalizer."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def unit_seed(master: int, index: int) -> int:
    return splitmix64((master + index) & _MASK64)


@dataclass
class ExperimentRecord:
    experiment_id: str
    parameters: dict
    p_value: float | None = None
    pop: float | None = None
    extras: dict = field(default_factory=dict)

    def row(self) -> dict:
        out = {"experiment_id": self.experiment_id}
        out.update(self.parameters)
        out["p_value"] = self.p_value
        out["pop"] = self.pop
        out.update(self.extras)
        return out


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def records_to_csv(records: list[ExperimentRecord]) -> str:
    """Serialize records; columns are the union of row keys in first-seen order."""
    rows = [r.row() for r in records]
    columns: dict[str, None] = {}
    for row in rows:
        for key in row:
            columns.setdefault(key, None)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(columns))
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def write_csv(records: list[ExperimentRecord], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(records_to_csv(records))
    return path


# --------------------------------------------------------------------------
# binomial tables and sweeps


def _prior_rows(experiment_id, data, grid, p_value, printed=None):
    out = []
    for i, a in enumerate(grid):
        pop = beta_posterior_pop(data, BetaParams(a, a), 0.5).pop_le
        extras = {} if printed is None else {"printed": printed[i]}
        out.append(ExperimentRecord(experiment_id, {"y": data.y, "n": data.n, "alpha": a, "beta": a},
                                    p_value=p_value, pop=pop, extras=extras))
    return out


def run_table1() -> list[ExperimentRecord]:
    """Beta-posterior probability of theta <= 0.5 for the birth data.

    ``p_value`` is the exact upper binomial p-value the column converges to.
    """
    data = BinomialSample(golden.BIRTH["y"], golden.BIRTH["n"])
    grid, printed = zip(*golden.TABLE1)
    return _prior_rows("table1", data, grid, binom_exact_pvalue(data, 0.5, "upper"), printed)


def run_table2() -> list[ExperimentRecord]:
    """Beta-posterior probability of theta <= 0.5 for 9 heads in 12 tosses.

    ``p_value`` is the negative-binomial p-value, the alpha = beta -> 0 limit.
    """
    data = BinomialSample(golden.COIN["y"], golden.COIN["n"])
    grid, printed = zip(*golden.TABLE2)
    return _prior_rows("table2", data, grid, negbinom_pvalue(data, 0.5), printed)


def run_fig_prior_sweep(points: int = 61) -> list[ExperimentRecord]:
    """Coin-data posterior probability on a log grid of alpha = beta in [1e-6, 2]."""
    data = BinomialSample(golden.COIN["y"], golden.COIN["n"])
    grid = [float(a) for a in np.geomspace(1e-6, 2.0, points)]
    return _prior_rows("fig_prior_sweep", data, grid, negbinom_pvalue(data, 0.5))


def _sweep_row(experiment_id: str, y: int, n: int, ratio: float) -> ExperimentRecord:
    data = BinomialSample(y, n)
    p_b = binom_exact_pvalue(data, 0.5, "upper")
    p_nb = negbinom_pvalue(data, 0.5)
    pop = beta_posterior_pop(data, BetaParams(VAGUE_BETA, VAGUE_BETA), 0.5).pop_le
    return ExperimentRecord(
        experiment_id,
        {"ratio": ratio, "n": n, "y": y, "alpha": VAGUE_BETA, "beta": VAGUE_BETA},
        p_value=p_nb,
        pop=pop,
        extras={
            "p_binom": p_b,
            "p_negbinom": p_nb,
            "ratio_binom": p_b / pop,
            "ratio_negbinom": p_nb / pop,
            "log_ratio_binom": math.log(p_b / pop),
            "log_ratio_negbinom": math.log(p_nb / pop),
        },
    )


def birth_sweep_grid(points: int = 60) -> list[int]:
    return [int(round(v)) for v in np.geomspace(50, 2 * golden.BIRTH["n"], points)]


def run_fig_birth_sweep(points: int = 60) -> list[ExperimentRecord]:
    """p-values and PoP with y/n held at the birth-data ratio while n grows."""
    out = []
    for n in birth_sweep_grid(points):
        y = int(math.floor(BIRTH_RATIO * n + 0.5))
        out.append(_sweep_row("fig_birth_sweep", y, n, BIRTH_RATIO))
    return out


def run_fig_coin_sweep(n_max: int = 120) -> list[ExperimentRecord]:
    """p-values and PoP with y/n = 0.75 for n = 4, 8, ..., n_max."""
    out = []
    for n in range(4, n_max + 1, 4):
        rec = _sweep_row("fig_coin_sweep", 3 * n // 4, n, COIN_RATIO)
        rec.extras["observed_experiment"] = n == golden.COIN["n"]
        out.append(rec)
    return out


# --------------------------------------------------------------------------
# multivariate normal study


def run_fig_mvn(
    replications: int = 1000,
    seed: int = 2020,
    n: int = 100,
    mu=(0.0, 0.0),
    sigma=None,
    prior_scale: float = 1000.0,
) -> list[ExperimentRecord]:
    """Contrast-wise p-values against vague-prior PoPs over seeded replications.

    The generating mean and covariance default to 0 and I; the contrasts are
    the unit vectors.
    """
    if replications < 1:
        raise ValueError("replications must be >= 1")
    mu = np.asarray(mu, dtype=float)
    p = mu.shape[0]
    sigma = np.eye(p) if sigma is None else np.asarray(sigma, dtype=float)
    model = MvnModel(sigma, n)
    prior = MvnPrior.vague(p, prior_scale)
    contrasts = np.eye(p)
    chol = np.linalg.cholesky(sigma)
    out = []
    for r in range(replications):
        rng = np.random.default_rng(unit_seed(seed, r))
        sample = mu + rng.standard_normal((n, p)) @ chol.T
        xbar = sample.mean(axis=0)
        tests = mvn_pvalues(sasabuchi_z(model, xbar, contrasts))
        pops = mvn_pop(mvn_posterior(model, xbar, prior), contrasts)
        for k, (t, q) in enumerate(zip(tests, pops)):
            out.append(ExperimentRecord(
                "fig_mvn",
                {"replication": r, "contrast": k, "n": n, "p": p, "prior_scale": prior_scale, "seed": seed},
                p_value=t.p_upper,
                pop=q.pop_le,
                extras={
                    "z": t.statistic,
                    "p_two_sided": t.p_two_sided,
                    "pop_two_sided": q.pop_two_sided,
                },
            ))
    return out


# --------------------------------------------------------------------------
# random-effects study

RANEFF_DESIGNS = ((100, 2), (100, 5), (500, 2), (500, 5))
GRID_POINTS = 41


def _raneff_cell(idx: int, n: int, J: int, seed: int, iters: int, burnin: int) -> list[ExperimentRecord]:
    params = {"n": n, "J": J, "seed": seed}
    data_seed = unit_seed(seed, idx)
    try:
        data = generate_lmm(LmmConfig(n=n, J=J, seed=data_seed))
        fit = fit_lmm_ml(data)
        draws = gibbs_sample(data, iters, burnin, seed=unit_seed(seed, 1000 + idx))
    except NumericalError as exc:
        return [ExperimentRecord("fig_raneff", dict(params, test="", threshold=None),
                                 extras={"error": f"{type(exc).__name__}: {exc}"})]
    fit_cols = {
        "beta1_hat": fit.beta1_hat,
        "se_beta1": fit.se_beta1,
        "tau2_hat": fit.tau2_hat,
        "sigma2_hat": fit.sigma2_hat,
        "boundary": fit.boundary,
    }
    out = []
    for delta in np.linspace(fit.beta1_hat - 4 * fit.se_beta1, fit.beta1_hat + 4 * fit.se_beta1, GRID_POINTS):
        pop, se = pop_below(draws.beta1, delta)
        out.append(ExperimentRecord(
            "fig_raneff", dict(params, test="beta1", threshold=float(delta)),
            p_value=wald_test_beta1(fit, delta).p_upper, pop=pop,
            extras=dict(fit_cols, mcse=se),
        ))
    if fit.tau2_hat > 0:
        for xi in fit.tau2_hat * np.geomspace(0.25, 4.0, GRID_POINTS):
            pop, se = pop_below(draws.tau2, xi)
            out.append(ExperimentRecord(
                "fig_raneff", dict(params, test="tau2", threshold=float(xi)),
                p_value=wald_test_tau2(fit, xi).p_upper, pop=pop,
                extras=dict(fit_cols, mcse=se),
            ))
    else:
        out.append(ExperimentRecord(
            "fig_raneff", dict(params, test="tau2", threshold=None),
            extras=dict(fit_cols, error="tau2_hat on the boundary; log-scale Wald test undefined"),
        ))
    return out


def run_fig_raneff(
    seed: int = 2020,
    iters: int = 20000,
    burnin: int = 5000,
    designs=RANEFF_DESIGNS,
) -> list[ExperimentRecord]:
    """Wald p-values against Gibbs PoPs for both one-sided tests.

    One dataset per (n, J) design at beta0 = 0.2, beta1 = 1, tau = sigma = 0.5;
    delta sweeps beta1_hat +/- 4 se and xi sweeps tau2_hat * [1/4, 4]
    geometrically, 41 points each.
    """
    out = []
    for idx, (n, J) in enumerate(designs):
        out.extend(_raneff_cell(idx, n, J, seed, iters, burnin))
    return out


def raneff_gap_summary(records: list[ExperimentRecord]) -> dict:
    """Median and max |p - PoP| per (n, J, test)."""
    groups: dict = {}
    for r in records:
        if r.p_value is None or r.pop is None:
            continue
        key = (r.parameters["n"], r.parameters["J"], r.parameters["test"])
        groups.setdefault(key, []).append(abs(r.p_value - r.pop))
    return {
        k: {"median": float(np.median(v)), "mean": float(np.mean(v)), "max": float(np.max(v))}
        for k, v in groups.items()
    }


# --------------------------------------------------------------------------
# registry

EXPERIMENTS: dict[str, Callable[..., list[ExperimentRecord]]] = {
    "table1": run_table1,
    "table2": run_table2,
    "fig_prior_sweep": run_fig_prior_sweep,
    "fig_birth_sweep": run_fig_birth_sweep,
    "fig_coin_sweep": run_fig_coin_sweep,
    "fig_mvn": run_fig_mvn,
    "fig_raneff": run_fig_raneff,
}
SEEDED = {"fig_mvn", "fig_raneff"}


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "results"))


def run_experiment(name: str, out_dir=None, **kwargs) -> Path:
    """Run one registered experiment and write ``<name>.csv`` into ``out_dir``."""
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    out_dir = default_output_dir() if out_dir is None else Path(out_dir)
    records = EXPERIMENTS[name](**kwargs)
    return write_csv(records, out_dir / f"{name}.csv")
