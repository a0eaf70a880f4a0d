"""Command-line front end.

    lindley binom --y 28298 --n 56099 --theta0 0.5 --side upper --method exact
    lindley negbinom --y 9 --n 12
    lindley normal --theta-hat 0.3 --sigma2 1 --n 20 --prior flat
    lindley experiment table2
    lindley selftest

Exit status: 0 on success, 1 on a usage error, 2 on a numerical error
(or on a failed self-test).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .discrete import (
    BetaParams,
    BinomialSample,
    beta_posterior_pop,
    binom_exact_test,
    binom_normal_approx_test,
    lindley_point_mass_pop,
    negbinom_pvalue,
)
from .errors import DomainError, NumericalError
from .experiments import EXPERIMENTS, SEEDED, default_output_dir, records_to_csv, write_csv
from .mvn import MvnModel, MvnPrior, mvn_pop, mvn_posterior, mvn_pvalues, reject_all, sasabuchi_z
from .normal import NormalPrior, TwoSampleSummary, birth_example_pop, normal_posterior, normal_pop, z_pvalues
from .random_effects import (
    HypothesisThresholds,
    LmmConfig,
    fit_lmm_ml,
    generate_lmm,
    gibbs_pop,
    wald_test_beta1,
    wald_test_tau2,
)
from .selftest import run_selftest

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2
SIG_DIGITS = 15


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---- argument types (range-checked before dispatch)

def _number(kind, lo=None, hi=None, lo_open=False, hi_open=False):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a valid {kind.__name__}: {text!r}")
        if isinstance(v, float) and math.isnan(v):
            raise argparse.ArgumentTypeError("NaN is not allowed")
        if lo is not None and (v < lo or (lo_open and v == lo)):
            raise argparse.ArgumentTypeError(f"must be {'>' if lo_open else '>='} {lo}, got {v}")
        if hi is not None and (v > hi or (hi_open and v == hi)):
            raise argparse.ArgumentTypeError(f"must be {'<' if hi_open else '<='} {hi}, got {v}")
        return v
    parse.__name__ = kind.__name__
    return parse


_count = _number(int, lo=0)
_positive_int = _number(int, lo=1)
_unit_open = _number(float, lo=0.0, hi=1.0, lo_open=True, hi_open=True)
_positive = _number(float, lo=0.0, lo_open=True, hi=math.inf, hi_open=True)
_finite = _number(float, lo=-math.inf, hi=math.inf, lo_open=True, hi_open=True)


def _vector(text: str) -> np.ndarray:
    try:
        v = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not np.all(np.isfinite(v)):
        raise argparse.ArgumentTypeError("entries must be finite")
    return v


def _matrix(text: str) -> np.ndarray:
    rows = [_vector(r) for r in text.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise argparse.ArgumentTypeError(f"ragged matrix {text!r}")
    return np.vstack(rows)


# ---- output

def _clean(value):
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{SIG_DIGITS}g}")
    return value


def _flatten(value, prefix="") -> dict:
    out = {}
    if isinstance(value, dict):
        for k, v in value.items():
            out.update(_flatten(v, f"{prefix}{k}."))
    elif isinstance(value, list):
        for i, v in enumerate(value):
            out.update(_flatten(v, f"{prefix}{i}."))
    else:
        out[prefix[:-1]] = value
    return out


def render(result: dict, fmt: str) -> str:
    result = _clean(result)
    if fmt == "json":
        return json.dumps(result, indent=2)
    flat = {k: str(v).lower() if isinstance(v, bool) else v for k, v in _flatten(result).items()}
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(flat.keys())
        w.writerow(["" if v is None else v for v in flat.values()])
        return buf.getvalue().rstrip("\n")
    return "\n".join(f"{k} = {v}" for k, v in flat.items())


# ---- subcommands

def _sample(args) -> BinomialSample:
    if args.y > args.n:
        raise UsageError(f"--y ({args.y}) must not exceed --n ({args.n})")
    return BinomialSample(args.y, args.n)


def cmd_binom(args) -> dict:
    data = _sample(args)
    test = (binom_exact_test if args.method == "exact" else binom_normal_approx_test)(data, args.theta0)
    post = beta_posterior_pop(data, BetaParams(args.alpha, args.beta), args.theta0)
    p = {"upper": test.p_upper, "lower": test.p_lower, "two-sided": test.p_two_sided}[args.side]
    return {
        "subcommand": "binom", "y": data.y, "n": data.n, "theta0": args.theta0,
        "side": args.side, "method": args.method, "p_value": p,
        "test": test.as_dict(),
        "prior": {"alpha": args.alpha, "beta": args.beta},
        "posterior": post.as_dict(),
    }


def cmd_negbinom(args) -> dict:
    if (args.n is None) == (args.failures is None):
        raise UsageError("give exactly one of --n or --failures")
    n = args.n if args.n is not None else args.y + args.failures
    if not 1 <= args.y <= n - 1:
        raise UsageError("need at least one success and one failure")
    data = BinomialSample(args.y, n)
    post = beta_posterior_pop(data, BetaParams(args.alpha, args.beta), args.theta0)
    return {
        "subcommand": "negbinom", "y": data.y, "n": n, "failures": data.failures,
        "theta0": args.theta0, "p_value": negbinom_pvalue(data, args.theta0),
        "prior": {"alpha": args.alpha, "beta": args.beta},
        "posterior": post.as_dict(),
    }


def cmd_lindley(args) -> dict:
    data = _sample(args)
    test = binom_normal_approx_test(data, args.theta0)
    return {
        "subcommand": "lindley", "y": data.y, "n": data.n, "theta0": args.theta0,
        "pop_point_mass": lindley_point_mass_pop(data, args.theta0),
        "pop_le_flat": birth_example_pop(data, args.theta0, "le"),
        "pop_ge_flat": birth_example_pop(data, args.theta0, "ge"),
        "test": test.as_dict(),
    }


def cmd_normal(args) -> dict:
    s = TwoSampleSummary(args.theta_hat, args.sigma2, args.n)
    if args.prior == "flat":
        prior = NormalPrior()
    else:
        if args.sigma0_sq is None:
            raise UsageError("--prior normal requires --sigma0-sq")
        prior = NormalPrior(args.mu0, args.sigma0_sq)
    mean, var = normal_posterior(s, prior)
    return {
        "subcommand": "normal", "theta_hat": s.theta_hat, "sigma2": s.sigma2, "n": s.n,
        "prior": "flat" if prior.flat else {"mu0": prior.mu0, "sigma0_sq": prior.sigma0_sq},
        "test": z_pvalues(s).as_dict(),
        "posterior_mean": mean, "posterior_var": var,
        "posterior": normal_pop(s, prior).as_dict(),
    }


def cmd_mvn(args) -> dict:
    p = args.xbar.shape[0]
    sigma = np.eye(p) if args.sigma is None else args.sigma
    contrasts = np.eye(p) if args.contrasts is None else args.contrasts
    mu0 = np.zeros(p) if args.mu0 is None else args.mu0
    sigma0 = args.prior_scale * np.eye(p) if args.sigma0 is None else args.sigma0
    if sigma.shape != (p, p) or sigma0.shape != (p, p) or mu0.shape != (p,) or contrasts.shape[1] != p:
        raise UsageError("dimensions of --xbar, --sigma, --sigma0, --mu0 and --contrasts disagree")
    model = MvnModel(sigma, args.n)
    tests = mvn_pvalues(sasabuchi_z(model, args.xbar, contrasts))
    post = mvn_posterior(model, args.xbar, MvnPrior(mu0, sigma0))
    pops = mvn_pop(post, contrasts)
    return {
        "subcommand": "mvn", "n": args.n, "p": p, "level": args.level,
        "contrasts": [
            {"contrast": c, "test": t.as_dict(), "posterior": q.as_dict()}
            for c, t, q in zip(contrasts, tests, pops)
        ],
        "reject_one_sided": reject_all([t.p_upper for t in tests], args.level),
        "reject_two_sided": reject_all([t.p_two_sided for t in tests], args.level),
        "mu_n": post.mu_n, "sigma_n": post.sigma_n,
    }


def cmd_lmm(args) -> dict:
    if args.iters <= args.burnin:
        raise UsageError("--iters must exceed --burnin")
    cfg = LmmConfig(args.n, args.J, args.beta0, args.beta1, args.tau, args.sigma, args.seed)
    data = generate_lmm(cfg)
    fit = fit_lmm_ml(data)
    pops = gibbs_pop(data, HypothesisThresholds(args.delta, args.xi), args.iters, args.burnin, args.seed + 1)
    return {
        "subcommand": "lmm", "config": dataclasses.asdict(cfg),
        "delta": args.delta, "xi": args.xi,
        "fit": {k: getattr(fit, k) for k in (
            "beta0_hat", "beta1_hat", "tau2_hat", "sigma2_hat", "se_beta0", "se_beta1", "loglik", "boundary")},
        "wald_beta1": wald_test_beta1(fit, args.delta).as_dict(),
        "wald_tau2": wald_test_tau2(fit, args.xi).as_dict(),
        "gibbs": {"pop_beta1": pops.pop_beta1, "mcse_beta1": pops.mcse_beta1,
                  "pop_tau2": pops.pop_tau2, "mcse_tau2": pops.mcse_tau2,
                  "iters": args.iters, "burnin": args.burnin, "seed": args.seed + 1},
    }


def cmd_experiment(args):
    names = sorted(EXPERIMENTS) if args.name == "all" else [args.name]
    out_dir = default_output_dir() if args.out_dir is None else args.out_dir
    written, texts = [], []
    for name in names:
        kwargs = {}
        if name in SEEDED and args.seed is not None:
            kwargs["seed"] = args.seed
        if name == "fig_mvn" and args.replications is not None:
            kwargs["replications"] = args.replications
        if name == "fig_raneff":
            if args.iters is not None:
                kwargs["iters"] = args.iters
            if args.burnin is not None:
                kwargs["burnin"] = args.burnin
        records = EXPERIMENTS[name](**kwargs)
        path = write_csv(records, f"{out_dir}/{name}.csv")
        written.append({"experiment": name, "path": str(path), "rows": len(records)})
        texts.append(records_to_csv(records))
    if args.format == "csv":
        return "".join(texts).rstrip("\n")
    return {"subcommand": "experiment", "written": written}


def cmd_selftest(args):
    checks = run_selftest(args.tolerance_scale)
    lines = [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} golden values reproduced")
    return "\n".join(lines), failed == 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lindley", description="p-values and posterior probabilities of the null")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name, help_text, fmt_default="json"):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--format", choices=("json", "csv", "plain"), default=fmt_default)
        p.set_defaults(parser=p)
        return p

    p = add("binom", "binomial p-values and Beta-posterior probabilities")
    p.add_argument("--y", type=_count, required=True, help="successes")
    p.add_argument("--n", type=_positive_int, required=True, help="trials")
    p.add_argument("--theta0", type=_unit_open, default=0.5)
    p.add_argument("--side", choices=("upper", "lower", "two-sided"), default="upper")
    p.add_argument("--method", choices=("exact", "normal"), default="exact")
    p.add_argument("--alpha", type=_positive, default=1.0, help="Beta prior alpha")
    p.add_argument("--beta", type=_positive, default=1.0, help="Beta prior beta")
    p.set_defaults(func=cmd_binom)

    p = add("negbinom", "negative-binomial p-value (sampling to the r-th failure)")
    p.add_argument("--y", type=_positive_int, required=True, help="successes")
    p.add_argument("--n", type=_positive_int, help="total trials (r = n - y)")
    p.add_argument("--failures", type=_positive_int, help="failures r")
    p.add_argument("--theta0", type=_unit_open, default=0.5)
    p.add_argument("--alpha", type=_positive, default=1e-6)
    p.add_argument("--beta", type=_positive, default=1e-6)
    p.set_defaults(func=cmd_negbinom)

    p = add("lindley", "posterior of a point null under the point-mass prior")
    p.add_argument("--y", type=_count, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--theta0", type=_unit_open, default=0.5)
    p.set_defaults(func=cmd_lindley)

    p = add("normal", "two-sample Z-test with known variance and its posterior")
    p.add_argument("--theta-hat", type=_finite, required=True)
    p.add_argument("--sigma2", type=_positive, required=True)
    p.add_argument("--n", type=_positive_int, required=True, help="per-group sample size")
    p.add_argument("--prior", choices=("flat", "normal"), default="flat")
    p.add_argument("--mu0", type=_finite, default=0.0)
    p.add_argument("--sigma0-sq", type=_positive)
    p.set_defaults(func=cmd_normal)

    p = add("mvn", "contrast-wise tests on a multivariate normal mean")
    p.add_argument("--xbar", type=_vector, required=True, help="sample mean, e.g. 0.1,-0.2")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--sigma", type=_matrix, help="known covariance, rows separated by ';' (default I)")
    p.add_argument("--contrasts", type=_matrix, help="one contrast per row (default unit vectors)")
    p.add_argument("--mu0", type=_vector)
    p.add_argument("--sigma0", type=_matrix)
    p.add_argument("--prior-scale", type=_positive, default=1000.0, help="Sigma0 = scale * I when --sigma0 is absent")
    p.add_argument("--level", type=_unit_open, default=0.05)
    p.set_defaults(func=cmd_mvn)

    p = add("lmm", "simulate, fit and test the random-intercept model")
    p.add_argument("--n", type=_number(int, lo=2), default=500, help="clusters")
    p.add_argument("--J", type=_number(int, lo=2), default=5, help="cluster size")
    p.add_argument("--beta0", type=_finite, default=0.2)
    p.add_argument("--beta1", type=_finite, default=1.0)
    p.add_argument("--tau", type=_positive, default=0.5)
    p.add_argument("--sigma", type=_positive, default=0.5)
    p.add_argument("--seed", type=_count, default=0)
    p.add_argument("--delta", type=_finite, default=1.0)
    p.add_argument("--xi", type=_positive, default=0.25)
    p.add_argument("--iters", type=_positive_int, default=20000)
    p.add_argument("--burnin", type=_count, default=5000)
    p.set_defaults(func=cmd_lmm)

    p = add("experiment", "regenerate a table or figure dataset as CSV", fmt_default="csv")
    p.add_argument("name", choices=sorted(EXPERIMENTS) + ["all"])
    p.add_argument("--out-dir", help="output directory (default $LINDLEY_OUTPUT_DIR or ./results)")
    p.add_argument("--seed", type=_count)
    p.add_argument("--replications", type=_positive_int)
    p.add_argument("--iters", type=_positive_int)
    p.add_argument("--burnin", type=_count)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("selftest", help="check every published closed-form value")
    p.add_argument("--tolerance-scale", type=_number(float, lo=0.0), default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest, parser=p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (UsageError, DomainError) as exc:
        args.parser.print_help(sys.stderr)
        print(f"lindley {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"lindley {args.subcommand}: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.subcommand == "selftest":
        text, ok = result
        print(text)
        return EXIT_OK if ok else EXIT_NUMERICAL
    print(result if isinstance(result, str) else render(result, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
