"""Command-line front end: routing, exit codes and serialization."""

from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
import time

import pytest

from lindley.cli import main, render
from lindley.discrete import BetaParams, BinomialSample, beta_posterior_pop


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestCalculators:
    def test_binom_exact(self, capsys):
        res = run_json(capsys, "binom", "--y", "28298", "--n", "56099", "--theta0", "0.5",
                       "--side", "upper", "--method", "exact")
        assert res["p_value"] == pytest.approx(0.01812363, abs=1e-8)
        assert set(res["test"]) == {"statistic", "p_upper", "p_lower", "p_two_sided", "boundary"}
        assert set(res["posterior"]) == {"pop_le", "pop_ge", "pop_two_sided", "bayes_factor", "bayes_factor_two_sided"}

    def test_binom_normal_two_sided(self, capsys):
        res = run_json(capsys, "binom", "--y", "28298", "--n", "56099", "--side", "two-sided", "--method", "normal")
        assert res["p_value"] == pytest.approx(0.03586658, abs=1e-8)

    def test_negbinom(self, capsys):
        res = run_json(capsys, "negbinom", "--y", "9", "--n", "12", "--theta0", "0.5")
        assert res["p_value"] == pytest.approx(0.03271484, abs=1e-8)
        assert res["posterior"]["pop_le"] == pytest.approx(0.032715, abs=5e-7)

    def test_negbinom_failures_flag(self, capsys):
        a = run_json(capsys, "negbinom", "--y", "9", "--failures", "3")
        b = run_json(capsys, "negbinom", "--y", "9", "--n", "12")
        assert a["p_value"] == b["p_value"]

    def test_lindley(self, capsys):
        res = run_json(capsys, "lindley", "--y", "28298", "--n", "56099")
        assert res["pop_point_mass"] == pytest.approx(0.9543474, abs=1e-7)

    def test_normal_flat(self, capsys):
        res = run_json(capsys, "normal", "--theta-hat", "0", "--sigma2", "1", "--n", "10", "--prior", "flat")
        assert res["posterior"]["pop_le"] == 0.5

    def test_normal_prior(self, capsys):
        res = run_json(capsys, "normal", "--theta-hat", "0.3", "--sigma2", "1", "--n", "20",
                       "--prior", "normal", "--mu0", "0", "--sigma0-sq", "0.1")
        assert res["posterior_mean"] == pytest.approx(0.3 * 0.1 / 0.2, rel=1e-14)

    def test_mvn(self, capsys):
        res = run_json(capsys, "mvn", "--xbar", "0.3,0.25", "--n", "100", "--sigma", "1,0;0,1")
        assert [c["test"]["statistic"] for c in res["contrasts"]] == pytest.approx([3.0, 2.5])
        assert res["reject_one_sided"] is True

    def test_lmm(self, capsys):
        res = run_json(capsys, "lmm", "--n", "50", "--J", "3", "--iters", "600", "--burnin", "100", "--seed", "4")
        assert 0 <= res["gibbs"]["pop_beta1"] <= 1
        assert 0 <= res["wald_beta1"]["p_upper"] <= 1
        assert res["fit"]["tau2_hat"] >= 0

    def test_plain_and_csv(self, capsys):
        code, out, _ = run(capsys, "negbinom", "--y", "9", "--n", "12", "--format", "plain")
        assert code == 0 and "p_value = 0.0327148437" in out
        code, out, _ = run(capsys, "negbinom", "--y", "9", "--n", "12", "--format", "csv")
        (row,) = list(csv.DictReader(io.StringIO(out)))
        assert float(row["posterior.pop_le"]) == pytest.approx(0.032715, abs=5e-7)


class TestSerialization:
    def test_fifteen_digit_round_trip(self, capsys):
        res = run_json(capsys, "binom", "--y", "9", "--n", "12", "--alpha", "0.7", "--beta", "0.7")
        direct = beta_posterior_pop(BinomialSample(9, 12), BetaParams(0.7, 0.7), 0.5)
        for key, value in direct.as_dict().items():
            assert res["posterior"][key] == float(f"{value:.15g}")

    def test_non_finite_becomes_null(self):
        out = json.loads(render({"a": float("inf"), "b": 1 / 3}, "json"))
        assert out == {"a": None, "b": float(f"{1 / 3:.15g}")}


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["binom", "--y", "5", "--n", "3"],
        ["binom", "--y", "1", "--n", "3", "--theta0", "1.5"],
        ["binom", "--y", "1", "--n", "3", "--alpha", "-1"],
        ["binom", "--y", "1", "--n", "3", "--bogus", "1"],
        ["binom", "--y", "x", "--n", "3"],
        ["normal", "--theta-hat", "nan", "--sigma2", "1", "--n", "2"],
        ["negbinom", "--y", "3"],
        ["negbinom", "--y", "3", "--n", "3"],
        ["normal", "--theta-hat", "0", "--sigma2", "1", "--n", "2", "--prior", "normal"],
        ["mvn", "--xbar", "1,2", "--n", "5", "--sigma", "1,0,0;0,1,0;0,0,1"],
        ["lmm", "--iters", "10", "--burnin", "10"],
        ["nosuch"],
        [],
    ])
    def test_usage_errors(self, capsys, argv):
        try:
            code = main(argv)  # errors found after parsing return the code
        except SystemExit as exc:  # argparse exits directly
            code = exc.code
        assert code == 1
        assert "usage:" in capsys.readouterr().err

    def test_degenerate_variance_is_usage_error(self, capsys):
        code, _, err = run(capsys, "lindley", "--y", "0", "--n", "10")
        assert code == 1 and "variance" in err

    def test_numerical_error(self, capsys):
        code, _, err = run(capsys, "mvn", "--xbar", "1,2", "--n", "5", "--sigma", "1,2;2,1")
        assert code == 2 and "positive definite" in err


class TestExperimentCommand:
    def test_writes_csv(self, capsys, tmp_path):
        code, out, _ = run(capsys, "experiment", "table2", "--out-dir", str(tmp_path))
        assert code == 0
        assert (tmp_path / "table2.csv").read_text().rstrip("\n") == out.rstrip("\n")
        assert len(out.strip().splitlines()) == 18

    def test_env_output_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("LINDLEY_OUTPUT_DIR", str(tmp_path))
        res = run_json(capsys, "experiment", "table1", "--format", "json")
        assert res["written"][0]["rows"] == 7
        assert (tmp_path / "table1.csv").exists()

    def test_seed_reproducible(self, capsys, tmp_path):
        argv = ["experiment", "fig_mvn", "--replications", "20", "--seed", "9", "--out-dir", str(tmp_path)]
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second


class TestSelftest:
    def test_passes(self, capsys):
        start = time.perf_counter()
        code, out, _ = run(capsys, "selftest")
        assert time.perf_counter() - start < 10
        assert code == 0
        lines = out.strip().splitlines()
        assert sum(line.startswith("PASS") for line in lines) == 32
        assert not any(line.startswith("FAIL") for line in lines)

    def test_injected_failure(self, capsys):
        code, out, _ = run(capsys, "selftest", "--tolerance-scale", "0")
        assert code == 2
        fail = [line for line in out.splitlines() if line.startswith("FAIL")]
        assert fail and "observed=" in fail[0] and "expected=" in fail[0]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lindley", "negbinom", "--y", "9", "--n", "12"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["p_value"] == pytest.approx(0.03271484, abs=1e-8)
