"""Table and figure datasets: content, determinism and CSV layout."""

from __future__ import annotations

import csv
import io
import math

import numpy as np
import pytest
from scipy.stats import kstest, spearmanr

from lindley import golden
from lindley.experiments import (
    EXPERIMENTS,
    OUTPUT_DIR_ENV,
    RANEFF_DESIGNS,
    ExperimentRecord,
    birth_sweep_grid,
    raneff_gap_summary,
    records_to_csv,
    run_experiment,
    run_fig_birth_sweep,
    run_fig_coin_sweep,
    run_fig_mvn,
    run_fig_prior_sweep,
    run_fig_raneff,
    run_table1,
    run_table2,
    splitmix64,
    unit_seed,
)


def parse(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestSeeding:
    def test_splitmix_reference_vector(self):
        # first outputs of the reference SplitMix64 generator seeded with 0
        assert splitmix64(0) == 0xE220A8397B1DCDAF
        assert splitmix64(0x9E3779B97F4A7C15) == 0x6E789E6AA1B965F4

    def test_unit_seeds_distinct(self):
        seeds = {unit_seed(2020, i) for i in range(10_000)}
        assert len(seeds) == 10_000
        assert all(0 <= s < 2**64 for s in seeds)


class TestCsv:
    def test_union_of_columns_and_formatting(self):
        recs = [
            ExperimentRecord("x", {"a": 1}, p_value=0.1, extras={"flag": True}),
            ExperimentRecord("x", {"a": 2, "b": 0.5}, pop=1 / 3),
        ]
        rows = parse(records_to_csv(recs))
        assert list(rows[0]) == ["experiment_id", "a", "p_value", "pop", "flag", "b"]
        assert rows[0]["flag"] == "true" and rows[0]["pop"] == ""
        assert float(rows[1]["pop"]) == 1 / 3  # repr round-trips exactly

    def test_run_experiment_uses_env_directory(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "out"))
        path = run_experiment("table1")
        assert path == tmp_path / "out" / "table1.csv"
        assert path.read_text() == records_to_csv(run_table1())

    def test_unknown_experiment(self):
        with pytest.raises(KeyError):
            run_experiment("table9")


class TestTables:
    def test_table1(self):
        recs = run_table1()
        assert len(recs) == 7
        for rec, (a, printed) in zip(recs, golden.TABLE1):
            assert rec.parameters["alpha"] == rec.parameters["beta"] == a
            assert rec.pop == pytest.approx(printed, abs=golden.TABLE1_TOL)
            assert rec.p_value == pytest.approx(0.01812363, abs=1e-8)

    def test_table2(self):
        recs = run_table2()
        assert len(recs) == 17
        for rec, (a, printed) in zip(recs, golden.TABLE2):
            assert rec.pop == pytest.approx(printed, abs=golden.TABLE2_TOL)
        assert recs[-1].pop == pytest.approx(recs[-1].p_value, abs=1e-6)

    def test_prior_sweep_monotone(self):
        pops = [r.pop for r in run_fig_prior_sweep()]
        assert all(a < b for a, b in zip(pops, pops[1:]))


class TestBinomialSweeps:
    @pytest.fixture(scope="class")
    @staticmethod
    def birth():
        return run_fig_birth_sweep()

    def test_grid(self):
        grid = birth_sweep_grid()
        assert len(grid) == 60 and grid[0] == 50 and grid[-1] == 2 * 56099

    def test_rounding(self, birth):
        for r in birth:
            assert r.parameters["y"] == math.floor(0.5044297 * r.parameters["n"] + 0.5)

    def test_negbinom_tracks_pop(self, birth):
        for r in birth:
            assert abs(r.extras["p_negbinom"] - r.pop) / r.pop < 0.01

    def test_binomial_above_negbinom(self, birth):
        assert all(r.extras["p_binom"] > r.extras["p_negbinom"] for r in birth)

    def test_pvalue_range(self, birth):
        assert birth[0].extras["p_binom"] > 0.4
        assert birth[-1].extras["p_binom"] < 0.01

    def test_coin_sweep(self):
        recs = run_fig_coin_sweep()
        assert [r.parameters["n"] for r in recs] == list(range(4, 121, 4))
        (obs,) = [r for r in recs if r.extras["observed_experiment"]]
        assert obs.parameters["n"] == 12 and obs.parameters["y"] == 9
        assert obs.extras["p_negbinom"] == pytest.approx(0.03271484, abs=1e-8)
        assert obs.extras["p_binom"] == pytest.approx(0.07299805, abs=1e-8)
        assert obs.pop == pytest.approx(0.032715, abs=5e-7)
        for r in recs:
            assert abs(r.extras["log_ratio_negbinom"]) < abs(r.extras["log_ratio_binom"])


class TestMvnStudy:
    @pytest.fixture(scope="class")
    @staticmethod
    def recs():
        return run_fig_mvn()

    def test_shape(self, recs):
        assert len(recs) == 2000
        assert {r.parameters["contrast"] for r in recs} == {0, 1}

    def test_gaps(self, recs):
        assert max(abs(r.p_value - r.pop) for r in recs) < 1e-3
        assert max(abs(r.extras["p_two_sided"] - r.extras["pop_two_sided"]) for r in recs) < 1e-3

    def test_correlation(self, recs):
        p = [r.p_value for r in recs]
        q = [r.pop for r in recs]
        assert np.corrcoef(p, q)[0, 1] > 0.9999

    def test_null_uniformity(self, recs):
        p = [r.p_value for r in recs if r.parameters["contrast"] == 0]
        assert kstest(p, "uniform").statistic < 0.05

    def test_replication_order_free(self):
        a = run_fig_mvn(replications=10, seed=5)
        b = run_fig_mvn(replications=20, seed=5)
        assert records_to_csv(a) == records_to_csv(b[:20])

    def test_validation(self):
        with pytest.raises(ValueError):
            run_fig_mvn(replications=0)


class TestRandomEffectsStudy:
    @pytest.fixture(scope="class")
    @staticmethod
    def recs():
        return run_fig_raneff(seed=2020)

    def test_designs_and_grids(self, recs):
        cells = {(r.parameters["n"], r.parameters["J"], r.parameters["test"]) for r in recs}
        assert cells == {(n, J, t) for n, J in RANEFF_DESIGNS for t in ("beta1", "tau2")}
        for r in recs:
            assert 0 <= r.p_value <= 1 and 0 <= r.pop <= 1 and r.extras["mcse"] >= 0

    def test_median_gaps(self, recs):
        s = raneff_gap_summary(recs)
        assert s[(500, 5, "beta1")]["median"] < 0.03
        assert s[(500, 5, "tau2")]["median"] < 0.05
        assert s[(100, 5, "beta1")]["median"] < 0.06
        assert s[(100, 5, "tau2")]["median"] < 0.10

    def test_comonotone(self, recs):
        for n, J in RANEFF_DESIGNS:
            for test in ("beta1", "tau2"):
                cell = [r for r in recs if (r.parameters["n"], r.parameters["J"], r.parameters["test"]) == (n, J, test)]
                p = [r.p_value for r in cell]
                q = [r.pop for r in cell]
                assert all(a <= b for a, b in zip(p, p[1:]))
                assert all(a <= b for a, b in zip(q, q[1:]))
                if test == "beta1":
                    assert spearmanr(p, q).statistic > 0.999

    def test_coefficient_test_agrees_better(self, recs):
        s = raneff_gap_summary(recs)
        worst = {t: max(v["max"] for k, v in s.items() if k[2] == t) for t in ("beta1", "tau2")}
        assert worst["tau2"] >= worst["beta1"]


class TestDeterminism:
    @pytest.mark.parametrize("name", sorted(EXPERIMENTS))
    def test_byte_identical(self, name, tmp_path):
        kwargs = {"fig_mvn": dict(replications=50), "fig_raneff": dict(iters=1500, burnin=500)}.get(name, {})
        a = run_experiment(name, tmp_path / "a", **kwargs).read_bytes()
        b = run_experiment(name, tmp_path / "b", **kwargs).read_bytes()
        assert a == b and len(a) > 0

    def test_seed_changes_output(self):
        assert records_to_csv(run_fig_mvn(replications=5, seed=1)) != records_to_csv(run_fig_mvn(replications=5, seed=2))
