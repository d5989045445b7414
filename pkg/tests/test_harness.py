import json
import math

import numpy as np
import pandas as pd
import pytest
from scipy.stats import kstest

import application.mple_comparison_service as mple_comparison_service
import application.study_service as study_service
import infrastructure.config.paths as paths
from application.cli import envelope as envelope_cli
from application.cli import fit as fit_cli
from application.cli import simulate as simulate_cli
from application.cli import summarise as summarise_cli
from application.mple_comparison_service import MPLE_COLUMNS, run_mple_comparison
from application.ports import MpleComparisonConfig, SamplerOptions, Table1Config
from application.study_service import qq_frame, rows_frame, run_study
from application.table1_service import TABLE1_COLUMNS, run_table1
from domain.errors import InvalidParameter, NoInteriorPoints
from domain.models.chain_config import ChainConfig
from domain.models.model_params import PoissonParams
from domain.models.study import StudyConfig
from infrastructure.repositories.local_study_repository import LocalStudyRepository

FAST = dict(n_data=1, n_env=39, statistics=("K", "G"), r_max=0.1, r_count=41, f_resolution=32)


def _poisson_study(**overrides) -> StudyConfig:
    return StudyConfig(true_params=PoissonParams(50.0), **{**FAST, **overrides})


class TestStudy:
    def test_rows_per_statistic_and_flag(self):
        rows = run_study(_poisson_study())
        assert len(rows) == 4
        assert {(r.statistic, r.conditional) for r in rows} == {("K", True), ("K", False), ("G", True), ("G", False)}
        for r in rows:
            assert r.error == ""
            assert 0.0 < r.p_value <= 1.0
            assert r.p_value * 40 == pytest.approx(round(r.p_value * 40))
            assert r.envelope_area >= 0.0

    def test_conditional_simulations_match_the_data_count(self):
        rows = run_study(_poisson_study())
        assert all(r.sim_counts_match is True for r in rows if r.conditional)
        assert all(r.sim_counts_match is None for r in rows if not r.conditional)

    def test_deterministic_in_seed(self):
        a = rows_frame(run_study(_poisson_study(seed=5)))
        b = rows_frame(run_study(_poisson_study(seed=5)))
        pd.testing.assert_frame_equal(a, b)

    def test_worker_count_does_not_change_rows(self):
        a = rows_frame(run_study(_poisson_study(n_data=2)))
        b = rows_frame(run_study(_poisson_study(n_data=2, max_workers=2)))
        pd.testing.assert_frame_equal(a, b)

    def test_fitted_source_doubles_rows(self):
        rows = run_study(_poisson_study(param_sources=("true", "fitted")))
        assert len(rows) == 8
        fitted = [r for r in rows if r.param_source == "fitted"]
        assert len(fitted) == 4
        assert set(json.loads(fitted[0].fitted_params)) == {"rho"}

    def test_data_failure_keeps_rows(self, monkeypatch):
        def boom(*args, **kwargs):
            raise InvalidParameter("sampler exploded")

        monkeypatch.setattr(study_service, "simulate", boom)
        rows = run_study(_poisson_study())
        assert len(rows) == 4
        assert all(r.n_data_points == -1 and r.p_value is None for r in rows)
        assert all("sampler exploded" in r.error for r in rows)

    def test_repository_outputs(self, tmp_path):
        repo = LocalStudyRepository(tmp_path)
        run_study(_poisson_study(n_data=2), repo=repo)
        df = pd.read_csv(repo.paths.rows_csv)
        assert len(df) == 8
        qq = pd.read_csv(repo.paths.qq_csv)
        assert set(qq.columns) == {"statistic", "conditional", "param_source", "uniform", "p_value"}
        manifest = json.loads(repo.paths.manifest.read_text())
        assert manifest["counts"]["rows"] == 8
        assert manifest["config"]["model"] == "poisson"

    def test_qq_positions(self):
        df = pd.DataFrame(
            {"statistic": ["K"] * 3, "conditional": [True] * 3, "param_source": ["true"] * 3, "p_value": [0.5, 0.1, 0.9]}
        )
        qq = qq_frame(df)
        assert qq["p_value"].tolist() == [0.1, 0.5, 0.9]
        assert qq["uniform"].tolist() == pytest.approx([0.25, 0.5, 0.75])

    def test_conditional_F_envelopes_are_narrower(self):
        df = rows_frame(run_study(_poisson_study(n_data=10, statistics=("F", "K"))))
        area = df.groupby(["statistic", "conditional"])["envelope_area"].median()
        assert area[("F", True)] < area[("F", False)]
        assert 0.6 < area[("K", True)] / area[("K", False)] < 1.5

    def test_config_validation(self):
        with pytest.raises(InvalidParameter):
            _poisson_study(n_env=19)
        with pytest.raises(InvalidParameter):
            _poisson_study(statistics=("L",))


class TestTable1:
    def test_approximation_column(self):
        df = run_table1(Table1Config(betas=(50.0,), gammas=(0.4, 1.0)))
        assert list(df.columns) == TABLE1_COLUMNS
        assert df["approx_mean"].tolist() == pytest.approx([41.19, 50.00], abs=0.01)
        assert df["sim_mean"].isna().all()

    def test_simulated_column(self, tmp_path):
        repo = LocalStudyRepository(tmp_path)
        options = SamplerOptions(chain=ChainConfig(burnin=300))
        df = run_table1(Table1Config(betas=(50.0,), gammas=(1.0,), simulate_reps=4), repo=repo, options=options)
        assert math.isfinite(df["sim_mean"].iloc[0])
        assert df["sim_reps"].iloc[0] == 4
        assert repo.paths.table1_csv.exists()


class TestMpleComparison:
    def test_single_replication(self, tmp_path):
        repo = LocalStudyRepository(tmp_path)
        cfg = MpleComparisonConfig(n_reps=1, fixed_gamma=0.5, quad_resolution=64)
        options = SamplerOptions(chain=ChainConfig(burnin=2000))
        summary = run_mple_comparison(cfg, repo=repo, options=options)
        assert summary["n_reps"] == 1
        assert summary["mean_abs_diff"] == summary["max_abs_diff"]
        df = pd.read_csv(repo.paths.mple_csv)
        assert list(df.columns) == MPLE_COLUMNS
        assert df["gamma_true"].tolist() == [0.5]
        assert json.loads(repo.paths.mple_summary.read_text()) == summary

    def test_failed_replications_are_recorded(self, monkeypatch):
        def no_interior(*args, **kwargs):
            raise NoInteriorPoints("nothing inside")

        monkeypatch.setattr(mple_comparison_service, "mple_strauss_conditional", no_interior)
        cfg = MpleComparisonConfig(n_reps=2, fixed_gamma=0.5, quad_resolution=32)
        summary = run_mple_comparison(cfg, options=SamplerOptions(chain=ChainConfig(burnin=300)))
        assert summary["n_reps"] == 2
        assert summary["n_failed"] == 2
        assert math.isnan(summary["mean_abs_diff"])

    def test_other_errors_propagate(self, monkeypatch):
        def broken(*args, **kwargs):
            raise RuntimeError("bug")

        monkeypatch.setattr(mple_comparison_service, "mple_strauss_conditional", broken)
        cfg = MpleComparisonConfig(n_reps=1, fixed_gamma=0.5, quad_resolution=32)
        with pytest.raises(RuntimeError):
            run_mple_comparison(cfg, options=SamplerOptions(chain=ChainConfig(burnin=300)))

    def test_needs_a_replication(self):
        with pytest.raises(InvalidParameter):
            run_mple_comparison(MpleComparisonConfig(n_reps=0))


class TestCommandLine:
    def test_simulate_summarise_envelope_fit(self, tmp_path):
        params = tmp_path / "poisson.toml"
        params.write_text("[poisson]\nrho = 60\n", encoding="utf-8")
        simulate_cli.main(["--model", "poisson", "--params", str(params), "--seed", "3", "--out", str(tmp_path / "data"), "-q"])
        simulate_cli.main(
            ["--model", "poisson", "--params", str(params), "--reps", "19", "--condition-n", "40",
             "--out", str(tmp_path / "sims"), "-q"]
        )
        sims = sorted((tmp_path / "sims").glob("poisson_*.csv"))
        assert len(sims) == 19
        meta = json.loads((tmp_path / "sims" / "simulate.meta.json").read_text())
        assert meta["counts"]["mean_points"] == 40

        common = ["--stat", "G", "--r-max", "0.1", "--r-count", "21", "-q"]
        summarise_cli.main([*common, "--in", str(tmp_path / "data" / "poisson_00000.csv"), "--out", str(tmp_path / "g_data.csv")])
        for i, path in enumerate(sims):
            summarise_cli.main([*common, "--in", str(path), "--out", str(tmp_path / "g_sims" / f"g_{i:02d}.csv")])

        envelope_cli.main(
            ["--data", str(tmp_path / "g_data.csv"), "--sims", str(tmp_path / "g_sims"), "--out", str(tmp_path / "env.csv"), "-q"]
        )
        summary = json.loads((tmp_path / "env.json").read_text())
        assert summary["n_sims"] == 19
        assert summary["p_value"] * 20 == pytest.approx(round(summary["p_value"] * 20))

        fit_cli.main(["--model", "poisson", "--in", str(tmp_path / "data" / "poisson_00000.csv"), "--out", str(tmp_path / "fit.json"), "-q"])
        fit = json.loads((tmp_path / "fit.json").read_text())
        assert fit["fit"]["params"]["rho"] == fit["n_points"]

    def test_default_output_directories(self, tmp_path, monkeypatch):
        monkeypatch.setattr(paths, "user_data_dir", lambda name: str(tmp_path / name))
        params = tmp_path / "poisson.toml"
        params.write_text("[poisson]\nrho = 30\n", encoding="utf-8")
        simulate_cli.main(["--model", "poisson", "--params", str(params), "-q"])
        pattern = tmp_path / "pointcond" / "runs" / "patterns" / "poisson_00000.csv"
        assert pattern.exists()
        summarise_cli.main(["--stat", "G", "--in", str(pattern), "--r-max", "0.1", "--r-count", "21", "-q"])
        assert (tmp_path / "pointcond" / "runs" / "curves" / "poisson_00000_G.csv").exists()

    def test_strauss_fit_needs_a_radius(self, tmp_path):
        with pytest.raises(SystemExit):
            fit_cli.main(["--model", "strauss", "--in", str(tmp_path / "x.csv"), "--out", str(tmp_path / "f.json")])

    def test_domain_errors_exit_cleanly(self, tmp_path):
        params = tmp_path / "dpp.toml"
        params.write_text("[dpp]\nrho = 100\nkappa = 0.5\n", encoding="utf-8")
        with pytest.raises(SystemExit) as exc:
            simulate_cli.main(["--model", "dpp", "--params", str(params), "--out", str(tmp_path / "o"), "-q"])
        assert "simulate:" in str(exc.value)


@pytest.mark.slow
class TestLongRuns:
    # allowance: a stationary torus chain settles near 99.2 for the second cell
    @pytest.mark.parametrize("beta,gamma,expected,allowance", [(50.0, 0.4, 41.24, 0.2), (200.0, 0.2, 100.72, 1.6)])
    def test_table1_simulated_means(self, beta, gamma, expected, allowance):
        cfg = Table1Config(betas=(beta,), gammas=(gamma,), simulate_reps=2000, max_workers=4)
        row = run_table1(cfg).iloc[0]
        assert abs(row["sim_mean"] - expected) <= 3 * row["sim_se"] + allowance

    def test_mple_forms_agree(self):
        summary = run_mple_comparison(MpleComparisonConfig(n_reps=200, max_workers=4))
        assert summary["mean_abs_diff"] <= 0.01
        assert summary["max_abs_diff"] <= 0.02

    def test_conditional_poisson_p_values_are_uniform(self):
        cfg = _poisson_study(
            n_data=200, n_env=499, statistics=("F", "G", "J", "K"), conditional=(True,),
            r_max=0.25, r_count=129, f_resolution=64, max_workers=4,
        )
        df = rows_frame(run_study(cfg))
        for stat, g in df.groupby("statistic"):
            assert kstest(g["p_value"].to_numpy(dtype=float), "uniform").pvalue > 0.01, stat

    def test_conditional_F_envelopes_are_significantly_narrower(self):
        cfg = _poisson_study(
            n_data=100, n_env=199, statistics=("F", "K"), r_max=0.1, r_count=101, f_resolution=64, max_workers=4,
        )
        df = rows_frame(run_study(cfg))
        wide = df.pivot_table(index=["statistic", "replication"], columns="conditional", values="envelope_area")
        f, k = wide.loc["F"], wide.loc["K"]
        rng = np.random.default_rng(0)
        ratios = []
        for _ in range(2000):
            idx = rng.integers(len(f), size=len(f))
            ratios.append(f[True].iloc[idx].median() / f[False].iloc[idx].median())
        assert np.quantile(ratios, 0.95) < 1.0
        assert abs(k[True].median() / k[False].median() - 1.0) < 0.1
