# tests/test_samplers.py
import itertools
import math

import numpy as np
import pytest
from scipy.stats import chisquare, kstest

from domain.errors import InfeasibleCount, InvalidParameter
from domain.models.chain_config import MIN_BURNIN, ChainConfig
from domain.models.dpp_spectrum import DppSpectrum
from domain.models.model_params import DppGaussParams, LgcpParams, PoissonParams, StraussParams
from domain.models.rgrid import RGrid
from domain.models.seed_spec import SeedSpec
from domain.models.window import Window
from domain.services.dpp_model import dpp_spectrum
from domain.services.dpp_sampler import (
    _count_indices,
    sample_dpp,
    sample_dpp_conditional,
    sample_dpp_count_indices,
)
from domain.services.geometry import close_pair_count
from domain.services.lgcp_sampler import sample_gauss_field, sample_lgcp, sample_lgcp_conditional
from domain.services.poisson_sampler import sample_binomial, sample_poisson
from domain.services.strauss_sampler import (
    StraussChain,
    _interaction_ratio,
    sample_strauss,
    sample_strauss_conditional,
    sample_strauss_rejected,
)
from domain.services.summary_statistics import estimate_K
from pattern_helpers import UNIT

FAST_CHAIN = ChainConfig(burnin=1500, conditional_burnin=30)


class TestPoissonSamplers:
    def test_binomial_cardinality(self):
        assert sample_binomial(0, UNIT, SeedSpec(1)).n == 0
        assert sample_binomial(5, UNIT, SeedSpec(1)).n == 5

    def test_binomial_marginals_uniform(self):
        x = sample_binomial(10_000, UNIT, SeedSpec(3))
        assert kstest(x.points[:, 0], "uniform").pvalue > 0.001
        assert kstest(x.points[:, 1], "uniform").pvalue > 0.001

    def test_poisson_count_moments(self):
        counts = np.array([sample_poisson(PoissonParams(100), UNIT, SeedSpec(5).replication(k)).n for k in range(2000)])
        se = math.sqrt(100 / counts.size)
        assert abs(counts.mean() - 100) < 4 * se
        assert counts.var(ddof=1) == pytest.approx(100, rel=0.15)

    def test_tiny_intensity_is_empty(self):
        assert sample_poisson(PoissonParams(1e-9), UNIT, SeedSpec(2)).n == 0

    def test_determinism(self):
        a = sample_poisson(PoissonParams(50), UNIT, SeedSpec(9).replication(4))
        b = sample_poisson(PoissonParams(50), UNIT, SeedSpec(9).replication(4))
        assert a.same_points(b)


class TestLgcpSamplers:
    def test_degenerate_field_is_flat(self):
        field = sample_gauss_field(LgcpParams(100, 1e-12, 0.1), UNIT, SeedSpec(1), nx=16)
        assert field.values == pytest.approx(np.full((16, 16), 100.0), rel=1e-5)
        assert field.integral() == pytest.approx(100.0, rel=1e-5)

    def test_field_variance(self):
        p = LgcpParams(100, 2.0, 0.1)
        ys = np.array([sample_gauss_field(p, UNIT, SeedSpec(2).replication(k), nx=8).log_values[3, 3] for k in range(1000)])
        assert ys.var(ddof=1) == pytest.approx(2.0, rel=0.15)
        assert ys.mean() == pytest.approx(p.mu, abs=0.15)

    def test_mean_count(self):
        p = LgcpParams(100, 0.5, 0.05)
        counts = np.array([sample_lgcp(p, UNIT, SeedSpec(3).replication(k), nx=16).n for k in range(400)])
        assert counts.mean() == pytest.approx(100, rel=0.08)

    def test_overdispersion(self):
        p = LgcpParams(100, 1.0, 0.1)
        counts = np.array([sample_lgcp(p, UNIT, SeedSpec(4).replication(k), nx=16).n for k in range(300)])
        assert counts.var(ddof=1) > counts.mean()

    @pytest.mark.parametrize("n", [0, 7, 30])
    def test_conditional_cardinality(self, n):
        p = LgcpParams(max(n, 1), 0.5, 0.1)
        x = sample_lgcp_conditional(n, p, UNIT, SeedSpec(5), nx=16)
        assert x.n == n
        assert x.meta["attempts"] >= 1
        assert np.all(UNIT.contains(x.points))

    def test_conditional_determinism(self):
        p = LgcpParams(30, 0.5, 0.1)
        a = sample_lgcp_conditional(30, p, UNIT, SeedSpec(6), nx=16)
        b = sample_lgcp_conditional(30, p, UNIT, SeedSpec(6), nx=16)
        assert a.same_points(b)

    def test_rejects_tiny_grid(self):
        with pytest.raises(InvalidParameter):
            sample_lgcp(LgcpParams(10, 1, 0.1), UNIT, SeedSpec(1), nx=1)


class TestStraussSamplers:
    def test_interaction_ratio(self):
        assert _interaction_ratio(0.0, 0) == 1.0
        assert _interaction_ratio(0.0, 2) == 0.0
        assert _interaction_ratio(0.0, -1) == math.inf
        assert _interaction_ratio(0.5, -2) == pytest.approx(4.0)

    def test_unconditional_is_deterministic(self):
        p = StraussParams(100, 0.5, 0.05)
        a = sample_strauss(p, UNIT, FAST_CHAIN, SeedSpec(1))
        b = sample_strauss(p, UNIT, FAST_CHAIN, SeedSpec(1))
        assert a.same_points(b)
        assert len(a.meta["trace"]) == FAST_CHAIN.burnin

    def test_hard_core_has_no_close_pairs(self):
        x = sample_strauss(StraussParams(100, 0.0, 0.05), UNIT, ChainConfig(burnin=3000), SeedSpec(2))
        assert close_pair_count(x, 0.05) == 0

    @pytest.mark.parametrize("n", [0, 1, 40])
    def test_conditional_cardinality(self, n):
        x = sample_strauss_conditional(n, StraussParams(100, 0.3, 0.05), UNIT, FAST_CHAIN, SeedSpec(3))
        assert x.n == n
        assert np.all(UNIT.contains(x.points))

    def test_conditional_hard_core_keeps_no_close_pairs_after_burnin(self):
        x = sample_strauss_conditional(30, StraussParams(100, 0.0, 0.05), UNIT, ChainConfig(conditional_burnin=200), SeedSpec(4))
        assert close_pair_count(x, 0.05) == 0

    def test_margin_must_cover_R(self):
        with pytest.raises(InvalidParameter):
            sample_strauss(StraussParams(100, 0.5, 0.05), UNIT, ChainConfig(margin=0.01), SeedSpec(1))

    def test_gamma_one_count_mean(self):
        counts = np.array(
            [sample_strauss(StraussParams(50, 1.0, 0.05), UNIT, FAST_CHAIN, SeedSpec(5).replication(k)).n for k in range(60)]
        )
        assert abs(counts.mean() - 50) < 4 * math.sqrt(50 / counts.size)

    def test_default_burnin_scales_with_expected_count(self):
        cfg = ChainConfig()
        assert cfg.burnin_for(10.0) == MIN_BURNIN
        assert cfg.burnin_for(300.0) == 60_000
        assert ChainConfig(burnin=50).burnin_for(300.0) == 50
        assert cfg.margin_for(0.05) == pytest.approx(0.2)

    def test_default_chain_runs_the_scaled_burnin(self):
        p = StraussParams(20, 0.5, 0.05)
        x = sample_strauss(p, UNIT, ChainConfig(), SeedSpec(8))
        chain = StraussChain(p, UNIT, ChainConfig(), np.random.default_rng(0))
        assert len(x.meta["trace"]) == ChainConfig().burnin_for(chain.expected_count())

    def test_default_chain_reaches_the_simulated_mean(self):
        p = StraussParams(50, 0.4, 0.05)
        counts = np.array([sample_strauss(p, UNIT, ChainConfig(), SeedSpec(9).replication(k)).n for k in range(20)])
        se = counts.std(ddof=1) / math.sqrt(counts.size)
        assert abs(counts.mean() - 41.24) < 4 * se + 0.5

    def test_rejected_sampler_hits_count(self):
        x = sample_strauss_rejected(10, StraussParams(10, 0.5, 0.05), UNIT, ChainConfig(burnin=300), SeedSpec(6))
        assert x.n == 10

    def test_move_step_detailed_balance_on_grid(self):
        stationary, empirical = _grid_chain(200_000)
        assert 0.5 * np.abs(empirical - stationary).sum() < 0.05


GRID = np.array([[x, y] for y in (0.2, 0.5, 0.8) for x in (0.2, 0.5, 0.8)])


def _grid_chain(steps: int):
    """Two points moving on a 3 x 3 grid with no boundary points; returns (target, empirical) over ordered pairs."""
    p = StraussParams(1.0, 0.3, 0.35)  # horizontal and vertical neighbours interact, diagonals do not
    chain = StraussChain(
        p,
        UNIT,
        ChainConfig(margin=0.35, boundary_proposals=0),
        np.random.default_rng(11),
        proposal=lambda rng, w: GRID[int(rng.integers(9))],
    )
    chain.inner = GRID[[0, 8]].copy()
    chain.outer = np.empty((0, 2))
    visits = np.zeros((9, 9))
    for _ in range(steps):
        chain.move_step()
        i, j = (np.rint((chain.inner - 0.2) / 0.3) @ np.array([1, 3])).astype(int)
        visits[i, j] += 1
    target = np.empty((9, 9))
    for a, b in itertools.product(range(9), repeat=2):
        close = np.linalg.norm(GRID[a] - GRID[b]) <= p.R
        target[a, b] = p.gamma if close else 1.0
    return (target / target.sum()).ravel(), (visits / visits.sum()).ravel()


@pytest.mark.slow
def test_move_step_detailed_balance_long_run():
    stationary, empirical = _grid_chain(1_000_000)
    assert 0.5 * np.abs(empirical - stationary).sum() < 0.02


class TestDppSamplers:
    def test_index_oracle_single_success(self):
        s = DppSpectrum.from_eigenvalues([0.9, 0.5, 0.1])
        rng = np.random.default_rng(21)
        draws = np.array([_count_indices(1, s, rng, 1000)[0][0] for _ in range(100_000)])
        freq = np.bincount(draws, minlength=3) / draws.size
        assert freq == pytest.approx([0.8901, 0.0989, 0.0110], abs=0.01)

    def test_index_oracle_pairs_chi_square(self):
        lam = np.array([0.7, 0.6, 0.3, 0.2])
        s = DppSpectrum.from_eigenvalues(lam)
        pairs = list(itertools.combinations(range(4), 2))
        probs = np.array(
            [np.prod([lam[i] if i in pair else 1 - lam[i] for i in range(4)]) for pair in pairs]
        )
        probs /= probs.sum()
        rng = np.random.default_rng(22)
        observed = np.zeros(len(pairs))
        for _ in range(100_000):
            idx = tuple(int(i) for i in _count_indices(2, s, rng, 1000)[0])
            observed[pairs.index(idx)] += 1
        assert chisquare(observed, probs * observed.sum()).pvalue > 0.01

    def test_certain_indices_are_deterministic(self):
        s = DppSpectrum.from_eigenvalues([1.0, 1.0, 0.0, 0.0])
        assert list(sample_dpp_count_indices(2, s, SeedSpec(1))) == [0, 1]

    def test_infeasible_counts(self):
        s = DppSpectrum.from_eigenvalues([1.0, 0.5, 0.0])
        with pytest.raises(InfeasibleCount):
            sample_dpp_count_indices(3, s, SeedSpec(1))
        with pytest.raises(InfeasibleCount):
            sample_dpp_count_indices(0, s, SeedSpec(1))

    def test_all_zero_spectrum_is_empty(self):
        s = DppSpectrum.from_eigenvalues([0.0, 0.0, 0.0])
        assert sample_dpp(s, UNIT, SeedSpec(1)).n == 0

    @pytest.mark.parametrize("rho,kappa,n", [(2.0, 0.2, 1), (2.0, 0.2, 3), (50.0, 0.05, 50)])
    def test_conditional_cardinality(self, rho, kappa, n):
        s = dpp_spectrum(DppGaussParams(rho, kappa), UNIT)
        x = sample_dpp_conditional(n, s, UNIT, SeedSpec(2).child(n))
        assert x.n == n
        assert np.all(UNIT.contains(x.points))

    def test_single_point_is_uniform(self):
        s = dpp_spectrum(DppGaussParams(2.0, 0.2), UNIT)
        xs = np.array([sample_dpp_conditional(1, s, UNIT, SeedSpec(3).replication(k)).points[0, 0] for k in range(2000)])
        assert kstest(xs, "uniform").pvalue > 0.001

    def test_mean_count_is_trace(self):
        s = dpp_spectrum(DppGaussParams(50, 0.05), UNIT)
        counts = np.array([sample_dpp(s, UNIT, SeedSpec(4).replication(k)).n for k in range(300)])
        var = float(np.sum(s.eigenvalues * (1 - s.eigenvalues)))
        assert abs(counts.mean() - s.expected_count) < 4 * math.sqrt(var / counts.size)

    def test_repulsion_in_the_mean(self):
        s = dpp_spectrum(DppGaussParams(100, 0.05), UNIT)
        rgrid = RGrid([0.0, 0.01, 0.02, 0.03])
        k = np.mean([estimate_K(sample_dpp(s, UNIT, SeedSpec(5).replication(i)), rgrid).values for i in range(30)], axis=0)
        assert np.all(k[1:] < np.pi * rgrid.values[1:] ** 2)

    def test_window_must_match_spectrum(self):
        s = dpp_spectrum(DppGaussParams(50, 0.05), UNIT)
        with pytest.raises(InvalidParameter):
            sample_dpp(s, Window(0, 2, 0, 1), SeedSpec(1))

    def test_determinism(self):
        s = dpp_spectrum(DppGaussParams(50, 0.05), UNIT)
        assert sample_dpp(s, UNIT, SeedSpec(6)).same_points(sample_dpp(s, UNIT, SeedSpec(6)))
