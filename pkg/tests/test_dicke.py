import math

import numpy as np
import pytest

from unruh_preth import dicke
from unruh_preth import liouvillian as lv
from unruh_preth.dicke import (
    DickeBlock,
    block_adr,
    block_rate_matrix,
    block_steady_state,
    burst_metrics,
    cascade_trajectory,
    entropy_vs_N,
    evolve_block,
    evolve_block_populations,
    fit_power_law,
    independent_decay_time,
    intensity_weights,
    scaling_sweep,
)
from unruh_preth.rates import rates_from_gammas


class TestRateMatrix:
    def test_spin_half_limit(self, std_rates):
        w = block_rate_matrix(0.5, std_rates)
        # levels ordered m = -1/2, +1/2: up rate 0.8, down rate 0.2
        expected = np.array([[-0.8, 0.2], [0.8, -0.2]])
        assert np.max(np.abs(w - expected)) < 1e-14

    def test_downward_rate_from_top_of_j1(self, std_rates):
        w = block_rate_matrix(1.0, std_rates)
        # from m = +1: (J + m)(J - m + 1) gamma_minus = 2 gamma_minus
        assert w[1, 2] == pytest.approx(2.0 * 0.2, abs=1e-14)

    @pytest.mark.parametrize("j", [0.5, 1.0, 2.5, 5.0])
    def test_columns_sum_to_zero(self, j, std_rates):
        w = block_rate_matrix(j, std_rates)
        assert np.max(np.abs(w.sum(axis=0))) < 1e-12

    def test_bad_j_rejected(self, std_rates):
        with pytest.raises(ValueError):
            block_rate_matrix(0.7, std_rates)


class TestSteadyState:
    def test_single_atom_partition_function(self, std_rates):
        # sinh(2 x/2) / sinh(x/2) = 2 cosh(x/2)
        res = block_steady_state(0.5, std_rates)
        x = math.atanh(0.6)
        assert res.z_j == pytest.approx(2.0 * math.cosh(x / 2.0), abs=1e-12)

    def test_detailed_balance_large_ladder(self, std_rates):
        res = block_steady_state(50.0, std_rates)
        _, up, down = dicke._ladder_rates(50.0, 0.8, 0.2)
        resid = np.max(np.abs(res.populations[:-1] * up[:-1]
                              - res.populations[1:] * down[1:]))
        assert resid < 1e-12

    def test_long_time_evolution_reaches_steady_state(self, std_rates):
        block = DickeBlock.fully_up(10, std_rates)
        final = evolve_block_populations(block, [200.0])[-1]
        assert np.max(np.abs(final - block_steady_state(5.0, std_rates).populations)) < 1e-8

    def test_equal_rates_flagged_uniform(self):
        # equal rates are rejected by the RateSet constructor, so the
        # infinite-temperature ladder is reachable only with bare rates
        from types import SimpleNamespace

        res = block_steady_state(1.0, SimpleNamespace(gamma_plus=0.5, gamma_minus=0.5))
        assert res.degenerate
        assert res.z_j == 3.0
        assert np.max(np.abs(res.populations - 1.0 / 3.0)) < 1e-15


class TestEvolution:
    def test_initial_intensity_is_atom_number(self, std_rates):
        block = DickeBlock.fully_up(10, std_rates)
        assert evolve_block(block, [0.0])[0] == pytest.approx(10.0, abs=1e-12)

    def test_population_conservation(self, std_rates):
        for n in (12, 60):
            block = DickeBlock.fully_down(n, std_rates)
            traj = evolve_block_populations(block, np.geomspace(0.01, 30.0, 40))
            assert np.max(np.abs(traj.sum(axis=1) - 1.0)) < 1e-10

    def test_spectral_and_stepping_paths_agree(self, std_rates):
        # N = 8 sits below the spectral-span cutoff; force stepping by
        # comparing against single-shot matrix exponentials
        from scipy.linalg import expm

        block = DickeBlock.fully_down(8, std_rates)
        times = np.array([0.3, 1.0, 3.0])
        spectral = evolve_block_populations(block, times)
        w = block_rate_matrix(4.0, std_rates)
        for t, row in zip(times, spectral):
            direct = expm(w * t) @ block.populations
            assert np.max(np.abs(row - direct)) < 1e-11

    def test_burst_from_inverted_ladder(self, std_rates):
        metrics = burst_metrics(DickeBlock.fully_down(10, std_rates))
        assert metrics.burst
        assert metrics.i_max > 10.0
        assert metrics.t_peak > 0.0

    def test_no_burst_from_steady_start(self, std_rates):
        pops = block_steady_state(5.0, std_rates).populations
        block = DickeBlock(j=5.0, populations=pops, gamma_plus=0.8, gamma_minus=0.2)
        metrics = burst_metrics(block)
        assert not metrics.burst
        assert metrics.i_max == pytest.approx(float(pops @ intensity_weights(5.0)), rel=1e-9)

    def test_zero_temperature_dicke_benchmark(self):
        # classical superradiance: peak ~ N^2/4, timing ~ ln(N)/(N gamma)
        for n in (20, 40):
            pops = np.zeros(n + 1)
            pops[-1] = 1.0
            block = DickeBlock(j=n / 2.0, populations=pops, gamma_plus=0.0, gamma_minus=1.0)
            m = burst_metrics(block)
            assert m.burst
            assert n**2 / 6.0 < m.i_max < n**2 / 3.0
            classical = math.log(n) / n
            assert classical / 1.5 < m.t_peak < classical * 1.5


class TestCrossEngine:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_block_matches_dense_at_f1(self, n, std_rates):
        times = np.geomspace(0.01, 30.0, 50)
        sop = lv.build_lindbladian(std_rates, n)
        op = lv.intensity_operator(n)
        starts = {"top": n / 2.0, "bottom": -n / 2.0}
        for label, m0 in starts.items():
            pops = np.zeros(n + 1)
            pops[n if label == "top" else 0] = 1.0
            block = DickeBlock(j=n / 2.0, populations=pops,
                               gamma_plus=0.8, gamma_minus=0.2)
            i_block = evolve_block(block, times)
            psi = lv.dicke_state(n, m0)
            i_dense = lv.expectation_trajectory(sop, np.outer(psi, psi.conj()), times, op)
            assert np.max(np.abs(i_block - i_dense)) < 1e-8, label

    def test_mixed_diagonal_initial_state(self, std_rates):
        n = 3
        j = n / 2.0
        pops = np.array([0.4, 0.1, 0.2, 0.3])
        block = DickeBlock(j=j, populations=pops, gamma_plus=0.8, gamma_minus=0.2)
        rho0 = np.zeros((2**n, 2**n), dtype=complex)
        for k, m in enumerate(np.arange(-j, j + 0.5)):
            psi = lv.dicke_state(n, m)
            rho0 += pops[k] * np.outer(psi, psi.conj())
        times = np.geomspace(0.05, 20.0, 30)
        i_block = evolve_block(block, times)
        i_dense = lv.expectation_trajectory(
            lv.build_lindbladian(std_rates, n), rho0, times, lv.intensity_operator(n))
        assert np.max(np.abs(i_block - i_dense)) < 1e-8


class TestEntropy:
    def test_independent_atoms_are_extensive(self, std_rates):
        pairs = entropy_vs_N(std_rates, [1, 10], "f0")
        s1 = pairs[0][1]
        assert pairs[1][1] == pytest.approx(10.0 * s1, abs=1e-12)
        assert s1 == pytest.approx(-(0.8 * math.log(0.8) + 0.2 * math.log(0.2)), abs=1e-12)

    def test_extensivity_against_binomial_spectrum(self, std_rates):
        # oracle: the N-atom product state has binomial eigenvalues
        for n in (2, 5, 10):
            (_, s_val), = entropy_vs_N(std_rates, [n], "f0")
            p = 0.8
            s_direct = 0.0
            for k in range(n + 1):
                q = p ** (n - k) * (1 - p) ** k
                s_direct -= math.comb(n, k) * q * math.log(q)
            assert s_val == pytest.approx(s_direct, abs=1e-12)

    def test_collective_entropy_saturates(self, std_rates):
        pairs = dict(entropy_vs_N(std_rates, [50, 100], "f1_principal"))
        assert abs(pairs[100] - pairs[50]) < 0.01 * pairs[50]

    def test_single_atom_limits_agree(self, std_rates):
        (_, s_f0), = entropy_vs_N(std_rates, [1], "f0")
        (_, s_f1), = entropy_vs_N(std_rates, [1], "f1_principal")
        assert s_f0 == pytest.approx(s_f1, abs=1e-12)

    def test_unknown_regime(self, std_rates):
        with pytest.raises(ValueError):
            entropy_vs_N(std_rates, [2], "f2")


class TestScaling:
    def test_fit_recovers_exact_power_law(self):
        x = np.array([10.0, 20.0, 50.0, 100.0])
        fit = fit_power_law(x, 0.3 * x**1.7)
        assert fit.slope == pytest.approx(1.7, abs=1e-12)
        assert fit.intercept == pytest.approx(math.log10(0.3), abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.n_points == 4

    def test_burst_scaling_slopes(self, std_rates):
        rows = scaling_sweep(range(10, 101, 10), std_rates)
        n_vals = [r[0] for r in rows]
        fit_imax = fit_power_law(n_vals, [r[1] for r in rows])
        fit_tr = fit_power_law(n_vals, [r[3] for r in rows])
        assert 1.85 <= fit_imax.slope <= 2.05
        assert -1.15 <= fit_tr.slope <= -0.95

    def test_independent_baseline_constant_decay_time(self, std_rates):
        times = [independent_decay_time(n, std_rates) for n in range(10, 101, 10)]
        assert max(times) / min(times) - 1.0 < 0.01
        assert times[0] == pytest.approx(1.0, rel=1e-6)


class TestCascade:
    def test_three_regimes_at_near_collective_coupling(self, std_rates):
        res = cascade_trajectory(5, std_rates.with_f_ab(0.999))
        assert res.plateau_detected
        assert res.intensity.max() > res.intensity[0]
        rel = abs(res.plateau_value - res.block_gge_prediction) / res.block_gge_prediction
        assert rel < 0.02
        assert res.plateau_end - res.plateau_start >= 10.0 * res.burst_efold_time
        assert abs(res.intensity[-1] - res.gibbs_intensity) < 0.05 * res.gibbs_intensity

    def test_decoupled_register_has_no_plateau(self, std_rates):
        res = cascade_trajectory(3, std_rates.with_f_ab(0.0))
        assert not res.plateau_detected
        # mono-exponential relaxation toward the independent-atom intensity
        assert abs(res.intensity[-1] - res.gibbs_intensity) < 1e-6 * res.gibbs_intensity

    def test_summary_json_fields(self, std_rates):
        import json

        res = cascade_trajectory(2, std_rates.with_f_ab(0.99))
        obj = json.loads(res.summary_json())
        assert set(obj) == {
            "plateau_detected", "plateau_value", "plateau_start", "plateau_end",
            "burst_efold_time", "block_gge_prediction", "gibbs_intensity",
        }
