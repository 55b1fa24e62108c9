import math

import numpy as np
import pytest

from unruh_preth.rates import (
    PhysicalConfig,
    RateSet,
    compute_f_ab,
    compute_rates,
    rates_from_gammas,
    unruh_temperature,
    fractional_prethermal_lifetime,
    rates_from_json,
)

C = 2.99792458e8


class TestPhysicalConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            PhysicalConfig(omega0=-1.0, alpha=1.0)
        with pytest.raises(ValueError):
            PhysicalConfig(omega0=1.0, alpha=0.0)
        with pytest.raises(ValueError):
            PhysicalConfig(omega0=1.0, alpha=1.0, separation_L=-0.1)
        with pytest.raises(ValueError):
            PhysicalConfig(omega0=1.0, alpha=1.0, n_atoms=0)
        with pytest.raises(ValueError):
            PhysicalConfig(omega0=1.0, alpha=1.0, unit_mode="cgs")


class TestFab:
    def test_zero_separation_is_exactly_one(self):
        cfg = PhysicalConfig(omega0=3.7, alpha=0.4, separation_L=0.0)
        assert compute_f_ab(cfg) == 1.0

    def test_large_separation_is_suppressed(self):
        # sin(2 asinh(5)) / (10 sqrt(26)) = -0.0195357...
        cfg = PhysicalConfig(omega0=1.0, alpha=1.0, separation_L=10.0)
        f = compute_f_ab(cfg)
        assert abs(f) < 0.12
        direct = math.sin(2.0 * math.asinh(5.0)) / (10.0 * math.sqrt(26.0))
        assert f == pytest.approx(direct, abs=1e-15)

    def test_si_tight_pair_is_nearly_collective(self):
        cfg = PhysicalConfig(
            omega0=1e15, alpha=1e25, separation_L=1e-9, unit_mode="SI"
        )
        assert compute_f_ab(cfg) > 0.99

    def test_si_and_natural_modes_agree(self):
        # map SI inputs onto c = 1 units: omega -> omega/c, alpha -> alpha/c^2
        cases = [(1e15, 1e25, 1e-9), (1e15, 1e24, 1e-6), (2e15, 3e25, 5e-8)]
        for omega0, alpha, length in cases:
            f_si = compute_f_ab(PhysicalConfig(
                omega0=omega0, alpha=alpha, separation_L=length, unit_mode="SI"))
            f_nat = compute_f_ab(PhysicalConfig(
                omega0=omega0 / C, alpha=alpha / C**2, separation_L=length))
            assert abs(f_si - f_nat) < 1e-12

    def test_monotone_decrease_on_first_lobe(self):
        # before the first zero crossing f decreases with separation
        lengths = np.linspace(1e-4, 1.2, 200)
        vals = [
            compute_f_ab(PhysicalConfig(omega0=1.0, alpha=1.0, separation_L=el))
            for el in lengths
        ]
        assert all(v > 0 for v in vals)
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_magnitude_never_exceeds_one(self, rng):
        for _ in range(200):
            cfg = PhysicalConfig(
                omega0=float(rng.uniform(0.1, 10)),
                alpha=float(rng.uniform(0.1, 10)),
                separation_L=float(rng.uniform(0.0, 50)),
            )
            assert abs(compute_f_ab(cfg)) <= 1.0 + 1e-15


class TestComputeRates:
    def test_infinite_acceleration_limit(self):
        # pi omega0 / alpha -> 0: both rates collapse to b_local / 2
        cfg = PhysicalConfig(omega0=1.0, alpha=1e18, separation_L=0.0)
        rs = compute_rates(cfg)
        assert rs.gamma_plus == pytest.approx(rs.b_local / 2.0, rel=1e-12)
        assert rs.gamma_minus == pytest.approx(rs.b_local / 2.0, rel=1e-12)

    def test_reference_rate_pair(self):
        # tanh(pi omega0 / alpha) = 0.6 with b_local = 1 gives (0.8, 0.2)
        alpha = math.pi / math.atanh(0.6)
        lam = math.sqrt(8.0 * math.pi)
        cfg = PhysicalConfig(omega0=1.0, alpha=alpha, separation_L=0.0, lambda_coupling=lam)
        rs = compute_rates(cfg)
        assert rs.b_local == pytest.approx(1.0, rel=1e-12)
        assert rs.gamma_plus == pytest.approx(0.8, rel=1e-12)
        assert rs.gamma_minus == pytest.approx(0.2, rel=1e-12)
        assert rs.m0 == pytest.approx(0.6, rel=1e-12)
        assert rs.a_local == pytest.approx(5.0 / 3.0, rel=1e-12)

    def test_overflow_clamp(self):
        cfg = PhysicalConfig(omega0=1e6, alpha=1e-3, separation_L=0.0)
        rs = compute_rates(cfg)
        assert rs.gamma_minus == 0.0
        assert rs.a_local == rs.b_local

    def test_negative_lobe_rejected(self):
        # first zero crossing sits at L = 2 sinh(pi/2) ~ 4.6
        cfg = PhysicalConfig(omega0=1.0, alpha=1.0, separation_L=6.0)
        assert compute_f_ab(cfg) < 0.0
        with pytest.raises(ValueError, match="f_ab"):
            compute_rates(cfg)

    def test_invariants_on_grid(self, rng):
        for _ in range(100):
            cfg = PhysicalConfig(
                omega0=float(rng.uniform(0.2, 5.0)),
                alpha=float(rng.uniform(0.2, 5.0)),
                separation_L=float(rng.uniform(0.0, 0.3)),
            )
            rs = compute_rates(cfg)
            assert rs.gamma_plus + rs.gamma_minus == pytest.approx(rs.b_local, rel=1e-12)
            assert rs.gamma_plus >= 0.0 and rs.gamma_minus >= 0.0
            assert rs.a_local**2 - rs.b_local**2 >= -1e-12


class TestRatesFromGammas:
    def test_reference_values(self):
        rs = rates_from_gammas(0.8, 0.2, 1.0)
        assert rs.m0 == pytest.approx(0.6, rel=1e-12)
        assert rs.a_local == pytest.approx(5.0 / 3.0, rel=1e-12)
        assert rs.a_cross == pytest.approx(5.0 / 3.0, rel=1e-12)

    def test_decoupled(self):
        rs = rates_from_gammas(0.8, 0.2, 0.0)
        assert rs.a_cross == 0.0
        assert rs.b_cross == 0.0

    def test_cross_scaling(self):
        rs = rates_from_gammas(0.8, 0.2, 0.99)
        assert rs.b_cross == pytest.approx(0.99, rel=1e-12)

    def test_equal_rates_rejected(self):
        with pytest.raises(ValueError):
            rates_from_gammas(0.5, 0.5, 1.0)

    def test_round_trip(self, rng):
        for _ in range(100):
            gm = float(rng.uniform(0.01, 1.0))
            gp = gm + float(rng.uniform(0.01, 2.0))
            f = float(rng.uniform(0.0, 1.0))
            rs = rates_from_gammas(gp, gm, f)
            back = rates_from_gammas(rs.gamma_plus, rs.gamma_minus, rs.f_ab)
            for field in ("gamma_plus", "gamma_minus", "a_local", "b_local",
                          "a_cross", "b_cross", "f_ab", "m0"):
                assert getattr(back, field) == pytest.approx(
                    getattr(rs, field), rel=1e-12, abs=1e-15)


class TestRateSetValidation:
    def test_inconsistent_normalization_rejected(self):
        with pytest.raises(ValueError, match="rate normalization"):
            RateSet(gamma_plus=0.8, gamma_minus=0.2, a_local=2.0, b_local=1.5,
                    a_cross=2.0, b_cross=1.5, f_ab=1.0, m0=0.6)

    def test_f_ab_range_enforced(self):
        with pytest.raises(ValueError, match="f_ab"):
            RateSet(gamma_plus=0.8, gamma_minus=0.2, a_local=5 / 3, b_local=1.0,
                    a_cross=-5 / 3, b_cross=-1.0, f_ab=-1.0, m0=0.6)


class TestUnruhTemperature:
    def test_one_kelvin_acceleration(self):
        assert unruh_temperature(2.4e20) == pytest.approx(1.0, rel=0.05)

    def test_storage_ring_acceleration(self):
        # linear scaling from the 1 K point: 0.97320 * 2.9e23 / 2.4e20
        assert unruh_temperature(2.9e23) == pytest.approx(1.2e3, rel=0.05)

    def test_proportionality(self):
        assert unruh_temperature(1e10) / unruh_temperature(1e20) == pytest.approx(1e-10, rel=1e-12)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            unruh_temperature(0.0)


class TestFractionalLifetime:
    @pytest.mark.parametrize("f", [0.0, 0.5, 0.99])
    def test_identity(self, f):
        assert fractional_prethermal_lifetime(f) == pytest.approx(f, abs=1e-12)

    def test_unit_f_rejected(self):
        with pytest.raises(ValueError):
            fractional_prethermal_lifetime(1.0)


class TestRatesFromJson:
    def test_direct_mode(self):
        rs, n = rates_from_json(
            {"gamma_plus": 0.8, "gamma_minus": 0.2, "f_ab": 0.5, "n_atoms": 3})
        assert n == 3
        assert rs.b_cross == pytest.approx(0.5)

    def test_physical_mode(self):
        rs, n = rates_from_json({
            "omega0": 1e15, "alpha": 1e25, "L": 1e-9,
            "lambda": 1.0, "n_atoms": 2, "unit_mode": "SI"})
        assert n == 2
        assert rs.f_ab > 0.99

    def test_mixed_keys_rejected(self):
        with pytest.raises(ValueError, match="keys"):
            rates_from_json({"gamma_plus": 0.8, "gamma_minus": 0.2, "f_ab": 1.0,
                             "n_atoms": 2, "omega0": 1.0})
