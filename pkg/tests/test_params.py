"""Configuration types, derived quantities, and the frame fixed point."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from spinflip import (DegenerateGyromagneticError, FrameConfig,
                      FrameUnreachableError, ParticleConfig, WaveConfig,
                      complete_k, derive_params, flip_amplitude, jacobi_eval,
                      rabi_frequency, solve_average_rest_frame)

# Frozen from the independent bisection + quadrature oracle.
GAMMA_LINEAR_ETA1 = 1.2614695417089397


class TestConfigValidation:
    def test_wave_rejects_bad_polarization(self):
        with pytest.raises(ValueError, match="epsilon_sq"):
            WaveConfig(eta=1.0, epsilon_sq=1.5)

    def test_wave_rejects_negative_eta(self):
        with pytest.raises(ValueError, match="eta"):
            WaveConfig(eta=-0.1, epsilon_sq=0.5)

    def test_wave_rejects_nonpositive_frequency(self):
        with pytest.raises(ValueError, match="omega_l"):
            WaveConfig(eta=1.0, epsilon_sq=0.5, omega_l=0.0)

    def test_particle_rejects_zero_g(self):
        with pytest.raises(ValueError, match="g = 0"):
            ParticleConfig(g=0.0)

    def test_particle_rejects_bad_charge(self):
        with pytest.raises(ValueError, match="charge_sign"):
            ParticleConfig(g=2.0, charge_sign=0.5)

    def test_explicit_frame_needs_gamma(self):
        with pytest.raises(ValueError, match="gamma_z"):
            FrameConfig(mode="explicit")

    def test_average_frame_forbids_gamma(self):
        with pytest.raises(ValueError, match="gamma_z"):
            FrameConfig(mode="average_rest_frame", gamma_z=1.0)

    def test_amplitude_equals_eta_in_natural_units(self):
        assert WaveConfig(eta=2.5, epsilon_sq=0.5).amplitude == 2.5


class TestFlipAmplitude:
    def test_on_resonance_peak(self):
        assert flip_amplitude(2.0, 2.0) == 1.0

    def test_zero_field(self):
        assert flip_amplitude(0.0, 2.0) == 0.0

    def test_substitution_value(self):
        # kappa^2 = 8, eta_star^2 = 4: 8 / (8 + 9)
        assert flip_amplitude(1.0, 2.0) == pytest.approx(8.0 / 17.0, rel=1e-15)

    def test_degenerate_g_rejected(self):
        with pytest.raises(DegenerateGyromagneticError):
            flip_amplitude(1.0, 1.0)

    @given(eta=st.floats(0.0, 50.0), g=st.floats(-10.0, 10.0).filter(
        lambda g: abs(g - 1.0) > 1e-3 and abs(g) > 1e-3))
    @settings(max_examples=200, deadline=None)
    def test_bounded_in_unit_interval(self, eta, g):
        assert 0.0 <= flip_amplitude(eta, g) <= 1.0

    def test_peaks_exactly_at_eta_star_for_resonant_g(self):
        for g in (1.5, 2.0, 3.0, 5.0):
            eta_star = math.sqrt(4.0 / (g - 1.0))
            assert flip_amplitude(eta_star, g) == pytest.approx(1.0, abs=1e-14)
            assert flip_amplitude(0.9 * eta_star, g) < 1.0
            assert flip_amplitude(1.1 * eta_star, g) < 1.0

    def test_monotone_increasing_below_resonance(self):
        g = 2.0
        etas = np.linspace(0.01, 1.99, 300)
        amps = [flip_amplitude(x, g) for x in etas]
        assert np.all(np.diff(amps) > 0)


class TestDerivedParams:
    def test_kappa_and_eta_star_for_g2(self):
        d = derive_params(WaveConfig(eta=1.0, epsilon_sq=0.5),
                          ParticleConfig(g=2.0), FrameConfig())
        assert d.kappa_sq == 8.0
        assert d.eta_star_sq == 4.0
        assert d.resonant

    def test_circular_modulus_vanishes_exactly(self):
        d = derive_params(WaveConfig(eta=3.7, epsilon_sq=0.5),
                          ParticleConfig(g=2.0),
                          FrameConfig(mode="explicit", gamma_z=1.0))
        assert d.mu_sq == 0.0

    def test_resonance_frequency_value(self):
        d = derive_params(WaveConfig(eta=2.0, epsilon_sq=0.5),
                          ParticleConfig(g=2.0), FrameConfig())
        assert d.omega_s == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)
        assert d.amplitude == 1.0

    def test_inclination_satisfies_tan_relation(self):
        for eta in (0.3, 1.0, 2.5):
            for g in (1.5, 2.0, 4.0):
                d = derive_params(WaveConfig(eta=eta, epsilon_sq=0.5),
                                  ParticleConfig(g=g), FrameConfig())
                assert math.tan(d.theta) * eta == pytest.approx(
                    math.sqrt(d.kappa_sq), rel=1e-12)

    def test_modulus_relation_holds(self):
        w = WaveConfig(eta=1.3, epsilon_sq=0.2)
        d = derive_params(w, ParticleConfig(g=2.0), FrameConfig())
        assert d.gamma_z ** 2 * d.mu_sq == pytest.approx(
            w.eta ** 2 * (1 - 2 * w.epsilon_sq), rel=1e-14)

    def test_scale_consistency_in_omega_l(self):
        base = derive_params(WaveConfig(eta=2.0, epsilon_sq=0.5, omega_l=1.0),
                             ParticleConfig(g=2.0), FrameConfig())
        double = derive_params(WaveConfig(eta=2.0, epsilon_sq=0.5, omega_l=2.0),
                               ParticleConfig(g=2.0), FrameConfig())
        assert double.omega_s == pytest.approx(2 * base.omega_s, rel=1e-15)
        assert double.omega_l_prime == pytest.approx(2 * base.omega_l_prime,
                                                     rel=1e-15)
        for name in ("kappa_sq", "eta_star_sq", "theta", "mu_sq", "gamma_z",
                     "amplitude"):
            assert getattr(double, name) == getattr(base, name)

    def test_degenerate_g_raises(self):
        with pytest.raises(DegenerateGyromagneticError):
            derive_params(WaveConfig(eta=1.0, epsilon_sq=0.5),
                          ParticleConfig(g=1.0), FrameConfig())

    def test_analytic_unavailable_for_elliptical(self):
        d = derive_params(WaveConfig(eta=1.0, epsilon_sq=0.3),
                          ParticleConfig(g=2.0), FrameConfig())
        assert d.omega_s is None
        assert d.amplitude is None

    def test_analytic_unavailable_for_boosted_frame(self):
        d = derive_params(WaveConfig(eta=1.0, epsilon_sq=0.5),
                          ParticleConfig(g=2.0),
                          FrameConfig(mode="explicit", gamma_z=1.3))
        assert d.omega_s is None

    def test_non_resonant_below_g1(self):
        d = derive_params(WaveConfig(eta=1.0, epsilon_sq=0.5),
                          ParticleConfig(g=0.5), FrameConfig())
        assert not d.resonant
        assert d.eta_star_sq < 0


class TestRabiFrequency:
    def test_resonance_case(self):
        assert rabi_frequency(2.0, 2.0) == pytest.approx(2 ** -0.5, rel=1e-15)

    def test_degenerate(self):
        with pytest.raises(DegenerateGyromagneticError):
            rabi_frequency(1.0, 1.0)


class TestAverageRestFrame:
    def test_circular_returns_exactly_one(self):
        assert solve_average_rest_frame(WaveConfig(eta=3.0, epsilon_sq=0.5)) == 1.0

    def test_free_particle_returns_exactly_one(self):
        assert solve_average_rest_frame(WaveConfig(eta=0.0, epsilon_sq=0.1)) == 1.0

    def test_linear_eta1_matches_frozen_oracle_value(self):
        gamma = solve_average_rest_frame(WaveConfig(eta=1.0, epsilon_sq=0.0))
        assert gamma == pytest.approx(GAMMA_LINEAR_ETA1, abs=1e-11)

    def test_matches_live_bisection_oracle(self):
        for eta, eps_sq in ((0.5, 0.0), (1.0, 0.2), (2.0, 0.81)):
            gamma = solve_average_rest_frame(WaveConfig(eta=eta, epsilon_sq=eps_sq))
            ref = oracles.frame_gamma_bisection(eta, eps_sq)
            assert gamma == pytest.approx(ref, abs=1e-10)

    @pytest.mark.parametrize("eta,eps_sq", [(0.3, 0.0), (0.8, 0.0), (1.0, 0.81)])
    def test_mean_dn_condition_by_quadrature(self, eta, eps_sq):
        wave = WaveConfig(eta=eta, epsilon_sq=eps_sq)
        gamma = solve_average_rest_frame(wave)
        m = eta ** 2 * (1 - 2 * eps_sq) / gamma ** 2
        period = 2.0 * complete_k(m)
        avg = oracles.mean_dn(lambda u: jacobi_eval(u, m).dn, period)
        assert abs(gamma * avg - 1.0) < 1e-10

    def test_residual_criterion(self):
        wave = WaveConfig(eta=0.8, epsilon_sq=0.0)
        gamma = solve_average_rest_frame(wave)
        m = wave.eta ** 2 / gamma ** 2
        assert abs(gamma - 2.0 * complete_k(m) / math.pi) < 1e-12

    def test_unreachable_for_extreme_linear_strength(self):
        # the fixed point would need mu^2 closer to 1 than doubles resolve
        with pytest.raises(FrameUnreachableError):
            solve_average_rest_frame(WaveConfig(eta=25.0, epsilon_sq=0.0))


class TestModel:
    def test_build_model_resolves_frame(self, linear_model):
        assert linear_model.gamma_z == pytest.approx(GAMMA_LINEAR_ETA1, abs=1e-11)
        assert linear_model.omega_l_prime == pytest.approx(
            linear_model.gamma_z, rel=1e-15)

    def test_model_is_frozen(self, resonance_model):
        with pytest.raises(AttributeError):
            resonance_model.wave = None
