"""Classical orbit: velocity, position, acceleration, lab fields."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from spinflip import (DegenerateOrbitError, FrameConfig, ParticleConfig,
                      WaveConfig, acceleration, build_model, complete_k,
                      fields_at_particle, jacobi_eval, position,
                      trajectory_sample, transverse_position_closed_form,
                      velocity, wave_phase)

# dn at the quarter period for m = 0.25 (sqrt(3)/2, trivially sqrt(1 - m))
DN_QUARTER_M025 = 0.8660254037844386


def _orbit_period(model):
    """Full transverse period 4K / omega_l' (works for mu^2 < 1)."""
    return 4.0 * complete_k(model.mu_sq) / model.omega_l_prime


class TestVelocity:
    def test_circular_initial_velocity(self, resonance_model):
        v = velocity(resonance_model, 0.0)
        assert_allclose(v, [-math.sqrt(2.0), 0.0, 0.0], atol=1e-15)

    def test_free_particle_drifts(self):
        m = build_model(WaveConfig(eta=0.0, epsilon_sq=0.5),
                        ParticleConfig(g=2.0),
                        FrameConfig(mode="explicit", gamma_z=0.7))
        v = velocity(m, np.array([0.0, 1.0, 17.3]))
        assert_allclose(v[:, 0], 0.0)
        assert_allclose(v[:, 1], 0.0)
        assert_allclose(v[:, 2], 0.3, rtol=1e-15)

    def test_linear_quarter_period_frozen_values(self):
        # epsilon = 0, eta = 0.5, explicit gamma_z = 1: mu^2 = 0.25
        m = build_model(WaveConfig(eta=0.5, epsilon_sq=0.0),
                        ParticleConfig(g=2.0),
                        FrameConfig(mode="explicit", gamma_z=1.0))
        assert m.mu_sq == pytest.approx(0.25, rel=1e-15)
        t_quarter = complete_k(0.25) / m.omega_l_prime
        v = velocity(m, t_quarter)
        assert_allclose(v, [0.0, -0.5, 1.0 - DN_QUARTER_M025], atol=1e-12)

    def test_components_bounded_by_polarization_amplitudes(self, rng):
        for eps_sq in (0.0, 0.3, 0.5, 0.81):
            w = WaveConfig(eta=1.7, epsilon_sq=eps_sq)
            m = build_model(w, ParticleConfig(g=2.0))
            t = rng.uniform(0, 50, size=400)
            v = velocity(m, t)
            assert np.all(np.abs(v[:, 0]) <= w.eta * w.epsilon + 1e-12)
            assert np.all(np.abs(v[:, 1]) <= w.eta * math.sqrt(1 - eps_sq) + 1e-12)

    def test_charge_sign_flips_transverse_only(self, rng):
        t = rng.uniform(0, 20, size=50)
        plus = build_model(WaveConfig(eta=1.0, epsilon_sq=0.3),
                           ParticleConfig(g=2.0, charge_sign=1.0))
        minus = build_model(WaveConfig(eta=1.0, epsilon_sq=0.3),
                            ParticleConfig(g=2.0, charge_sign=-1.0))
        vp, vm = velocity(plus, t), velocity(minus, t)
        assert_allclose(vm[:, :2], -vp[:, :2], atol=1e-15)
        assert_allclose(vm[:, 2], vp[:, 2], atol=1e-15)

    def test_degenerate_modulus_rejected(self):
        m = build_model(WaveConfig(eta=1.0, epsilon_sq=0.0),
                        ParticleConfig(g=2.0),
                        FrameConfig(mode="explicit", gamma_z=1.0))
        assert m.mu_sq == 1.0
        with pytest.raises(DegenerateOrbitError):
            velocity(m, 0.1)


class TestPosition:
    def test_initial_condition(self, linear_model):
        assert_allclose(position(linear_model, 0.0), [0.0, 0.0, 0.0], atol=1e-15)

    def test_circular_average_rest_frame_has_no_z_drift(self, resonance_model):
        t = np.linspace(0.0, 20.0, 41)
        pos = position(resonance_model, t)
        assert np.max(np.abs(pos[:, 2])) < 1e-13

    def test_quadrature_agrees_with_closed_form(self, linear_model):
        t = np.linspace(0.0, _orbit_period(linear_model), 29)
        pos = position(linear_model, t)
        closed = transverse_position_closed_form(linear_model, t)
        assert np.max(np.abs(pos[:, :2] - closed)) < 1e-9

    def test_z_finite_difference_matches_velocity(self, linear_model):
        h = 1e-6
        for t in (0.3, 1.7, 4.1):
            zp = position(linear_model, t + h)[2]
            zm = position(linear_model, t - h)[2]
            vz = velocity(linear_model, t)[2]
            assert (zp - zm) / (2 * h) == pytest.approx(vz, rel=1e-6, abs=1e-9)

    def test_velocity_averages_vanish_in_average_rest_frame(self, linear_model):
        period = _orbit_period(linear_model)
        for comp in range(3):
            val, _ = quad(lambda tt, c=comp: velocity(linear_model, tt)[c],
                          0.0, period, epsabs=1e-12, epsrel=1e-11, limit=300)
            assert abs(val / period) < 1e-9

    def test_array_input_must_be_sorted(self, linear_model):
        with pytest.raises(ValueError, match="non-decreasing"):
            position(linear_model, np.array([1.0, 0.5]))


class TestAcceleration:
    def test_circular_initial_value(self, resonance_model):
        a = acceleration(resonance_model, 0.0)
        assert_allclose(a, [0.0, -math.sqrt(2.0), 0.0], atol=1e-15)

    def test_vanishes_without_field(self):
        m = build_model(WaveConfig(eta=0.0, epsilon_sq=0.5), ParticleConfig(g=2.0))
        assert_allclose(acceleration(m, 1.3), [0.0, 0.0, 0.0], atol=1e-15)

    @pytest.mark.parametrize("eps_sq", [0.0, 0.5, 0.81])
    def test_matches_finite_difference_of_velocity(self, eps_sq):
        m = build_model(WaveConfig(eta=1.2, epsilon_sq=eps_sq), ParticleConfig(g=2.0))
        h = 1e-6 / m.wave.omega_l
        for t in (0.1, 0.9, 2.7, 6.4):
            fd = (velocity(m, t + h) - velocity(m, t - h)) / (2 * h)
            exact = acceleration(m, t)
            assert_allclose(fd, exact, rtol=1e-6, atol=1e-7)


class TestLabFields:
    def test_circular_initial_fields(self, resonance_model):
        lab = fields_at_particle(resonance_model, 0.0)
        a_over_sqrt2 = 2.0 / math.sqrt(2.0)
        assert_allclose(lab.e, [0.0, -a_over_sqrt2, 0.0], atol=1e-15)
        assert_allclose(lab.b, [a_over_sqrt2, 0.0, 0.0], atol=1e-15)

    def test_zero_field_for_zero_eta(self):
        m = build_model(WaveConfig(eta=0.0, epsilon_sq=0.5), ParticleConfig(g=2.0))
        lab = fields_at_particle(m, 2.2)
        assert_allclose(lab.e, 0.0, atol=1e-15)
        assert_allclose(lab.b, 0.0, atol=1e-15)

    def test_null_field_invariants_elliptical(self, rng):
        m = build_model(WaveConfig(eta=1.5, epsilon_sq=0.64), ParticleConfig(g=2.0))
        t = rng.uniform(0.0, 40.0, size=300)
        lab = fields_at_particle(m, t)
        dots = np.einsum("ij,ij->i", lab.e, lab.b)
        assert np.max(np.abs(dots)) < 1e-12
        assert np.max(np.abs(np.linalg.norm(lab.e, axis=1)
                             - np.linalg.norm(lab.b, axis=1))) < 1e-12
        zhat_cross_e = np.cross([0.0, 0.0, 1.0], lab.e)
        assert np.max(np.abs(lab.b - zhat_cross_e)) < 1e-12


class TestTransverseMomentumIdentity:
    @pytest.mark.parametrize("eps", [0.0, 0.6, 2 ** -0.5, 0.9])
    @pytest.mark.parametrize("eta", [0.3, 2.0])
    def test_velocity_tracks_gauge_potential(self, eps, eta):
        m = build_model(WaveConfig(eta=eta, epsilon_sq=eps * eps),
                        ParticleConfig(g=2.0))
        t = np.linspace(0.0, _orbit_period(m), 250, endpoint=False)
        v = velocity(m, t)
        xi = t - position(m, t)[:, 2]  # xi = t - z/c
        ax = m.wave.eta * m.wave.epsilon * np.cos(m.wave.omega_l * xi)
        ay = m.wave.eta * math.sqrt(1 - m.wave.epsilon_sq) * np.sin(m.wave.omega_l * xi)
        assert np.max(np.abs(v[:, 0] + ax)) < 1e-10 * max(eta, 1.0)
        assert np.max(np.abs(v[:, 1] + ay)) < 1e-10 * max(eta, 1.0)


class TestCircularDegeneration:
    def test_all_outputs_reduce_to_trigonometry(self, resonance_model):
        """Compare against an independent trig-only implementation."""
        mdl = resonance_model
        eta = mdl.wave.eta
        w = mdl.wave.omega_l
        amp = eta / math.sqrt(2.0)
        t = np.linspace(0.0, 12.0, 400)
        v_trig = np.stack([-amp * np.cos(w * t), -amp * np.sin(w * t),
                           np.zeros_like(t)], axis=-1)
        a_trig = np.stack([amp * w * np.sin(w * t), -amp * w * np.cos(w * t),
                           np.zeros_like(t)], axis=-1)
        assert np.max(np.abs(velocity(mdl, t) - v_trig)) < 1e-12
        assert np.max(np.abs(acceleration(mdl, t) - a_trig)) < 1e-12
        assert np.max(np.abs(wave_phase(mdl, t) - w * t)) < 1e-12
        lab = fields_at_particle(mdl, t)
        e_trig = np.stack([amp * w * np.sin(w * t), -amp * w * np.cos(w * t),
                           np.zeros_like(t)], axis=-1)
        assert np.max(np.abs(lab.e - e_trig)) < 1e-12


class TestTrajectorySample:
    def test_bundles_consistent_fields(self, linear_model):
        s = trajectory_sample(linear_model, 1.1)
        assert s.t == 1.1
        assert_allclose(s.velocity, velocity(linear_model, 1.1), atol=0)
        assert_allclose(s.position, position(linear_model, 1.1), atol=0)
        assert s.phase == pytest.approx(float(wave_phase(linear_model, 1.1)))

    def test_phase_is_unwound_amplitude(self, linear_model):
        t = 7.0
        u = linear_model.omega_l_prime * t
        assert wave_phase(linear_model, t) == pytest.approx(
            jacobi_eval(u, linear_model.mu_sq).am, abs=1e-15)
