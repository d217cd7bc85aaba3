"""Exact classical orbit of the charge in the plane wave, and the lab fields
evaluated on it.

The orbit is driven entirely by the Jacobi kernel: with u = omega_l' t and
m = mu^2,

    v_x = -q c eta eps            cn(u, m)
    v_y = -q c eta sqrt(1-eps^2)  sn(u, m)
    v_z =  c (1 - gamma_z dn(u, m))

    z(t) = c t - (c / omega_l) am(u, m)

and the wave phase evaluated at the particle is omega_l xi(t) = am(u, m),
which makes the transverse-momentum identity v_perp = -q A_perp(xi) exact:
cos(am) = cn and sin(am) = sn by construction.

Transverse positions integrate the velocity by adaptive quadrature (absolute
tolerance 1e-10); the closed-form antiderivatives of cn and sn are kept only
as a cross-check because they require 0 < m < 1.

Natural units c = 1; times are laboratory time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .elliptic import complete_k, jacobi_eval
from .errors import DegenerateOrbitError
from .params import Model

__all__ = [
    "TrajectorySample",
    "LabFields",
    "velocity",
    "acceleration",
    "position",
    "wave_phase",
    "fields_at_particle",
    "trajectory_sample",
    "transverse_position_closed_form",
]

_QUAD_ABS_TOL = 1e-11
_QUAD_REL_TOL = 1e-11


@dataclass(frozen=True)
class TrajectorySample:
    """One time-stamped point of the classical orbit."""

    t: float
    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    phase: float  # omega_l * xi at the particle, unwound


@dataclass(frozen=True)
class LabFields:
    """Laboratory-frame E and B at the particle's instantaneous position."""

    e: np.ndarray
    b: np.ndarray


def _orbit_guard(model: Model):
    if abs(model.mu_sq - 1.0) < 1e-14:
        raise DegenerateOrbitError(
            "mu^2 = 1: the quarter period diverges and the orbit loses "
            "periodicity; the period-average frame construction does not apply")


def _stack3(x, y, z):
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def velocity(model: Model, t):
    """Orbit velocity; t scalar or array, returns shape (..., 3)."""
    _orbit_guard(model)
    w = model.wave
    q = model.charge
    tri = jacobi_eval(model.omega_l_prime * np.asarray(t, dtype=float), model.mu_sq)
    eps = w.epsilon
    eps_y = np.sqrt(1.0 - w.epsilon_sq)
    vx = -q * w.eta * eps * tri.cn
    vy = -q * w.eta * eps_y * tri.sn
    vz = 1.0 - model.gamma_z * tri.dn
    return _stack3(vx, vy, vz)


def acceleration(model: Model, t):
    """Analytic time derivative of the velocity (via sn' = cn dn etc.)."""
    _orbit_guard(model)
    w = model.wave
    q = model.charge
    m = model.mu_sq
    wp = model.omega_l_prime
    tri = jacobi_eval(wp * np.asarray(t, dtype=float), m)
    eps = w.epsilon
    eps_y = np.sqrt(1.0 - w.epsilon_sq)
    ax = q * w.eta * eps * wp * tri.sn * tri.dn
    ay = -q * w.eta * eps_y * wp * tri.cn * tri.dn
    az = model.gamma_z * wp * m * tri.sn * tri.cn
    return _stack3(ax, ay, az)


def wave_phase(model: Model, t):
    """omega_l * xi(t) at the particle: the unwound amplitude am(omega_l' t, mu^2)."""
    _orbit_guard(model)
    return jacobi_eval(model.omega_l_prime * np.asarray(t, dtype=float), model.mu_sq).am


def _transverse_speed(model: Model, axis: int):
    """Scalar integrand factory for one transverse velocity component."""
    w = model.wave
    q = model.charge
    coeff = -q * w.eta * (w.epsilon if axis == 0 else np.sqrt(1.0 - w.epsilon_sq))
    wp = model.omega_l_prime

    def f(tt):
        tri = jacobi_eval(wp * tt, model.mu_sq)
        return coeff * (tri.cn if axis == 0 else tri.sn)

    return f


def _integrate_component(model: Model, axis: int, t0: float, t1: float) -> float:
    """Adaptive quadrature of one velocity component, chunked per quarter period."""
    if t1 == t0:
        return 0.0
    f = _transverse_speed(model, axis)
    m = model.mu_sq
    if m < 1.0:
        chunk = complete_k(m) / model.omega_l_prime
    else:
        chunk = complete_k(1.0 / m) / (np.sqrt(m) * model.omega_l_prime)
    sign = 1.0
    if t1 < t0:
        t0, t1 = t1, t0
        sign = -1.0
    edges = np.arange(t0, t1, chunk)
    edges = np.append(edges, t1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = quad(f, a, b, epsabs=_QUAD_ABS_TOL, epsrel=_QUAD_REL_TOL, limit=200)
        total += val
    return sign * total


def position(model: Model, t):
    """Orbit position with x(0) = 0.

    z comes from the unwound amplitude in closed form; the transverse pair is
    integrated numerically.  Array input must be non-decreasing (the running
    integral is accumulated interval by interval).
    """
    _orbit_guard(model)
    t_arr = np.asarray(t, dtype=float)
    z = t_arr - wave_phase(model, t_arr) / model.wave.omega_l
    if t_arr.ndim == 0:
        x = _integrate_component(model, 0, 0.0, float(t_arr))
        y = _integrate_component(model, 1, 0.0, float(t_arr))
        return np.array([x, y, float(z)])
    if np.any(np.diff(t_arr) < 0):
        raise ValueError("array input to position must be non-decreasing")
    x = np.empty_like(t_arr)
    y = np.empty_like(t_arr)
    prev_t, prev_x, prev_y = 0.0, 0.0, 0.0
    for i, ti in enumerate(t_arr):
        prev_x += _integrate_component(model, 0, prev_t, float(ti))
        prev_y += _integrate_component(model, 1, prev_t, float(ti))
        prev_t = float(ti)
        x[i] = prev_x
        y[i] = prev_y
    return _stack3(x, y, z)


def transverse_position_closed_form(model: Model, t):
    """Closed-form antiderivatives of cn and sn; cross-check path, 0 < m < 1 only.

    Both expressions are global antiderivatives on the standard range:
    sqrt(m) |sn| < 1 keeps the arcsin on its principal branch, and
    dn - sqrt(m) cn > 0 keeps the logarithm real.
    """
    m = model.mu_sq
    if not 0.0 < m < 1.0:
        raise ValueError("closed-form transverse position requires 0 < mu^2 < 1")
    w = model.wave
    q = model.charge
    wp = model.omega_l_prime
    rk = np.sqrt(m)
    tri = jacobi_eval(wp * np.asarray(t, dtype=float), m)
    x = -q * w.eta * w.epsilon * np.arcsin(rk * tri.sn) / (wp * rk)
    y = -q * w.eta * np.sqrt(1.0 - w.epsilon_sq) * (
        np.log(tri.dn - rk * tri.cn) - np.log(1.0 - rk)) / (wp * rk)
    return np.stack(np.broadcast_arrays(x, y), axis=-1)


def fields_at_particle(model: Model, t) -> LabFields:
    """Plane-wave E and B evaluated at the particle's phase.

    The phase is omega_l xi = am(u, m), whose sine and cosine are sn and cn,
    so the fields inherit the kernel's consistency exactly.  E.B = 0 and
    |E| = |B| hold identically.
    """
    _orbit_guard(model)
    w = model.wave
    a = w.amplitude
    tri = jacobi_eval(model.omega_l_prime * np.asarray(t, dtype=float), model.mu_sq)
    eps = w.epsilon
    eps_y = np.sqrt(1.0 - w.epsilon_sq)
    ex = a * w.omega_l * eps * tri.sn
    ey = -a * w.omega_l * eps_y * tri.cn
    zero = np.zeros_like(np.asarray(tri.sn))
    e = _stack3(ex, ey, zero)
    b = _stack3(-np.asarray(ey), np.asarray(ex), zero)  # B = z_hat x E
    return LabFields(e=e, b=b)


def trajectory_sample(model: Model, t: float) -> TrajectorySample:
    """Convenience single-time sample of the full orbit state."""
    t = float(t)
    return TrajectorySample(
        t=t,
        position=position(model, t),
        velocity=velocity(model, t),
        acceleration=acceleration(model, t),
        phase=float(wave_phase(model, t)),
    )
