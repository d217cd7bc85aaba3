"""Configuration types and derivation of the dimensionless parameter set.

Natural units throughout: c = m = |e| = hbar = 1.  With those choices the
gauge amplitude equals the dimensionless field strength, a = eta, and every
derived quantity is a pure function of (g, eta, epsilon^2, gamma_z, omega_l).

The polarization is stored as epsilon^2 rather than epsilon so that the
circular case epsilon^2 = 1/2 is exactly representable and the squared
elliptic modulus

    mu^2 = eta^2 (1 - 2 epsilon^2) / gamma_z^2

vanishes identically there.

Key derived quantities (g != 1):

    kappa^2   = 2 g^2 / (1 - g)^2
    eta_*^2   = 4 / (g - 1)            resonant squared field strength
    omega_s   = (omega_l |1-g| / 8) sqrt(kappa^2 eta^2 + (eta^2 - eta_*^2)^2)
    amplitude = kappa^2 eta^2 / (kappa^2 eta^2 + (eta^2 - eta_*^2)^2)

omega_s and the flip amplitude are exact only for circular polarization in
the average rest frame; outside that regime they are reported as None and
callers must fall back to numeric propagation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import complete_k
from .errors import DegenerateGyromagneticError, FrameUnreachableError

__all__ = [
    "WaveConfig",
    "ParticleConfig",
    "FrameConfig",
    "DerivedParams",
    "Model",
    "flip_amplitude",
    "rabi_frequency",
    "solve_average_rest_frame",
    "derive_params",
    "build_model",
]

# Tolerance inside which a configuration counts as exactly circular / exactly
# in the average rest frame for the purpose of analytic availability.
_CIRCULAR_TOL = 1e-12

_FIXED_POINT_TOL = 1e-12
_MAX_FIXED_POINT_ITER = 200


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class WaveConfig:
    """Monochromatic plane wave propagating along +z.

    Attributes:
        eta: dimensionless field strength, >= 0 (equals the gauge amplitude).
        epsilon_sq: squared polarization parameter in [0, 1]; 1/2 is circular.
        omega_l: laser circular frequency, > 0 (sets the time unit).
    """

    eta: float
    epsilon_sq: float
    omega_l: float = 1.0

    def __post_init__(self):
        _require_finite("eta", self.eta)
        _require_finite("epsilon_sq", self.epsilon_sq)
        _require_finite("omega_l", self.omega_l)
        if self.eta < 0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")
        if not 0.0 <= self.epsilon_sq <= 1.0:
            raise ValueError(f"epsilon_sq must lie in [0, 1], got {self.epsilon_sq}")
        if self.omega_l <= 0:
            raise ValueError(f"omega_l must be > 0, got {self.omega_l}")

    @property
    def epsilon(self) -> float:
        return math.sqrt(self.epsilon_sq)

    @property
    def amplitude(self) -> float:
        """Gauge amplitude a; equals eta in natural units."""
        return self.eta

    @property
    def is_circular(self) -> bool:
        return abs(self.epsilon_sq - 0.5) < _CIRCULAR_TOL


@dataclass(frozen=True)
class ParticleConfig:
    """Charged spin-1/2 particle.

    charge_sign flips the orientation of the transverse orbit and the sign of
    the spin coupling; the resonance observables are unchanged by it.
    """

    g: float
    charge_sign: float = 1.0

    def __post_init__(self):
        _require_finite("g", self.g)
        if self.g == 0.0:
            raise ValueError(
                "g = 0 is not supported: the trajectory-curvature term of the "
                "effective field is normalized by 1/g")
        if self.charge_sign not in (1.0, -1.0, 1, -1):
            raise ValueError(f"charge_sign must be +1 or -1, got {self.charge_sign}")


@dataclass(frozen=True)
class FrameConfig:
    """Longitudinal frame choice.

    mode "average_rest_frame" solves for gamma_z such that the period-averaged
    velocity vanishes; mode "explicit" takes gamma_z = 1 - v_z(0)/c as given.
    """

    mode: str = "average_rest_frame"
    gamma_z: float | None = None

    def __post_init__(self):
        if self.mode not in ("average_rest_frame", "explicit"):
            raise ValueError(
                f"frame mode must be 'average_rest_frame' or 'explicit', got {self.mode!r}")
        if self.mode == "explicit":
            if self.gamma_z is None:
                raise ValueError("explicit frame mode requires gamma_z")
            _require_finite("gamma_z", self.gamma_z)
            if self.gamma_z <= 0:
                raise ValueError(f"gamma_z must be > 0, got {self.gamma_z}")
        elif self.gamma_z is not None:
            raise ValueError("gamma_z may only be set in explicit frame mode")


@dataclass(frozen=True)
class DerivedParams:
    """Every secondary dimensionless quantity, plus the resolved gamma_z.

    omega_s and amplitude are None when the closed-form solution does not
    apply (non-circular polarization or gamma_z != 1).
    """

    kappa_sq: float
    eta_star_sq: float
    theta: float
    mu_sq: float
    gamma_z: float
    omega_l_prime: float
    omega_s: float | None
    amplitude: float | None
    resonant: bool


@dataclass(frozen=True)
class Model:
    """Immutable bundle of configuration and derived parameters.

    All orbit, field and spin operations take a Model; construction via
    :func:`build_model` resolves the frame and derives everything once.
    """

    wave: WaveConfig
    particle: ParticleConfig
    derived: DerivedParams

    @property
    def gamma_z(self) -> float:
        return self.derived.gamma_z

    @property
    def mu_sq(self) -> float:
        return self.derived.mu_sq

    @property
    def omega_l_prime(self) -> float:
        return self.derived.omega_l_prime

    @property
    def charge(self) -> float:
        return float(self.particle.charge_sign)


def flip_amplitude(eta: float, g: float) -> float:
    """Resonance-form flip amplitude, in [0, 1], peaking at eta^2 = eta_*^2.

    Raises:
        DegenerateGyromagneticError: for g = 1, where kappa diverges.
    """
    eta = _require_finite("eta", eta)
    g = _require_finite("g", g)
    if g == 1.0:
        raise DegenerateGyromagneticError(
            "flip amplitude is undefined at g = 1 (kappa diverges)")
    kappa_sq = 2.0 * g * g / (1.0 - g) ** 2
    eta_star_sq = 4.0 / (g - 1.0)
    drive = kappa_sq * eta * eta
    detune = (eta * eta - eta_star_sq) ** 2
    return drive / (drive + detune)


def rabi_frequency(eta: float, g: float, omega_l: float = 1.0) -> float:
    """Spin oscillation frequency omega_s (circular polarization, average
    rest frame)."""
    eta = _require_finite("eta", eta)
    g = _require_finite("g", g)
    if g == 1.0:
        raise DegenerateGyromagneticError(
            "omega_s is undefined at g = 1 (kappa diverges)")
    kappa_sq = 2.0 * g * g / (1.0 - g) ** 2
    eta_star_sq = 4.0 / (g - 1.0)
    return (omega_l * abs(1.0 - g) / 8.0) * math.sqrt(
        kappa_sq * eta * eta + (eta * eta - eta_star_sq) ** 2)


def _mean_dn_residual(gamma: float, modulus_scale: float) -> float:
    """F(gamma) = gamma - 2 K(mu^2(gamma)) / pi, with mu^2 = scale / gamma^2.

    The average-rest-frame condition <v_z> = 0 is gamma <dn> = 1; over one
    period <dn> = pi / (2K), so the frame is the root of F.
    """
    m = modulus_scale / (gamma * gamma)
    return gamma - 2.0 * complete_k(m) / np.pi


def solve_average_rest_frame(wave: WaveConfig,
                             tol: float = _FIXED_POINT_TOL,
                             max_iter: int = _MAX_FIXED_POINT_ITER) -> float:
    """gamma_z of the frame in which the period-averaged velocity vanishes.

    Solves the fixed point gamma = 2 K(mu^2(gamma)) / pi with
    mu^2 = eta^2 (1 - 2 epsilon^2) / gamma^2, by damped iteration with a
    bisection fallback.  For epsilon^2 = 1/2 or eta = 0 the solution is
    gamma_z = 1 exactly; for epsilon^2 > 1/2 the parameter is negative and
    the same expression applies on its analytic continuation (K from the
    negative-parameter branch), giving gamma_z < 1.

    Returns:
        gamma_z with |gamma_z - 2 K / pi| < tol.

    Raises:
        FrameUnreachableError: when the fixed point cannot be bracketed in
            double precision (mu^2 indistinguishable from 1).
    """
    scale = wave.eta ** 2 * (1.0 - 2.0 * wave.epsilon_sq)
    if scale == 0.0:
        return 1.0

    gamma_min = math.sqrt(scale) if scale > 0 else 0.0  # mu^2 < 1 requires gamma > gamma_min
    gamma = max(1.0, gamma_min * (1.0 + 1e-9)) if scale > 0 else 1.0

    # Damped iteration; quick for moderate moduli.
    for _ in range(max_iter):
        try:
            residual = -_mean_dn_residual(gamma, scale)
        except ValueError:
            break  # left the K domain, fall back to bisection
        if abs(residual) < tol:
            return gamma
        candidate = gamma + 0.5 * residual
        if scale > 0 and candidate <= gamma_min:
            break
        if candidate <= 0:
            break
        gamma = candidate

    # Bisection fallback on a sign-changing bracket of F.
    if scale > 0:
        lo = gamma_min * (1.0 + 1e-14)
        try:
            f_lo = _mean_dn_residual(lo, scale)
        except ValueError:
            raise FrameUnreachableError(
                "mu^2 is indistinguishable from 1 in double precision",
                last_iterate=gamma)
        if f_lo >= 0:
            raise FrameUnreachableError(
                f"no bracket: F({lo}) = {f_lo} >= 0; the fixed point sits too "
                "close to the mu^2 = 1 divergence", last_iterate=lo)
        hi = max(1.0, gamma_min + 1.0)
        while _mean_dn_residual(hi, scale) <= 0:
            hi *= 2.0
            if hi > 1e6:
                raise FrameUnreachableError(
                    "upper bracket escaped", last_iterate=hi)
    else:
        hi = 1.0
        lo = 0.5
        while _mean_dn_residual(lo, scale) >= 0:
            lo *= 0.5
            if lo < 1e-12:
                raise FrameUnreachableError(
                    "lower bracket collapsed toward gamma = 0", last_iterate=lo)

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = _mean_dn_residual(mid, scale)
        if abs(f_mid) < tol:
            return mid
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    mid = 0.5 * (lo + hi)
    if abs(_mean_dn_residual(mid, scale)) < tol:
        return mid
    raise FrameUnreachableError(
        f"fixed point not converged to {tol} in {max_iter} iterations",
        last_iterate=mid)


def derive_params(wave: WaveConfig, particle: ParticleConfig,
                  frame: FrameConfig) -> DerivedParams:
    """Populate every derived quantity for a (wave, particle, frame) triple.

    Raises:
        DegenerateGyromagneticError: for g = 1.
        FrameUnreachableError: propagated from the frame solve.
    """
    g = particle.g
    if g == 1.0:
        raise DegenerateGyromagneticError(
            "kappa, theta and omega_s are undefined at g = 1")

    if frame.mode == "explicit":
        gamma_z = float(frame.gamma_z)
    else:
        gamma_z = solve_average_rest_frame(wave)

    kappa_sq = 2.0 * g * g / (1.0 - g) ** 2
    eta_star_sq = 4.0 / (g - 1.0)
    theta = math.atan2(math.sqrt(kappa_sq), wave.eta)
    mu_sq = wave.eta ** 2 * (1.0 - 2.0 * wave.epsilon_sq) / gamma_z ** 2

    analytic = wave.is_circular and abs(gamma_z - 1.0) < _CIRCULAR_TOL
    omega_s = rabi_frequency(wave.eta, g, wave.omega_l) if analytic else None
    amplitude = flip_amplitude(wave.eta, g) if analytic else None

    return DerivedParams(
        kappa_sq=kappa_sq,
        eta_star_sq=eta_star_sq,
        theta=theta,
        mu_sq=mu_sq,
        gamma_z=gamma_z,
        omega_l_prime=gamma_z * wave.omega_l,
        omega_s=omega_s,
        amplitude=amplitude,
        resonant=g > 1.0,
    )


def build_model(wave: WaveConfig, particle: ParticleConfig,
                frame: FrameConfig | None = None) -> Model:
    """Resolve the frame, derive all parameters and freeze them into a Model."""
    if frame is None:
        frame = FrameConfig()
    return Model(wave=wave, particle=particle,
                 derived=derive_params(wave, particle, frame))
