"""Spatially homogeneous effective magnetic field driving the spin.

Two contributions, evaluated along the exact classical orbit:

    b_rest   = B - v x E          field seen in the instantaneous rest frame
    b_thomas = (1 / (q g)) v x a  leading trajectory-curvature (Thomas) term

(natural units; q is the charge sign).  Their sum b_eff is the source of
truth for spin propagation.

For circular polarization in the average rest frame the assembly collapses to
a constant-magnitude field rotating at omega_l about the propagation axis:

    |B'| = (a omega_l |1-g| / (2|g|)) sqrt(kappa^2 + eta^2),
    tan(theta) = kappa / eta,

with the cone opening about +z or -z depending on sign(q (1-g) / g).  That
closed form is exposed by :func:`circular_closed_form` and checked against
the assembly componentwise.

:func:`display_component_field` evaluates an alternative componentwise
closed-form expression for the same field.  It is retained purely as a
cross-check: its z component differs from the assembled field by a factor of
eta in the circular limit, and the spin propagator never consumes it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic import jacobi_eval
from .errors import RegimeError
from .params import Model
from .trajectory import acceleration, fields_at_particle, velocity

__all__ = [
    "FieldSample",
    "RotatingConeField",
    "effective_field",
    "circular_closed_form",
    "display_component_field",
]


@dataclass(frozen=True)
class FieldSample:
    """Effective-field decomposition at one or many times (arrays of (..., 3))."""

    t: object
    b_rest: np.ndarray
    b_thomas: np.ndarray
    b_eff: np.ndarray


@dataclass(frozen=True)
class RotatingConeField:
    """Constant-magnitude field rotating at omega about the z axis.

    theta is the acute inclination from the axis (tan theta = kappa / eta);
    axis is (0, 0, +-1) and carries the side of the cone.
    """

    magnitude: float
    theta: float
    omega: float
    axis: np.ndarray

    def sample(self, t):
        """Field vector(s) at time(s) t, shape (..., 3)."""
        t = np.asarray(t, dtype=float)
        s = float(self.axis[2])
        bx = self.magnitude * np.sin(self.theta) * np.cos(self.omega * t)
        by = self.magnitude * np.sin(self.theta) * np.sin(self.omega * t)
        bz = s * self.magnitude * np.cos(self.theta) * np.ones_like(t)
        return np.stack(np.broadcast_arrays(bx, by, bz), axis=-1)


def effective_field(model: Model, t) -> FieldSample:
    """Assemble b_rest, b_thomas and their sum on the exact orbit.

    t may be a scalar or an array; vectors broadcast to shape (..., 3).
    Propagates the degenerate-orbit error for mu^2 = 1.
    """
    v = velocity(model, t)
    acc = acceleration(model, t)
    lab = fields_at_particle(model, t)
    b_rest = lab.b - np.cross(v, lab.e)
    b_thomas = np.cross(v, acc) / (model.charge * model.particle.g)
    return FieldSample(t=t, b_rest=b_rest, b_thomas=b_thomas,
                       b_eff=b_rest + b_thomas)


def circular_closed_form(model: Model) -> RotatingConeField:
    """Rotating-cone closed form of the effective field.

    Valid for circular polarization in the average rest frame with g != 1 and
    eta > 0; raises RegimeError otherwise.
    """
    w = model.wave
    g = model.particle.g
    if not (w.is_circular and abs(model.gamma_z - 1.0) < 1e-12):
        raise RegimeError(
            "rotating-cone closed form requires circular polarization in the "
            "average rest frame")
    if g == 1.0:
        raise RegimeError("rotating-cone closed form is undefined at g = 1")
    if w.eta <= 0.0:
        raise RegimeError("rotating-cone closed form requires eta > 0")
    d = model.derived
    magnitude = (w.amplitude * w.omega_l * abs(1.0 - g) / (2.0 * abs(g))) \
        * np.sqrt(d.kappa_sq + w.eta ** 2)
    side = 1.0 if model.charge * (1.0 - g) / g > 0 else -1.0
    return RotatingConeField(
        magnitude=float(magnitude),
        theta=d.theta,
        omega=w.omega_l,
        axis=np.array([0.0, 0.0, side]),
    )


def display_component_field(model: Model, t):
    """Componentwise closed-form field expression kept as a cross-check.

    Not used by spin propagation: at circular polarization its transverse
    part matches the assembled field but its z component is smaller by a
    factor of eta, so the assembly is authoritative.
    """
    w = model.wave
    g = model.particle.g
    gamma = model.gamma_z
    m = model.mu_sq
    tri = jacobi_eval(model.omega_l_prime * np.asarray(t, dtype=float), m)
    eps = w.epsilon
    eps_y = np.sqrt(1.0 - w.epsilon_sq)
    front = w.amplitude * model.omega_l_prime / g
    bx = front * eps_y * ((g + 1.0) * tri.dn - gamma) * tri.cn
    by = front * eps * ((g + 1.0) * tri.dn - gamma * (1.0 - m)) * tri.sn
    bz = front * eps * eps_y * (tri.dn - g / gamma) * np.ones_like(np.asarray(tri.sn))
    return np.stack(np.broadcast_arrays(bx, by, bz), axis=-1)
