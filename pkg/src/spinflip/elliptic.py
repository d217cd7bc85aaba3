"""Jacobi elliptic function kernel over the full real range of the parameter m.

Everything here works with the parameter convention m = mu^2 (the squared
modulus).  The standard range 0 < m < 1 is evaluated with the
arithmetic-geometric mean and the descending Landen phase recursion; moduli
outside that range are mapped into it first:

    m < 0   negative-parameter map  m -> m/(m-1), argument scaled by sqrt(1-m)
    m > 1   reciprocal map          m -> 1/m,     argument scaled by sqrt(m),
                                    cn and dn exchange roles

m = 0 and m = 1 are exact trigonometric / hyperbolic special cases.

The amplitude am(u, m) returned by :func:`jacobi_eval` is globally unwound:
for m < 1 it is monotone in u and gains pi per half period 2K, which is what
secular quantities built on it (the particle's z coordinate) require.  For
m > 1 the amplitude is bounded, |am| < pi/2, and am' = dn still holds.

Accuracy: ~1e-13 relative for m in [0, 0.99]; degrades to ~1e-9 as m -> 1
where the quarter period diverges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "JacobiTriple",
    "ReductionPlan",
    "classify_modulus",
    "complete_k",
    "jacobi_eval",
    "reduce_modulus",
]

# Below this |cn| the phase formula for dn is a ratio of two near-zero
# quantities; switch to dn = sqrt(1 - m sn^2), exact for the standard range.
_DN_GUARD = 1e-3

_MAX_AGM_ITER = 24


def classify_modulus(m: float) -> str:
    """Classify m into {zero, standard, one, negative, greater_than_one}."""
    m = float(m)
    if not np.isfinite(m):
        raise ValueError(f"squared modulus must be finite, got {m}")
    if m == 0.0:
        return "zero"
    if m == 1.0:
        return "one"
    if 0.0 < m < 1.0:
        return "standard"
    if m < 0.0:
        return "negative"
    return "greater_than_one"


@dataclass(frozen=True)
class ReductionPlan:
    """Recipe mapping an out-of-range parameter onto the standard range.

    Evaluate the standard-range functions at (u * arg_scale, m_reduced) and
    feed the resulting triple through :meth:`map_back` to recover the
    functions at (u, m_original).
    """

    kind: str            # "identity" | "negative" | "reciprocal"
    regime: str          # classification of m_original
    m_original: float
    m_reduced: float
    arg_scale: float

    def map_back(self, sn, cn, dn):
        """Map a standard-range (sn, cn, dn) triple back to m_original."""
        if self.kind == "identity":
            return sn, cn, dn
        if self.kind == "negative":
            mu1 = 1.0 / (1.0 - self.m_original)
            return np.sqrt(mu1) * sn / dn, cn / dn, 1.0 / dn
        # reciprocal: sn shrinks by sqrt(m), cn and dn exchange roles
        return sn / self.arg_scale, dn, cn


def reduce_modulus(m: float) -> ReductionPlan:
    """Build the transformation descriptor for an arbitrary finite m."""
    regime = classify_modulus(m)
    m = float(m)
    if regime in ("zero", "standard", "one"):
        return ReductionPlan("identity", regime, m, m, 1.0)
    if regime == "negative":
        return ReductionPlan("negative", regime, m, m / (m - 1.0), np.sqrt(1.0 - m))
    return ReductionPlan("reciprocal", regime, m, 1.0 / m, np.sqrt(m))


def complete_k(m):
    """Complete elliptic integral of the first kind, parameter convention.

    Valid for any m < 1 (the AGM identity K = pi / (2 agm(1, sqrt(1-m)))
    holds on the whole half line, including m < 0 where the result is also
    the real quarter period of the Jacobi functions in u).

    Args:
        m: scalar or array, every entry < 1.

    Returns:
        K(m), same shape as the input.
    """
    m_arr = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m_arr)):
        raise ValueError("squared modulus must be finite")
    if np.any(m_arr >= 1.0):
        bad = np.asarray(m_arr)[np.asarray(m_arr) >= 1.0]
        raise ValueError(
            f"complete_k requires m < 1 (K diverges at m = 1); got {bad.flat[0]}")
    if m_arr.ndim == 0:
        a, b = 1.0, math.sqrt(1.0 - float(m_arr))
        for _ in range(_MAX_AGM_ITER):
            a, b = 0.5 * (a + b), math.sqrt(a * b)
            if abs(a - b) <= 2e-16 * abs(a):
                break
        return math.pi / (a + b)  # (a+b)/2 is one further AGM step
    a = np.ones_like(m_arr)
    b = np.sqrt(1.0 - m_arr)
    for _ in range(_MAX_AGM_ITER):
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        if np.all(np.abs(a - b) <= 2e-16 * np.abs(a)):
            break
    return np.pi / (a + b)


@dataclass(frozen=True)
class JacobiTriple:
    """sn, cn, dn and the unwound amplitude am at a common argument.

    Satisfies sn^2 + cn^2 = 1, dn^2 + m sn^2 = 1 (standard range), and
    sin(am) = sn, cos(am) = cn in every regime.
    """

    sn: object
    cn: object
    dn: object
    am: object


def _agm_phase(u, m):
    """Descending-Landen phase recursion for 0 < m < 1.

    Returns (phi0, phi1): phi0 is the unwound amplitude, phi1 the phase one
    Landen level up, needed for dn.  u may be an array; m scalar or an array
    broadcastable against u (entries strictly inside (0, 1)).
    """
    u = np.asarray(u, dtype=float)
    m_arr = np.broadcast_to(np.asarray(m, dtype=float), u.shape)
    a = np.ones(u.shape)
    b = np.sqrt(1.0 - m_arr)
    c = np.sqrt(m_arr)
    a_levels = [a]
    c_levels = [c]
    depth = 0
    for _ in range(_MAX_AGM_ITER):
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        a_levels.append(a)
        c_levels.append(c)
        depth += 1
        if np.all(np.abs(c) <= 1e-17 * np.abs(a)):
            break
    phi = (2.0 ** depth) * a_levels[depth] * u
    phi1 = phi
    for n in range(depth, 0, -1):
        if n == 1:
            phi1 = phi
        ratio = np.clip(c_levels[n] / a_levels[n] * np.sin(phi), -1.0, 1.0)
        phi = 0.5 * (phi + np.arcsin(ratio))
    return phi, phi1


def _jacobi_standard(u, m):
    """(sn, cn, dn, am) for 0 < m < 1 via the AGM phase recursion."""
    phi0, phi1 = _agm_phase(u, m)
    sn = np.sin(phi0)
    cn = np.cos(phi0)
    dn_phase = cn / np.cos(phi1 - phi0)
    dn_safe = np.sqrt(1.0 - np.asarray(m, dtype=float) * sn * sn)
    dn = np.where(np.abs(cn) < _DN_GUARD, dn_safe, dn_phase)
    return sn, cn, dn, phi0


def _jacobi_standard_scalar(u: float, m: float):
    """Scalar twin of :func:`_jacobi_standard` on plain floats.

    Same recursion, same constants; exists because adaptive quadrature and
    single-step callers evaluate one point at a time, where ndarray overhead
    dominates the cost.
    """
    a, b, c = 1.0, math.sqrt(1.0 - m), math.sqrt(m)
    a_levels = [a]
    c_levels = [c]
    depth = 0
    for _ in range(_MAX_AGM_ITER):
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_levels.append(a)
        c_levels.append(c)
        depth += 1
        if abs(c) <= 1e-17 * abs(a):
            break
    phi = (2.0 ** depth) * a_levels[depth] * u
    phi1 = phi
    for n in range(depth, 0, -1):
        if n == 1:
            phi1 = phi
        ratio = c_levels[n] / a_levels[n] * math.sin(phi)
        ratio = max(-1.0, min(1.0, ratio))
        phi = 0.5 * (phi + math.asin(ratio))
    sn = math.sin(phi)
    cn = math.cos(phi)
    if abs(cn) < _DN_GUARD:
        dn = math.sqrt(1.0 - m * sn * sn)
    else:
        dn = cn / math.cos(phi1 - phi)
    return sn, cn, dn, phi


def _wound_amplitude(u, sn, cn, k_quarter):
    """Unwind atan2(sn, cn) using the known real quarter period in u.

    am(n K) = n pi/2 exactly and am is monotone, so |am - pi u / (2K)| < pi/2
    strictly; rounding the gap to the nearest full turn therefore recovers the
    winding number without any conditioning loss (atan2 is well conditioned
    everywhere, unlike arcsin near the branch points).
    """
    psi = np.arctan2(sn, cn)
    linear = np.pi * u / (2.0 * k_quarter)
    return psi + 2.0 * np.pi * np.round((linear - psi) / (2.0 * np.pi))


def _jacobi_eval_scalar(u: float, m: float, plan: ReductionPlan) -> JacobiTriple:
    if plan.regime == "zero":
        return JacobiTriple(math.sin(u), math.cos(u), 1.0, u)
    if plan.regime == "one":
        sech = 1.0 / math.cosh(u)
        sn = math.tanh(u)
        return JacobiTriple(sn, sech, sech, math.atan2(sn, sech))
    sn_r, cn_r, dn_r, am_r = _jacobi_standard_scalar(u * plan.arg_scale,
                                                     plan.m_reduced)
    sn, cn, dn = plan.map_back(sn_r, cn_r, dn_r)
    if plan.regime == "standard":
        am = am_r
    elif plan.regime == "negative":
        psi = math.atan2(sn, cn)
        linear = math.pi * u / (2.0 * complete_k(plan.m_original))
        am = psi + 2.0 * math.pi * round((linear - psi) / (2.0 * math.pi))
    else:
        am = math.atan2(sn, cn)
    return JacobiTriple(sn, cn, dn, am)


def jacobi_eval(u, m: float) -> JacobiTriple:
    """Evaluate sn, cn, dn and the unwound amplitude at (u, m).

    Args:
        u: argument, scalar or array (finite).
        m: squared modulus, any finite real (scalar).

    Returns:
        JacobiTriple of floats (scalar u) or arrays (array u).
    """
    plan = reduce_modulus(m)
    if np.ndim(u) == 0 and not isinstance(u, np.ndarray):
        u = float(u)
        if not math.isfinite(u):
            raise ValueError("argument u must be finite")
        return _jacobi_eval_scalar(u, m, plan)

    u_arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u_arr)):
        raise ValueError("argument u must be finite")
    scalar = u_arr.ndim == 0
    if scalar:
        return _jacobi_eval_scalar(float(u_arr), m, plan)

    if plan.regime == "zero":
        sn, cn = np.sin(u_arr), np.cos(u_arr)
        dn = np.ones_like(u_arr)
        am = u_arr.copy()
    elif plan.regime == "one":
        sn = np.tanh(u_arr)
        cn = dn = 1.0 / np.cosh(u_arr)
        am = np.arctan2(sn, cn)  # gudermannian, bounded in (-pi/2, pi/2)
    else:
        sn_r, cn_r, dn_r, am_r = _jacobi_standard(u_arr * plan.arg_scale,
                                                  plan.m_reduced)
        sn, cn, dn = plan.map_back(sn_r, cn_r, dn_r)
        if plan.regime == "standard":
            am = am_r
        elif plan.regime == "negative":
            am = _wound_amplitude(u_arr, sn, cn, complete_k(plan.m_original))
        else:
            # m > 1: |sn| <= 1/sqrt(m) < 1 and cn > 0, the amplitude never winds
            am = np.arctan2(sn, cn)
    return JacobiTriple(sn, cn, dn, am)
