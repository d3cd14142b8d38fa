"""Pure-numpy implementations of the hot numerical kernels.

The compiled extension (``_fastkern``) mirrors every function here; the
active implementation is selected in :mod:`magbrownian._backend`.  All
functions are stateless, operate on 1-d float64 arrays and are deterministic
(fixed evaluation order, no RNG).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "pure"

# coth(x) branch points: series below, exactly 1 above.
COTH_SERIES_CUT = 1e-6
COTH_ONE_CUT = 20.0

# Filon weights switch to the Taylor branch below this theta = h*tau.
_FILON_THETA_CUT = 0.33

# sin(x t)/x and (1 - cos(x t))/x switch to series below this |x t|.
_OVERLAP_U_CUT = 1e-3

KIND_CODES = {"F1": 0, "F2": 1, "f1": 2, "f2": 3}


def coth_values(x):
    """Guarded coth on a nonnegative array: 1/x + x/3 below 1e-6, 1 above 20."""
    x = np.asarray(x, dtype=np.float64)
    out = np.ones_like(x)
    small = x < COTH_SERIES_CUT
    mid = ~small & (x <= COTH_ONE_CUT)
    xs = x[small]
    with np.errstate(divide="ignore"):
        out[small] = 1.0 / xs + xs / 3.0
    xm = x[mid]
    out[mid] = 1.0 + 2.0 / np.expm1(2.0 * xm)
    return out


def noise_weight_values(omega, gamma, m, omega0, K, m_b, Omega, prefactor, Lambda=None):
    """Bath noise weight W on an array of frequencies.

    W = gamma*om^3 * prefactor / (m*omega0^2 + m_b*om^2 + K) * coth(om/Omega),
    with W(om <= 0) = 0 (the coth pole is cancelled by the om^3 factor).
    When ``Lambda`` is given the abrupt cutoff W(om >= Lambda) = 0 is applied;
    quadrature callers pass None and restrict the integration range instead.
    """
    om = np.asarray(omega, dtype=np.float64)
    out = np.zeros(om.shape, dtype=np.float64)
    live = om > 0.0
    if Lambda is not None:
        live &= om < Lambda
    o = om[live]
    den = m * omega0 * omega0 + m_b * o * o + K
    out[live] = gamma * o * o * o * prefactor / den * coth_values(o / Omega)
    return out


def filon_weights(theta):
    """Filon cosine-rule weights (alpha, beta, gamma) for theta = h*tau."""
    if theta >= _FILON_THETA_CUT:
        s = math.sin(theta)
        c = math.cos(theta)
        t2 = theta * theta
        it3 = 1.0 / (t2 * theta)
        al = (t2 + theta * s * c - 2.0 * s * s) * it3
        be = 2.0 * (theta * (1.0 + c * c) - 2.0 * s * c) * it3
        ga = 4.0 * (s - theta * c) * it3
    else:
        # closed form cancels badly as theta -> 0; Taylor branch
        t2 = theta * theta
        al = theta * t2 * (
            2.0 / 45.0
            + t2 * (-2.0 / 315.0 + t2 * (2.0 / 4725.0 + t2 * (-8.0 / 467775.0 + t2 * (4.0 / 8513505.0))))
        )
        be = 2.0 / 3.0 + t2 * (
            2.0 / 15.0
            + t2 * (-4.0 / 105.0 + t2 * (2.0 / 567.0 + t2 * (-4.0 / 22275.0 + t2 * (4.0 / 675675.0))))
        )
        ga = 4.0 / 3.0 + t2 * (
            -2.0 / 15.0
            + t2 * (1.0 / 210.0 + t2 * (-1.0 / 11340.0 + t2 * (1.0 / 997920.0 - t2 / 129729600.0)))
        )
    return al, be, ga


def filon_cos_pass(fvals, h, tau):
    """Composite Filon cosine integral over the uniform grid x_i = i*h.

    ``fvals`` must have odd length 2n+1; the return value approximates
    int_0^{2n h} f(x) cos(tau x) dx with the cosine moments of the per-panel
    quadratic interpolant integrated exactly (panels span two grid steps).
    """
    fvals = np.asarray(fvals, dtype=np.float64)
    npts = fvals.shape[0]
    if npts < 3 or npts % 2 == 0:
        raise ValueError("filon_cos_pass needs an odd number of points >= 3")
    theta = h * tau
    al, be, ga = filon_weights(theta)
    if tau == 0.0:
        ce = float(np.sum(fvals[0::2])) - 0.5 * (fvals[0] + fvals[-1])
        co = float(np.sum(fvals[1::2]))
        return h * (be * ce + ga * co)
    x = np.arange(npts, dtype=np.float64) * h
    c = np.cos(tau * x)
    ce = float(fvals[0::2] @ c[0::2]) - 0.5 * (fvals[0] * c[0] + fvals[-1] * c[-1])
    co = float(fvals[1::2] @ c[1::2])
    bnd = al * fvals[-1] * math.sin(tau * x[-1])  # sin(0) term at x_0 = 0 vanishes
    return h * (bnd + be * ce + ga * co)


def filon_sin_pass(fvals, h, tau):
    """Composite Filon sine integral over the uniform grid x_i = i*h.

    Same panel structure as :func:`filon_cos_pass`, with the sine moments
    of the quadratic interpolant integrated exactly.
    """
    fvals = np.asarray(fvals, dtype=np.float64)
    npts = fvals.shape[0]
    if npts < 3 or npts % 2 == 0:
        raise ValueError("filon_sin_pass needs an odd number of points >= 3")
    if tau == 0.0:
        return 0.0
    theta = h * tau
    al, be, ga = filon_weights(theta)
    x = np.arange(npts, dtype=np.float64) * h
    s = np.sin(tau * x)
    se = float(fvals[0::2] @ s[0::2]) - 0.5 * (fvals[0] * s[0] + fvals[-1] * s[-1])
    so = float(fvals[1::2] @ s[1::2])
    bnd = al * (fvals[0] - fvals[-1] * math.cos(tau * x[-1]))  # cos(0) = 1 at x_0
    return h * (bnd + be * se + ga * so)


def _sin_over(x, t, sin_xt):
    """sin(x t)/x with a series patch where x t ~ 0 (even in x)."""
    u = x * t
    small = np.abs(u) < _OVERLAP_U_CUT
    safe = np.where(small, 1.0, x)
    out = sin_xt / safe
    us = u[small]
    u2 = us * us
    out[small] = t * (1.0 - u2 / 6.0 * (1.0 - u2 / 20.0))
    return out


def _vers_over(x, t, cos_xt):
    """(1 - cos(x t))/x with a series patch where x t ~ 0 (odd in x)."""
    u = x * t
    small = np.abs(u) < _OVERLAP_U_CUT
    safe = np.where(small, 1.0, x)
    out = (1.0 - cos_xt) / safe
    us = u[small]
    u2 = us * us
    out[small] = 0.5 * t * us * (1.0 - u2 / 12.0 * (1.0 - u2 / 30.0))
    return out


def kernel_overlap_values(omega, a, b, m, t, kind):
    """Closed-form time integral int_0^t cos(om tau) * kernel(tau) dtau.

    ``kind`` is the code from KIND_CODES.  The shifted-frequency sines and
    cosines are built from sin/cos(om t) by angle addition, so each array
    element costs two trig evaluations; removable singularities at
    om = a, b are handled by the series patches of the helpers.
    """
    om = np.asarray(omega, dtype=np.float64)
    st = np.sin(om * t)
    ct = np.cos(om * t)
    sat, cat = math.sin(a * t), math.cos(a * t)
    sbt, cbt = math.sin(b * t), math.cos(b * t)
    s = a + b
    if kind in (0, 3):
        # int cos(om tau) cos(k tau) = (S(om+k) + S(om-k))/2, S(x) = sin(x t)/x
        ca = 0.5 * (_sin_over(om + a, t, st * cat + ct * sat) + _sin_over(om - a, t, st * cat - ct * sat))
        cb = 0.5 * (_sin_over(om + b, t, st * cbt + ct * sbt) + _sin_over(om - b, t, st * cbt - ct * sbt))
        if kind == 0:
            return (b * ca + a * cb) / s
        return (cb - ca) / (m * s)
    # int cos(om tau) sin(k tau) = (V(k+om) + V(k-om))/2, V(x) = (1-cos(x t))/x
    va = 0.5 * (_vers_over(a + om, t, ct * cat - st * sat) + _vers_over(a - om, t, ct * cat + st * sat))
    vb = 0.5 * (_vers_over(b + om, t, ct * cbt - st * sbt) + _vers_over(b - om, t, ct * cbt + st * sbt))
    if kind == 1:
        return (b * va - a * vb) / s
    return (va + vb) / (m * s)
