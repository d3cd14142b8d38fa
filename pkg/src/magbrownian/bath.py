"""Ohmic bath spectral quantities: noise weight, noise kernel, discrete oracle.

The continuum noise kernel is

    nu(tau) = int_0^Lambda W(om) cos(om tau) dom,
    W(om)   = J(om) om^2 P / (m omega0^2 + m_b om^2 + K) coth(om/Omega),

with Ohmic spectral density J(om) = gamma om cut off abruptly at Lambda and
coupling prefactor P = g m_r + d m_b (equal-coupling shorthand: m_r + m_b at
d = g = 1).  The cutoff is handled by integrating exactly on [0, Lambda];
the weight itself is smooth there, so the Filon rule sees no jump.

A finite bath of N oscillators provides Riemann-sum oracles for nu and the
memory kernels; it is test machinery, not a production path.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import noise_weight_values
from .model import FrequencyPair, ModelParams, ParameterError
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureBudgetError,
    QuadratureSpec,
    integrate_cosine_weighted,
    integrate_sine_weighted,
)

__all__ = [
    "SpectralDensity",
    "DiscreteBath",
    "KernelTable",
    "noise_weight",
    "nu_of_tau",
    "nu_prime_of_tau",
    "build_kernel_table",
    "discrete_memory_kernels",
    "discrete_nu_oracle",
]

#: default noise-kernel quadrature tolerance (relative)
DEFAULT_NU_TOL = 1e-8

#: tau-grid density rule: at least this many points per fastest half period
_GRID_POINTS_PER_HALF_PERIOD = 10


@dataclass(frozen=True)
class SpectralDensity:
    """Ohmic spectral density with abrupt cutoff: J = gamma*om below Lambda."""

    gamma: float
    Lambda: float
    shape: str = "ohmic"

    def __post_init__(self):
        if self.gamma < 0:
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")
        if self.Lambda <= 0:
            raise ParameterError(f"Lambda must be > 0, got {self.Lambda}")
        if self.shape != "ohmic":
            raise ParameterError(f"unsupported spectral shape {self.shape!r} (only 'ohmic')")

    def J(self, omega):
        om = np.asarray(omega, dtype=np.float64)
        vals = np.where((om >= 0) & (om < self.Lambda), self.gamma * om, 0.0)
        return float(vals) if om.ndim == 0 else vals


def noise_weight(params: ModelParams, omega):
    """Noise-kernel integrand weight W(om); zero at om = 0 and above cutoff."""
    om = np.asarray(omega, dtype=np.float64)
    if (om < 0).any():
        raise ValueError("omega must be >= 0")
    vals = noise_weight_values(
        np.atleast_1d(om),
        gamma=params.gamma,
        m=params.m,
        omega0=params.omega0,
        K=params.K,
        m_b=params.m_b,
        Omega=params.Omega,
        prefactor=params.coupling_prefactor,
        Lambda=params.Lambda,
    )
    return float(vals[0]) if om.ndim == 0 else vals.reshape(om.shape)


def _smooth_weight(params: ModelParams):
    """Vectorized W without the cutoff step (quadrature limits handle it)."""

    def W(om):
        return noise_weight_values(
            om,
            gamma=params.gamma,
            m=params.m,
            omega0=params.omega0,
            K=params.K,
            m_b=params.m_b,
            Omega=params.Omega,
            prefactor=params.coupling_prefactor,
            Lambda=None,
        )

    return W


def nu_of_tau(params: ModelParams, tau: float, tol: float = DEFAULT_NU_TOL,
              spec: QuadratureSpec | None = None) -> float:
    """Noise kernel nu(tau) to relative accuracy ``tol``.

    gamma = 0 short-circuits to 0 (the bath is switched off).  Raises
    :class:`QuadratureBudgetError` if the panel budget is exhausted.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if not 0.0 < tol <= 1e-2:
        raise ValueError(f"tol must be in (0, 1e-2], got {tol}")
    if params.gamma == 0.0:
        return 0.0
    if spec is None:
        spec = QuadratureSpec(rel_tol=tol, abs_floor=DEFAULT_SPEC.abs_floor,
                              max_panels=DEFAULT_SPEC.max_panels)
    value, _ = integrate_cosine_weighted(_smooth_weight(params), params.Lambda, tau, spec)
    return value


def nu_prime_of_tau(params: ModelParams, tau: float, tol: float = DEFAULT_NU_TOL,
                    spec: QuadratureSpec | None = None) -> float:
    """Time derivative of the noise kernel, -int_0^Lambda om W(om) sin(om tau) dom.

    Tabulated alongside nu so tau-grid consumers can apply endpoint
    corrections to the trapezoid rule; exactly zero at tau = 0.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if not 0.0 < tol <= 1e-2:
        raise ValueError(f"tol must be in (0, 1e-2], got {tol}")
    if params.gamma == 0.0 or tau == 0.0:
        return 0.0
    if spec is None:
        spec = QuadratureSpec(rel_tol=tol, abs_floor=DEFAULT_SPEC.abs_floor,
                              max_panels=DEFAULT_SPEC.max_panels)
    W = _smooth_weight(params)

    def weight(om):
        return om * W(om)

    value, _ = integrate_sine_weighted(weight, params.Lambda, tau, spec)
    return -value


@dataclass(frozen=True)
class KernelTable:
    """nu (and nu') tabulated on a uniform closed grid [0, t_max]; immutable."""

    tau_grid: np.ndarray
    nu_values: np.ndarray
    nu_prime_values: np.ndarray
    t_max: float
    h_tau: float
    tol: float
    params: ModelParams
    params_digest: str = field(default="", compare=False)

    def __post_init__(self):
        self.tau_grid.setflags(write=False)
        self.nu_values.setflags(write=False)
        self.nu_prime_values.setflags(write=False)
        if not self.params_digest:
            digest = hashlib.sha256(repr(self.params).encode()).hexdigest()[:16]
            object.__setattr__(self, "params_digest", digest)

    def __len__(self):
        return len(self.tau_grid)


def max_grid_step(params: ModelParams) -> float:
    """Largest admissible tau step: pi / (10 max(a, Lambda))."""
    fast = FrequencyPair.from_trap(params.omega0, params.omega_c).a
    return math.pi / (_GRID_POINTS_PER_HALF_PERIOD * max(fast, params.Lambda))


def build_kernel_table(params: ModelParams, t_max: float, tol: float = DEFAULT_NU_TOL,
                       spec: QuadratureSpec | None = None, align: int = 1000) -> KernelTable:
    """Tabulate nu and nu' on [0, t_max] with the default grid-step rule.

    The point count is rounded up to a multiple of ``align`` so that output
    grids with ``align`` steps fall exactly on table nodes (default 1000
    matches the standard 1001-point series grid).  Every nu entry is exactly
    a fresh :func:`nu_of_tau` call, so rebuilding a table reproduces it
    bitwise.  Quadrature failures are re-raised with the offending tau.
    """
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    if align < 1:
        raise ValueError(f"align must be >= 1, got {align}")
    if t_max == 0.0:
        grid = np.zeros(1)
        h = 0.0
    else:
        h_cap = max_grid_step(params)
        n = int(math.ceil(t_max / h_cap))
        n = align * int(math.ceil(n / align))
        grid = np.linspace(0.0, t_max, n + 1)
        h = t_max / n
    values = np.empty_like(grid)
    derivs = np.empty_like(grid)
    for i, tau in enumerate(grid):
        try:
            values[i] = nu_of_tau(params, float(tau), tol, spec)
            derivs[i] = nu_prime_of_tau(params, float(tau), tol, spec)
        except QuadratureBudgetError as exc:
            raise QuadratureBudgetError(
                f"noise-kernel tabulation failed at tau={float(tau)!r}: {exc}",
                value=exc.value,
                error=exc.error,
            ) from exc
    return KernelTable(tau_grid=grid, nu_values=values, nu_prime_values=derivs,
                       t_max=float(t_max), h_tau=h, tol=tol, params=params)


@dataclass(frozen=True)
class DiscreteBath:
    """Explicit N-oscillator bath for oracle computations.

    ``Gamma`` scales the off-diagonal memory kernel; it never enters the
    decoherence results and defaults to 0 (charge and light-speed factors
    are set to 1 in these units).
    """

    omegas: np.ndarray
    m_b: float
    d: float = 1.0
    g: float = 1.0
    Gamma: float = 0.0

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=np.float64)
        object.__setattr__(self, "omegas", omegas)
        omegas.setflags(write=False)
        if omegas.ndim != 1 or len(omegas) < 1:
            raise ParameterError("bath needs a 1-d, nonempty frequency list")
        if (omegas <= 0).any() or (np.diff(omegas) <= 0).any():
            raise ParameterError("bath frequencies must be positive and strictly increasing")
        if self.m_b <= 0:
            raise ParameterError(f"m_b must be > 0, got {self.m_b}")

    @property
    def N(self) -> int:
        return len(self.omegas)

    @classmethod
    def uniform(cls, N: int, Lambda: float, **kwargs) -> "DiscreteBath":
        """Midpoint-uniform frequencies on (0, Lambda), density-of-states
        weights equal to the spacing."""
        if N < 1:
            raise ParameterError(f"N must be >= 1, got {N}")
        spacing = Lambda / N
        omegas = (np.arange(N, dtype=np.float64) + 0.5) * spacing
        return cls(omegas=omegas, **kwargs)

    def spring_sum(self) -> float:
        """Weighted spring-constant sum K_j = g sum_l m_b w_l^2 d^2
        (j-independent for equal couplings)."""
        return float(self.g * np.sum(self.m_b * self.omegas**2 * self.d**2))


def discrete_memory_kernels(bath: DiscreteBath, params: ModelParams, t: float):
    """Diagonal and off-diagonal memory kernels (mu_d, mu_od) at time t >= 0."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    w = bath.omegas
    d, g, m_b = bath.d, bath.g, bath.m_b
    K_j = bath.spring_sum()
    mu_d = float(np.sum(
        (g * params.m_r + d * m_b)
        * (g * params.m * params.omega0**2 + d * m_b * w**2 + K_j) / m_b
        * np.cos(w * t)
    ))
    # charge stand-in e and light speed c are 1 in these units
    mu_od = float(np.sum(
        -g * bath.Gamma * (g * params.m_r * w**2 + d * m_b * w**2) / (params.m * w)
        * np.sin(w * t)
    ))
    return mu_d, mu_od


def discrete_nu_oracle(bath: DiscreteBath, params: ModelParams, tau: float) -> float:
    """Riemann-sum realization of nu(tau) over a uniform discrete bath.

    Density of states is encoded as the frequency spacing, so the sum is the
    midpoint approximation of the continuum integral and converges to
    :func:`nu_of_tau` as N grows.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    w = bath.omegas
    spacings = np.diff(w)
    if len(w) > 1 and not np.allclose(spacings, spacings[0], rtol=1e-9, atol=0.0):
        raise ParameterError("oracle bath must be uniformly spaced")
    if w[-1] >= params.Lambda:
        raise ParameterError("oracle bath frequencies must lie inside (0, Lambda)")
    spacing = spacings[0] if len(w) > 1 else params.Lambda
    weights = noise_weight(params, w)
    return float(np.sum(weights * np.cos(w * tau)) * spacing)
