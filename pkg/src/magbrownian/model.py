"""Scenario parameters, coupling presets and derived scalar quantities.

Units are dimensionless with hbar = 1; the magnetic field enters only
through the cyclotron frequency ``omega_c``.  Every type validates its
invariants at construction and is immutable afterwards, so values can be
shared freely across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace


class ParameterError(ValueError):
    """A scenario parameter violates its validity constraints."""


class CouplingMode(enum.Enum):
    """Named coupling-channel presets mapping to (d, g, K) triples."""

    POSITION_ONLY = "position"
    MOMENTUM_ONLY = "momentum"
    BOTH = "both"

    def preset(self):
        """The (d, g, K) triple selected by this mode."""
        return _MODE_PRESETS[self]


_MODE_PRESETS = {
    CouplingMode.POSITION_ONLY: (1.0, 0.0, 0.0),
    CouplingMode.MOMENTUM_ONLY: (0.0, 1.0, 1e2),
    CouplingMode.BOTH: (1.0, 1.0, 1e2),
}


@dataclass(frozen=True)
class ModelParams:
    """All physical constants of one scenario.

    Attributes
    ----------
    m : float
        Particle mass.
    omega0 : float
        Harmonic trap frequency.
    omega_c : float
        Cyclotron frequency qB/m.
    gamma : float
        Ohmic damping coefficient.
    Lambda : float
        Bath cutoff frequency (spectral density vanishes abruptly above it).
    Omega : float
        Thermal frequency 2 k_B T / hbar.
    m_b : float
        Common bath-oscillator mass.
    m_r : float
        Renormalized particle mass.  Scenario runs take it as a direct
        input; :func:`renormalized_mass` exists for consistency checks.
    K : float
        Weighted spring-constant sum of the bath.
    d, g : float
        Position- and momentum-coupling strengths (not both zero).
    dx, dy : float
        Density-matrix separations entering the decay exponent.
    """

    m: float = 1.0
    omega0: float = 10.0
    omega_c: float = 1.0
    gamma: float = 1.0
    Lambda: float = 1e3
    Omega: float = 1e3
    m_b: float = 1e-2
    m_r: float = 1e-3
    K: float = 1e2
    d: float = 1.0
    g: float = 1.0
    dx: float = 1.0
    dy: float = 1.0

    def __post_init__(self):
        for name in ("m", "omega0", "Lambda", "Omega", "m_b", "m_r"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be a positive finite number, got {value!r}")
        for name in ("omega_c", "gamma", "K", "d", "g"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
                raise ParameterError(f"{name} must be a nonnegative finite number, got {value!r}")
        for name in ("dx", "dy"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ParameterError(f"{name} must be a finite number, got {value!r}")
        if self.d == 0 and self.g == 0:
            raise ParameterError("couplings d and g cannot both be zero (noise kernel would vanish)")

    def with_mode(self, mode: CouplingMode) -> "ModelParams":
        """Copy of the parameters with the mode's (d, g, K) preset applied."""
        d, g, K = mode.preset()
        return replace(self, d=d, g=g, K=K)

    @property
    def coupling_prefactor(self) -> float:
        """Noise-weight coupling prefactor g*m_r + d*m_b."""
        return self.g * self.m_r + self.d * self.m_b


@dataclass(frozen=True)
class FrequencyPair:
    """Real frequencies (a, b) of the fast and slow circular normal modes.

    They satisfy a - b = omega_c, a + b = sqrt(4 omega0^2 + omega_c^2) and
    a * b = omega0^2; both are positive with a >= b.
    """

    a: float
    b: float

    def __post_init__(self):
        if not (self.a >= self.b > 0):
            raise ParameterError(f"mode frequencies need a >= b > 0, got a={self.a}, b={self.b}")

    @classmethod
    def from_trap(cls, omega0: float, omega_c: float) -> "FrequencyPair":
        """Mode pair of a trap with frequency omega0 in field omega_c."""
        if omega_c < 0:
            raise ParameterError(f"omega_c must be >= 0, got {omega_c}")
        if omega0 <= 0:
            raise ParameterError(f"omega0 must be > 0 (degenerate trap is not modeled), got {omega0}")
        s = math.hypot(2.0 * omega0, omega_c)
        a = math.sqrt(0.5 * (2.0 * omega0 * omega0 + omega_c * omega_c + omega_c * s))
        # b = omega0^2/a equals sqrt((2w0^2+wc^2-wc*s)/2) exactly but has no
        # cancellation for omega_c >> omega0
        b = omega0 * omega0 / a
        return cls(a, b)


def derive_frequencies(params: ModelParams) -> FrequencyPair:
    """Mode frequency pair (a, b) for a scenario."""
    return FrequencyPair.from_trap(params.omega0, params.omega_c)


def renormalized_mass(m: float, g: float, N: int, m_b: float) -> float:
    """Mass renormalized by N momentum-coupled bath oscillators.

    Returns m / (1 + N g^2 m / m_b).  Monotonically decreasing in g and N.
    """
    if m <= 0 or m_b <= 0:
        raise ParameterError("masses must be positive")
    if g < 0:
        raise ParameterError("coupling g must be >= 0")
    if N < 1 or int(N) != N:
        raise ParameterError(f"N must be an integer >= 1, got {N}")
    return m / (1.0 + N * g * g * m / m_b)


def effective_mass_m1(params: ModelParams, bath, K_j=None) -> float:
    """Effective mass multiplying the restoring force, from a discrete bath.

    Sums

        [(g m omega0^2 + d m_b w_j^2 + K_j)/(m_b w_j^2) + d]
            * (g m_r + m_b d) * w_j^2 / omega0^2

    over the bath oscillators and subtracts from m.  ``K_j`` defaults to the
    bath's own weighted spring-constant sum (see DiscreteBath.spring_sum),
    matching the memory-kernel convention; pass a number to override.
    """
    omegas = bath.omegas
    if (omegas <= 0).any():
        raise ParameterError("bath frequencies must all be positive")
    if K_j is None:
        K_j = bath.spring_sum()
    d, g = bath.d, bath.g
    m, m_b, m_r, omega0 = params.m, bath.m_b, params.m_r, params.omega0
    w2 = omegas * omegas
    inner = (g * m * omega0**2 + d * m_b * w2 + K_j) / (m_b * w2) + d
    total = float((inner * (g * m_r + m_b * d) * w2 / omega0**2).sum())
    return m - total
