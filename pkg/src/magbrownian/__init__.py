"""Decoherence dynamics of a magnetized Brownian oscillator in an Ohmic bath.

A charged particle in a two-dimensional harmonic trap and a perpendicular
magnetic field exchanges noise with an Ohmic heat bath through both its
position and its momentum.  This package evaluates the resulting noise
kernel, the interaction-picture coefficient functions, and the decay of the
off-diagonal reduced-density-matrix elements, with a compiled fast path for
the oscillatory quadrature core and a pure-numpy fallback.
"""

from ._backend import available_backends, get_backend, set_backend
from .bath import (
    DiscreteBath,
    KernelTable,
    SpectralDensity,
    build_kernel_table,
    discrete_memory_kernels,
    discrete_nu_oracle,
    noise_weight,
    nu_of_tau,
    nu_prime_of_tau,
)
from .decoherence import (
    DecoherenceSeries,
    assemble_exponent,
    cumulative_exponent,
    decoherence_factor_omega_analytic,
    decoherence_factor_tau_grid,
    final_exponent,
    rho_ratio_series,
    sweep_final_exponent,
)
from .kernels import (
    DegenerateFieldError,
    KernelValues,
    eval_kernels,
    eval_kernels_complex_reference,
)
from .model import (
    CouplingMode,
    FrequencyPair,
    ModelParams,
    ParameterError,
    derive_frequencies,
    effective_mass_m1,
    renormalized_mass,
)
from .quadrature import (
    QuadratureBudgetError,
    QuadratureSpec,
    integrate_cosine_weighted,
    integrate_generic,
    integrate_sine_weighted,
    riemann_reference,
)

__version__ = "0.1.0"

__all__ = [
    "available_backends", "get_backend", "set_backend",
    "SpectralDensity", "DiscreteBath", "KernelTable",
    "noise_weight", "nu_of_tau", "nu_prime_of_tau", "build_kernel_table",
    "discrete_memory_kernels", "discrete_nu_oracle",
    "DecoherenceSeries", "assemble_exponent", "cumulative_exponent",
    "decoherence_factor_omega_analytic", "decoherence_factor_tau_grid",
    "final_exponent", "rho_ratio_series", "sweep_final_exponent",
    "KernelValues", "DegenerateFieldError",
    "eval_kernels", "eval_kernels_complex_reference",
    "ModelParams", "CouplingMode", "FrequencyPair", "ParameterError",
    "derive_frequencies", "renormalized_mass", "effective_mass_m1",
    "QuadratureSpec", "QuadratureBudgetError",
    "integrate_cosine_weighted", "integrate_sine_weighted", "integrate_generic",
    "riemann_reference",
    "__version__",
]
