"""Interaction-picture coefficient functions of the magnetized trap.

The reduced dynamics weights the bath noise correlation with four scalar
kernels: F1 and F2 multiply the position-position double commutators, f1 and
f2 the position-momentum (anomalous) ones.  The production evaluator uses
real trigonometric forms; an equivalent complex-exponential transcription is
kept as a test oracle only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import FrequencyPair, ModelParams

#: below this field the complex reference divides by nearly-degenerate modes
DEGENERATE_OMEGA_C = 1e-8


class DegenerateFieldError(ValueError):
    """The complex-form reference is not evaluated at (near-)zero field."""


@dataclass(frozen=True)
class KernelValues:
    """The four kernels at one time (or arrays of times).

    Bounds: |F1| <= 1, |F2| <= 1, |f1| <= 2/(m(a+b)), |f2| <= 2/(m(a+b)).
    """

    F1: object
    F2: object
    f1: object
    f2: object

    def as_dict(self):
        return {"F1": self.F1, "F2": self.F2, "f1": self.f1, "f2": self.f2}


def eval_kernels(freqs: FrequencyPair, m: float, tau) -> KernelValues:
    """Real-form kernels at time(s) tau >= 0.

    With s = a + b:

        F1 = (b cos(a tau) + a cos(b tau)) / s
        F2 = (b sin(a tau) - a sin(b tau)) / s
        f1 = (sin(a tau) + sin(b tau)) / (m s)
        f2 = (cos(b tau) - cos(a tau)) / (m s)

    These rewrite the complex-exponential forms exactly (the two circular
    modes rotate at the real frequencies a and b) and stay finite at zero
    field where a = b.
    """
    tau = np.asarray(tau, dtype=np.float64)
    if (tau < 0).any():
        raise ValueError("tau must be >= 0")
    a, b = freqs.a, freqs.b
    s = a + b
    ca, cb = np.cos(a * tau), np.cos(b * tau)
    sa, sb = np.sin(a * tau), np.sin(b * tau)
    F1 = (b * ca + a * cb) / s
    F2 = (b * sa - a * sb) / s
    f1 = (sa + sb) / (m * s)
    f2 = (cb - ca) / (m * s)
    if tau.ndim == 0:
        return KernelValues(float(F1), float(F2), float(f1), float(f2))
    return KernelValues(F1, F2, f1, f2)


def eval_kernels_complex_reference(params: ModelParams, tau) -> KernelValues:
    """Complex-hyperbolic transcription of the kernels (test oracle).

    Evaluates the kernels from the complex mode parameters
    A = sqrt(-2 w0^2 - wc^2 - wc s)/sqrt(2), B = sqrt(... + wc s)/sqrt(2)
    (purely imaginary square roots of negative reals) with cosh/sinh, and
    asserts the imaginary residues stay below 1e-12 before dropping them.
    Not valid at (near-)zero field, where the A*B denominators degenerate;
    use :func:`eval_kernels` there.
    """
    omega0, omega_c, m = params.omega0, params.omega_c, params.m
    if omega_c < DEGENERATE_OMEGA_C:
        raise DegenerateFieldError(
            f"complex reference needs omega_c >= {DEGENERATE_OMEGA_C} (got {omega_c}); "
            "the real-form evaluator handles zero field"
        )
    tau = np.asarray(tau, dtype=np.float64)
    if (tau < 0).any():
        raise ValueError("tau must be >= 0")
    s = math.sqrt(4.0 * omega0**2 + omega_c**2)
    A = np.sqrt(complex(-2.0 * omega0**2 - omega_c**2 - omega_c * s, 0.0)) / math.sqrt(2.0)
    B = np.sqrt(complex(-2.0 * omega0**2 - omega_c**2 + omega_c * s, 0.0)) / math.sqrt(2.0)
    chA, chB = np.cosh(A * tau), np.cosh(B * tau)
    shA, shB = np.sinh(A * tau), np.sinh(B * tau)
    F1 = ((-omega_c + s) * chA + (omega_c + s) * chB) / (2.0 * s)
    F2 = omega0**2 * (B * shA - A * shB) / (A * B * s)
    f1 = ((omega_c + s) * B * shA + (-omega_c + s) * A * shB) / (2.0 * A * B * m * s)
    f2 = (-chA + chB) / (m * s)
    for name, value in (("F1", F1), ("F2", F2), ("f1", f1), ("f2", f2)):
        residue = float(np.max(np.abs(np.imag(value))))
        if residue > 1e-12:
            raise FloatingPointError(f"imaginary residue {residue:g} in {name} exceeds 1e-12")
    if tau.ndim == 0:
        return KernelValues(float(F1.real), float(F2.real), float(f1.real), float(f2.real))
    return KernelValues(F1.real.copy(), F2.real.copy(), f1.real.copy(), f2.real.copy())
