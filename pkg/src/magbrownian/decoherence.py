"""Decoherence factors and the off-diagonal density-matrix decay.

The four factors are time integrals of the noise kernel against the
interaction-picture kernels,

    D1(t)     = int_0^t nu(tau) F1(tau) dtau      (likewise D2 with F2)
    Danom1(t) = int_0^t nu(tau) f1(tau) dtau      (likewise Danom2 with f2)

and the cumulative exponent is

    D_total(t) = (dx^2 + dy^2) * int_0^t D1(t') dt',
    rho/rho0   = exp(-D_total).

Only D1 enters D_total: the x/y cross terms cancel exactly and the
anomalous terms are subdominant; D2 and the anomalous factors are kept as
diagnostics so that subdominance is checkable rather than assumed.

Two factor evaluation strategies exist.  The production path swaps the
integration order and integrates W(om) against the closed-form time overlap
(one adaptive quadrature per factor and time).  The tau-grid path integrates
a tabulated nu against the kernels by the trapezoid rule and serves as the
independent cross-check (and handles user-supplied kernel tables).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._backend import KIND_CODES, kernel_overlap_values
from .bath import DEFAULT_NU_TOL, KernelTable, _smooth_weight, build_kernel_table
from .kernels import eval_kernels
from .model import CouplingMode, FrequencyPair, ModelParams, derive_frequencies
from .quadrature import DEFAULT_SPEC, QuadratureBudgetError, QuadratureSpec, integrate_generic

__all__ = [
    "DecoherenceSeries",
    "decoherence_factor_tau_grid",
    "decoherence_factor_omega_analytic",
    "cumulative_exponent",
    "rho_ratio_series",
    "final_exponent",
    "assemble_exponent",
]

FACTOR_KINDS = ("F1", "F2", "f1", "f2")

#: default relative tolerance of the omega-analytic factor quadrature
DEFAULT_FACTOR_TOL = 1e-6

#: panels of the omega-analytic integral span at most one oscillation period
_PERIODS_PER_PANEL = 1.0


def _quad_spec(tol, abs_floor, max_panels):
    return QuadratureSpec(rel_tol=tol, abs_floor=abs_floor, max_panels=max_panels)


def _nu_spec(abs_floor, max_panels):
    """Table quadrature keeps the tight noise-kernel tolerance."""
    return QuadratureSpec(rel_tol=DEFAULT_NU_TOL, abs_floor=abs_floor, max_panels=max_panels)


@dataclass(frozen=True)
class DecoherenceSeries:
    """Factor series on a uniform time grid plus the assembled decay."""

    t_grid: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    Danom1: np.ndarray
    Danom2: np.ndarray
    D_total: np.ndarray
    rho_ratio: np.ndarray
    strategy: str = "omega_analytic"

    def __post_init__(self):
        for name in ("t_grid", "D1", "D2", "Danom1", "Danom2", "D_total", "rho_ratio"):
            getattr(self, name).setflags(write=False)


def _kernel_series(freqs: FrequencyPair, m: float, kind: str, tau):
    values = eval_kernels(freqs, m, tau)
    return getattr(values, kind)


def _kernel_derivative(freqs: FrequencyPair, m: float, kind: str, tau):
    a, b = freqs.a, freqs.b
    s = a + b
    if kind == "F1":
        return -a * b * (np.sin(a * tau) + np.sin(b * tau)) / s
    if kind == "F2":
        return a * b * (np.cos(a * tau) - np.cos(b * tau)) / s
    if kind == "f1":
        return (a * np.cos(a * tau) + b * np.cos(b * tau)) / (m * s)
    return (a * np.sin(a * tau) - b * np.sin(b * tau)) / (m * s)


def _check_kind(kind: str):
    if kind not in KIND_CODES:
        raise ValueError(f"kind must be one of {FACTOR_KINDS}, got {kind!r}")


def _cumtrapz(y, x):
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x), out=out[1:])
    return out


def _tau_grid_lookup(table: KernelTable, freqs: FrequencyPair, m: float, kind: str, t_values):
    """Trapezoid of nu*kernel on the table grid up to each t.

    The trapezoid sums carry the Euler-Maclaurin endpoint correction
    (h^2/12)(f'(0) - f'(tau_k)) built from the tabulated nu' and the
    analytic kernel derivative; without it the plain rule cannot reach the
    cross-strategy tolerance for the small F2-type factor.  For t between
    grid points the final partial step uses the linearly interpolated nu
    and the exactly evaluated kernel at t.
    """
    grid = table.tau_grid
    kernel = _kernel_series(freqs, m, kind, grid)
    y = table.nu_values * kernel
    cum = _cumtrapz(y, grid)
    if len(grid) > 1:
        fprime = table.nu_prime_values * kernel + table.nu_values * _kernel_derivative(
            freqs, m, kind, grid)
        h2_12 = table.h_tau * table.h_tau / 12.0
        cum = cum + h2_12 * (fprime[0] - fprime)
        cum[0] = 0.0
    t_values = np.asarray(t_values, dtype=np.float64)
    scalar = t_values.ndim == 0
    ts = np.atleast_1d(t_values)
    if (ts < 0).any():
        raise ValueError("t must be >= 0")
    if (ts > table.t_max * (1.0 + 1e-12) + 1e-300).any():
        raise ValueError(f"t beyond the tabulated range [0, {table.t_max}]")
    idx = np.clip(np.searchsorted(grid, ts, side="right") - 1, 0, len(grid) - 1)
    out = cum[idx].copy()
    rest = ts - grid[idx]
    partial = rest > 0
    if partial.any():
        i = idx[partial]
        tp = ts[partial]
        nu_t = table.nu_values[i] + (table.nu_values[i + 1] - table.nu_values[i]) * (
            (tp - grid[i]) / (grid[i + 1] - grid[i])
        )
        y_t = nu_t * _kernel_series(freqs, m, kind, tp)
        out[partial] += 0.5 * (y[i] + y_t) * rest[partial]
    return float(out[0]) if scalar else out


def decoherence_factor_tau_grid(table: KernelTable, freqs: FrequencyPair, m: float,
                                kind: str, t: float) -> float:
    """Factor at time t from the tabulated noise kernel (oracle strategy)."""
    _check_kind(kind)
    return _tau_grid_lookup(table, freqs, m, kind, float(t))


def _omega_analytic_factor(params: ModelParams, freqs: FrequencyPair, kind_code: int,
                           t: float, spec: QuadratureSpec) -> float:
    if t == 0.0:
        return 0.0
    W = _smooth_weight(params)
    a, b, m = freqs.a, freqs.b, params.m

    def integrand(om):
        return W(om) * kernel_overlap_values(om, a, b, m, t, kind_code)

    cap = min(params.Lambda / 16.0, _PERIODS_PER_PANEL * 2.0 * math.pi / t)
    value, _ = integrate_generic(integrand, (0.0, params.Lambda), spec, max_panel_width=cap)
    return value


def decoherence_factor_omega_analytic(params: ModelParams, kind: str, t: float,
                                      tol: float = DEFAULT_FACTOR_TOL,
                                      abs_floor: float = DEFAULT_SPEC.abs_floor,
                                      max_panels: int = DEFAULT_SPEC.max_panels) -> float:
    """Factor at time t via the order-swapped frequency integral.

    Evaluates int_0^Lambda W(om) G_kind(om, t) dom, where G_kind is the
    closed-form value of int_0^t cos(om tau) kernel(tau) dtau; removable
    singularities at om = a, b are handled in series form.
    """
    _check_kind(kind)
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if params.gamma == 0.0:
        return 0.0
    freqs = derive_frequencies(params)
    spec = _quad_spec(tol, abs_floor, max_panels)
    return _omega_analytic_factor(params, freqs, KIND_CODES[kind], float(t), spec)


def _validate_t_grid(t_grid):
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.ndim != 1 or len(t_grid) < 1:
        raise ValueError("t_grid must be a nonempty 1-d array")
    if t_grid[0] != 0.0:
        raise ValueError("t_grid must start at 0")
    if len(t_grid) > 1:
        steps = np.diff(t_grid)
        if (steps <= 0).any() or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ValueError("t_grid must be uniform and increasing")
    return t_grid


def _factor_series(params: ModelParams, freqs: FrequencyPair, kind: str, t_grid,
                   strategy: str, spec: QuadratureSpec, table: KernelTable | None):
    if strategy == "tau_grid":
        return np.asarray(_tau_grid_lookup(table, freqs, params.m, kind, t_grid))
    if params.gamma == 0.0:
        return np.zeros_like(t_grid)
    code = KIND_CODES[kind]
    out = np.empty_like(t_grid)
    for i, t in enumerate(t_grid):
        try:
            out[i] = _omega_analytic_factor(params, freqs, code, float(t), spec)
        except QuadratureBudgetError as exc:
            raise QuadratureBudgetError(
                f"{kind} factor quadrature failed at t={float(t)!r}: {exc}",
                value=exc.value,
                error=exc.error,
            ) from exc
    return out


def assemble_exponent(t_grid, d1_series, dx: float, dy: float):
    """Exponent and density ratio from a D1 series (trapezoid accumulation).

    The assembly uses D1 alone: the cross-term factor D2 cancels exactly in
    the position basis and the anomalous factors are excluded by
    construction, not by tolerance.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    d1_series = np.asarray(d1_series, dtype=np.float64)
    d_total = (dx * dx + dy * dy) * _cumtrapz(d1_series, t_grid)
    return d_total, np.exp(-d_total)


def _ensure_table(params: ModelParams, t_max: float, table: KernelTable | None,
                  align: int, spec: QuadratureSpec):
    if table is None:
        return build_kernel_table(params, t_max, align=max(align, 1), spec=spec)
    if table.t_max < t_max * (1.0 - 1e-12):
        raise ValueError(f"table covers [0, {table.t_max}], need t_max={t_max}")
    return table


def cumulative_exponent(params: ModelParams, t_grid, strategy: str = "omega_analytic",
                        tol: float = DEFAULT_FACTOR_TOL, table: KernelTable | None = None,
                        abs_floor: float = DEFAULT_SPEC.abs_floor,
                        max_panels: int = DEFAULT_SPEC.max_panels) -> DecoherenceSeries:
    """Full decoherence series on a uniform grid starting at 0.

    All four factors are computed and stored; ``D_total`` and ``rho_ratio``
    are assembled from D1 alone via :func:`assemble_exponent`.  For the
    tau-grid strategy a kernel table is built on demand, grid-aligned to the
    output steps.
    """
    t_grid = _validate_t_grid(t_grid)
    if strategy not in ("omega_analytic", "tau_grid"):
        raise ValueError(f"unknown strategy {strategy!r}")
    spec = _quad_spec(tol, abs_floor, max_panels)
    if strategy == "tau_grid":
        table = _ensure_table(params, float(t_grid[-1]), table, len(t_grid) - 1,
                              _nu_spec(abs_floor, max_panels))
    freqs = derive_frequencies(params)
    series = {kind: _factor_series(params, freqs, kind, t_grid, strategy, spec, table)
              for kind in FACTOR_KINDS}
    d_total, rho = assemble_exponent(t_grid, series["F1"], params.dx, params.dy)
    return DecoherenceSeries(
        t_grid=t_grid.copy(),
        D1=series["F1"], D2=series["F2"],
        Danom1=series["f1"], Danom2=series["f2"],
        D_total=d_total, rho_ratio=rho,
        strategy=strategy,
    )


def rho_ratio_series(params: ModelParams, mode: CouplingMode, t_grid,
                     strategy: str = "omega_analytic", tol: float = DEFAULT_FACTOR_TOL,
                     table: KernelTable | None = None, **quad_kwargs) -> DecoherenceSeries:
    """Decoherence series with the mode's (d, g, K) preset applied."""
    return cumulative_exponent(params.with_mode(mode), t_grid, strategy, tol, table,
                               **quad_kwargs)


def final_exponent(params: ModelParams, t_grid, strategy: str = "omega_analytic",
                   tol: float = DEFAULT_FACTOR_TOL, table: KernelTable | None = None,
                   abs_floor: float = DEFAULT_SPEC.abs_floor,
                   max_panels: int = DEFAULT_SPEC.max_panels) -> float:
    """D_total at the end of the grid, via the same path as the full series."""
    t_grid = _validate_t_grid(t_grid)
    spec = _quad_spec(tol, abs_floor, max_panels)
    if strategy == "tau_grid":
        table = _ensure_table(params, float(t_grid[-1]), table, len(t_grid) - 1,
                              _nu_spec(abs_floor, max_panels))
    freqs = derive_frequencies(params)
    d1 = _factor_series(params, freqs, "F1", t_grid, strategy, spec, table)
    d_total, _ = assemble_exponent(t_grid, d1, params.dx, params.dy)
    return float(d_total[-1])


def sweep_final_exponent(params: ModelParams, param_name: str, values, t_grid,
                         strategy: str = "omega_analytic", tol: float = DEFAULT_FACTOR_TOL,
                         **quad_kwargs):
    """D_total(t_max) for each value of one swept parameter, in input order."""
    results = []
    for value in values:
        swept = replace(params, **{param_name: float(value)})
        results.append(final_exponent(swept, t_grid, strategy, tol, **quad_kwargs))
    return results
