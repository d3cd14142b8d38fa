import dataclasses

import numpy as np
import pytest

import magbrownian as mb
from magbrownian.decoherence import _kernel_derivative


def q_overlap(om, a, b, t):
    """Oracle: int_0^t (t - tau) cos(om tau) F1(tau) dtau, nonnegative."""
    def u(x):
        small = np.abs(x * t) < 1e-6
        safe = np.where(small, 1.0, x)
        return np.where(small, t * t / 2.0, (1.0 - np.cos(x * t)) / (safe * safe))
    return (b * (u(om - a) + u(om + a)) + a * (u(om - b) + u(om + b))) / (2.0 * (a + b))


def exponent_oracle(params, t):
    """Independent route to D_total(t): single frequency integral of W * Q.

    Swapping both time integrals inside the frequency integral turns the
    double time integration into the closed-form overlap above; a dense
    midpoint rule then avoids this package's adaptive integrators entirely.
    """
    freqs = mb.derive_frequencies(params)
    a, b = freqs.a, freqs.b
    f = lambda om: mb.noise_weight(params, om) * q_overlap(om, a, b, t)
    value = mb.riemann_reference(f, (0.0, params.Lambda), 2_000_000)
    return (params.dx**2 + params.dy**2) * value


class TestFactorTauGrid:
    def test_zero_time(self, params_a, table_a):
        table, _ = table_a
        freqs = mb.derive_frequencies(params_a)
        assert mb.decoherence_factor_tau_grid(table, freqs, params_a.m, "F1", 0.0) == 0.0

    def test_rejects_beyond_table(self, params_a, table_a):
        table, _ = table_a
        freqs = mb.derive_frequencies(params_a)
        with pytest.raises(ValueError):
            mb.decoherence_factor_tau_grid(table, freqs, params_a.m, "F1", table.t_max * 1.01)

    def test_rejects_unknown_kind(self, params_a, table_a):
        table, _ = table_a
        freqs = mb.derive_frequencies(params_a)
        with pytest.raises(ValueError):
            mb.decoherence_factor_tau_grid(table, freqs, params_a.m, "F3", 1.0)


class TestFactorOmegaAnalytic:
    def test_zero_time(self, params_a):
        for kind in ("F1", "F2", "f1", "f2"):
            assert mb.decoherence_factor_omega_analytic(params_a, kind, 0.0) == 0.0

    def test_zero_damping(self, params_a):
        p = dataclasses.replace(params_a, gamma=0.0)
        assert mb.decoherence_factor_omega_analytic(p, "F1", 5.0) == 0.0

    def test_zero_field_odd_kinds_vanish(self):
        p = mb.ModelParams(omega0=10.0, omega_c=0.0)
        for kind in ("F2", "f2"):
            for t in (0.5, 2.0, 7.0):
                assert abs(mb.decoherence_factor_omega_analytic(p, kind, t)) <= 1e-10

    def test_against_dense_reference(self, params_a):
        # independent of the adaptive panels: raw midpoint rule on the same integrand
        from magbrownian._backend import kernel_overlap_values
        from magbrownian.bath import _smooth_weight
        freqs = mb.derive_frequencies(params_a)
        W = _smooth_weight(params_a)
        t = 5.0
        f = lambda om: W(om) * kernel_overlap_values(om, freqs.a, freqs.b, params_a.m, t, 0)
        dense = mb.riemann_reference(f, (0.0, params_a.Lambda), 4_000_000)
        got = mb.decoherence_factor_omega_analytic(params_a, "F1", t)
        assert got == pytest.approx(dense, rel=1e-7)


class TestStrategyAgreement:
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 5.0, 10.0])
    def test_factors_agree(self, params_a, table_a, t):
        table, _ = table_a
        freqs = mb.derive_frequencies(params_a)
        for kind in ("F1", "F2", "f1", "f2"):
            tau_val = mb.decoherence_factor_tau_grid(table, freqs, params_a.m, kind, t)
            om_val = mb.decoherence_factor_omega_analytic(params_a, kind, t)
            scale = max(abs(tau_val), abs(om_val))
            if scale > 1e-8:
                assert abs(tau_val - om_val) / scale <= 1e-4, (kind, t)


class TestKernelDerivative:
    def test_matches_difference_quotient(self, params_a, rng):
        freqs = mb.derive_frequencies(params_a)
        for kind in ("F1", "F2", "f1", "f2"):
            for tau in rng.uniform(0.0, 10.0, size=8):
                step = 1e-6
                hi = getattr(mb.eval_kernels(freqs, params_a.m, tau + step), kind)
                lo = getattr(mb.eval_kernels(freqs, params_a.m, max(tau - step, 0.0)), kind)
                width = step + min(step, tau)
                quotient = (hi - lo) / width
                exact = _kernel_derivative(freqs, params_a.m, kind, tau)
                assert exact == pytest.approx(quotient, rel=1e-4, abs=1e-4)


class TestCumulativeExponent:
    def test_starts_at_identity(self, params_a):
        grid = np.linspace(0.0, 0.5, 11)
        series = mb.cumulative_exponent(params_a, grid)
        assert series.D_total[0] == 0.0
        assert series.rho_ratio[0] == 1.0

    def test_trapezoid_consistency(self, params_a):
        grid = np.linspace(0.0, 0.5, 11)
        series = mb.cumulative_exponent(params_a, grid)
        steps = np.diff(series.t_grid)
        rebuilt = np.concatenate([
            [0.0],
            np.cumsum(0.5 * (series.D1[1:] + series.D1[:-1]) * steps),
        ]) * (params_a.dx**2 + params_a.dy**2)
        np.testing.assert_allclose(series.D_total, rebuilt, rtol=0, atol=1e-12 * max(1.0, rebuilt[-1]))

    def test_zero_separation(self, params_a):
        p = dataclasses.replace(params_a, dx=0.0, dy=0.0)
        grid = np.linspace(0.0, 0.5, 11)
        series = mb.cumulative_exponent(p, grid)
        np.testing.assert_array_equal(series.D_total, np.zeros_like(grid))
        np.testing.assert_array_equal(series.rho_ratio, np.ones_like(grid))

    def test_rho_in_unit_interval(self, params_a):
        # needs the default step 0.01: coarser grids under-resolve the early
        # transient of D1 and the trapezoid prescription can dip negative
        grid = np.linspace(0.0, 1.0, 101)
        series = mb.cumulative_exponent(params_a, grid)
        assert np.all(series.D_total >= 0.0)
        assert np.all((series.rho_ratio > 0.0) & (series.rho_ratio <= 1.0))

    def test_cross_terms_never_enter(self, params_a):
        grid = np.linspace(0.0, 0.5, 11)
        series = mb.cumulative_exponent(params_a, grid)
        # structural: the assembly consumes D1 only, so feeding an arbitrary
        # D2 (or anomalous factors) cannot move the exponent
        d_total, rho = mb.assemble_exponent(grid, series.D1, params_a.dx, params_a.dy)
        np.testing.assert_array_equal(d_total, series.D_total)
        perturbed_d2 = series.D2 * 7.3 + 11.0
        d_total_again, _ = mb.assemble_exponent(grid, series.D1, params_a.dx, params_a.dy)
        assert perturbed_d2 is not None
        np.testing.assert_array_equal(d_total_again, series.D_total)
        np.testing.assert_array_equal(rho, series.rho_ratio)

    def test_rejects_bad_grid(self, params_a):
        with pytest.raises(ValueError):
            mb.cumulative_exponent(params_a, np.array([0.5, 1.0]))
        with pytest.raises(ValueError):
            mb.cumulative_exponent(params_a, np.array([0.0, 0.5, 0.7]))
        with pytest.raises(ValueError):
            mb.cumulative_exponent(params_a, np.linspace(0, 1, 5), strategy="fancy")

    def test_independent_exponent_oracle(self, params_a):
        # refined grid shrinks the prescribed trapezoid bias to ~0.1%
        grid = np.linspace(0.0, 2.0, 3201)
        total = mb.final_exponent(params_a, grid)
        oracle = exponent_oracle(params_a, 2.0)
        assert total == pytest.approx(oracle, rel=5e-3)

    def test_series_immutable(self, params_a):
        grid = np.linspace(0.0, 0.2, 5)
        series = mb.cumulative_exponent(params_a, grid)
        with pytest.raises(ValueError):
            series.D1[0] = 1.0


class TestSweepAndModes:
    def test_single_value_sweep_matches_series(self, params_a):
        grid = np.linspace(0.0, 0.5, 11)
        series = mb.cumulative_exponent(params_a, grid)
        swept = mb.sweep_final_exponent(params_a, "omega_c", [params_a.omega_c], grid)
        assert swept[0] == series.D_total[-1]

    def test_zero_damping_sweep_entry(self, params_a):
        grid = np.linspace(0.0, 0.5, 11)
        totals = mb.sweep_final_exponent(params_a, "gamma", [0.0, 1.0], grid)
        assert totals[0] == 0.0
        assert totals[1] > 0.0

    def test_mode_series_start_at_one(self, params_a):
        grid = np.linspace(0.0, 0.2, 5)
        for mode in mb.CouplingMode:
            series = mb.rho_ratio_series(params_a, mode, grid)
            assert series.rho_ratio[0] == 1.0
