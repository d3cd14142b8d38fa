import numpy as np
import pytest

import magbrownian as mb
from magbrownian.model import FrequencyPair


def random_params(rng, omega_c_min=1e-4):
    return mb.ModelParams(
        omega0=rng.uniform(0.1, 100.0),
        omega_c=rng.uniform(omega_c_min, 100.0),
        m=rng.uniform(0.1, 10.0),
    )


class TestRealForm:
    def test_time_zero(self, params_a):
        freqs = mb.derive_frequencies(params_a)
        kv = mb.eval_kernels(freqs, params_a.m, 0.0)
        assert kv.F1 == 1.0
        assert kv.F2 == 0.0
        assert kv.f1 == 0.0
        assert kv.f2 == 0.0

    def test_zero_field_collapse(self):
        freqs = FrequencyPair.from_trap(10.0, 0.0)
        tau = np.linspace(0.0, 10.0, 501)
        kv = mb.eval_kernels(freqs, 1.0, tau)
        np.testing.assert_allclose(kv.F1, np.cos(10 * tau), atol=1e-12)
        np.testing.assert_allclose(kv.f1, np.sin(10 * tau) / 10, atol=1e-12)
        np.testing.assert_allclose(kv.F2, 0.0, atol=1e-12)
        np.testing.assert_allclose(kv.f2, 0.0, atol=1e-12)

    def test_bounds_random(self, rng):
        for _ in range(200):
            p = random_params(rng)
            freqs = mb.derive_frequencies(p)
            tau = rng.uniform(0.0, 20.0, size=50)
            kv = mb.eval_kernels(freqs, p.m, tau)
            cap = 2.0 / (p.m * (freqs.a + freqs.b))
            assert np.all(np.abs(kv.F1) <= 1.0 + 1e-12)
            assert np.all(np.abs(kv.F2) <= 1.0 + 1e-12)
            assert np.all(np.abs(kv.f1) <= cap * (1.0 + 1e-12))
            assert np.all(np.abs(kv.f2) <= cap * (1.0 + 1e-12))

    def test_rejects_negative_time(self, params_a):
        freqs = mb.derive_frequencies(params_a)
        with pytest.raises(ValueError):
            mb.eval_kernels(freqs, params_a.m, -0.5)

    def test_continuity_at_zero_field(self):
        tau = np.linspace(0.0, 10.0, 1001)
        near = mb.eval_kernels(FrequencyPair.from_trap(10.0, 1e-8), 1.0, tau)
        limit = mb.eval_kernels(FrequencyPair.from_trap(10.0, 0.0), 1.0, tau)
        for name in ("F1", "F2", "f1", "f2"):
            np.testing.assert_allclose(getattr(near, name), getattr(limit, name), atol=1e-6)


class TestComplexReference:
    def test_time_zero(self):
        p = mb.ModelParams(omega0=10.0, omega_c=1.0)
        kv = mb.eval_kernels_complex_reference(p, 0.0)
        assert kv.F1 == pytest.approx(1.0, abs=1e-14)

    def test_oracle_equivalence_random(self, rng):
        for _ in range(2000):
            p = random_params(rng)
            tau = rng.uniform(0.0, 10.0)
            real = mb.eval_kernels(mb.derive_frequencies(p), p.m, tau)
            ref = mb.eval_kernels_complex_reference(p, tau)
            for name in ("F1", "F2", "f1", "f2"):
                a, b = getattr(real, name), getattr(ref, name)
                assert abs(a - b) <= 1e-10 * max(1.0, abs(a)), (name, p, tau)

    def test_imaginary_residue_sweep(self, params_a):
        # the reference itself asserts residues <= 1e-12 before returning
        tau = np.arange(0.0, 10.0 + 1e-9, 0.01)
        mb.eval_kernels_complex_reference(params_a, tau)

    def test_rejects_degenerate_field(self):
        p = mb.ModelParams(omega0=10.0, omega_c=0.0)
        with pytest.raises(mb.DegenerateFieldError):
            mb.eval_kernels_complex_reference(p, 1.0)


class TestAmplitudeDominance:
    def test_position_kernel_dominates_anomalous(self):
        freqs = FrequencyPair.from_trap(10.0, 1.0)
        tau = np.arange(0.0, 10.0 + 1e-9, 0.01)
        kv = mb.eval_kernels(freqs, 1.0, tau)
        assert np.max(np.abs(kv.f1)) <= 0.5 * np.max(np.abs(kv.F1))
        assert np.sum(np.abs(kv.F1)) >= 5.0 * np.sum(np.abs(kv.f1))
