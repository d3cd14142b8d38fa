import time

import numpy as np
import pytest

import magbrownian as mb

# Canonical high-temperature under-damped scenario used across the suite.
SCENARIO_A = dict(m=1.0, omega0=10.0, omega_c=1.0, gamma=1.0, Lambda=1e3, Omega=1e3,
                  m_b=1e-2, m_r=1e-3, K=1e2, d=1.0, g=1.0, dx=1.0, dy=1.0)


@pytest.fixture(scope="session")
def params_a():
    return mb.ModelParams(**SCENARIO_A)


@pytest.fixture(scope="session")
def table_a(params_a):
    """Kernel table for the canonical scenario plus its build time (seconds)."""
    t0 = time.perf_counter()
    table = mb.build_kernel_table(params_a, 10.0)
    return table, time.perf_counter() - t0


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)
