"""Backend selection: compiled extension when available, numpy fallback otherwise.

The compiled core (``_fastkern``, Cython) and the pure-numpy module
(``_purepy``) implement the same functions to the same contracts; results
agree to rounding (not bitwise).  Selection happens once at import:

* ``MAGBROWNIAN_PURE=1`` in the environment forces the numpy fallback,
* otherwise the extension is used when importable.

``set_backend``/``get_backend`` exist for the benchmark suite and for tests
comparing the two implementations.
"""

from __future__ import annotations

import os

from . import _purepy

try:
    from . import _fastkern
except ImportError:  # extension not built on this install
    _fastkern = None

if os.environ.get("MAGBROWNIAN_PURE", "") not in ("", "0"):
    _active = _purepy
else:
    _active = _fastkern if _fastkern is not None else _purepy

KIND_CODES = _purepy.KIND_CODES


def get_backend():
    """Name of the active implementation: 'fast' or 'pure'."""
    return _active.BACKEND_NAME


def set_backend(name):
    """Switch implementation ('fast' or 'pure'); returns the previous name."""
    global _active
    previous = _active.BACKEND_NAME
    if name == "pure":
        _active = _purepy
    elif name == "fast":
        if _fastkern is None:
            raise RuntimeError("compiled backend requested but _fastkern is not built")
        _active = _fastkern
    else:
        raise ValueError(f"unknown backend {name!r}")
    return previous


def available_backends():
    return ("pure",) if _fastkern is None else ("fast", "pure")


def coth_values(x):
    return _active.coth_values(x)


def noise_weight_values(omega, gamma, m, omega0, K, m_b, Omega, prefactor, Lambda=None):
    return _active.noise_weight_values(omega, gamma, m, omega0, K, m_b, Omega, prefactor, Lambda)


def filon_cos_pass(fvals, h, tau):
    return _active.filon_cos_pass(fvals, h, tau)


def filon_sin_pass(fvals, h, tau):
    return _active.filon_sin_pass(fvals, h, tau)


def kernel_overlap_values(omega, a, b, m, t, kind):
    return _active.kernel_overlap_values(omega, a, b, m, t, kind)
