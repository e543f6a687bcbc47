"""Selects the compiled kernels when the extension is built, the numpy ones otherwise."""

from __future__ import annotations

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

_active = _compiled if _compiled is not None else _kernels_py


def active_name() -> str:
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def use(name: str) -> None:
    """Switch kernel implementation ("compiled" or "python")."""
    global _active
    if name not in BACKENDS:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}")
    _active = BACKENDS[name]


def signal_batch(t, energies, weights) -> tuple[np.ndarray, np.ndarray]:
    return _active.signal_batch(
        np.ascontiguousarray(t, dtype=float),
        np.ascontiguousarray(energies, dtype=float),
        np.ascontiguousarray(weights, dtype=float),
    )


def conv_sums(t, z_re, z_im, xs) -> tuple[np.ndarray, np.ndarray]:
    return _active.conv_sums(
        np.ascontiguousarray(t, dtype=float),
        np.ascontiguousarray(z_re, dtype=float),
        np.ascontiguousarray(z_im, dtype=float),
        np.ascontiguousarray(np.atleast_1d(xs), dtype=float),
    )


def conv_sums_grid(t, z_re, z_im, x0: float, h: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Sums on the uniform grid x0 + j*h, j = 0..m-1."""
    return _active.conv_sums_grid(
        np.ascontiguousarray(t, dtype=float),
        np.ascontiguousarray(z_re, dtype=float),
        np.ascontiguousarray(z_im, dtype=float),
        float(x0),
        float(h),
        int(m),
    )
