"""Brute-force reference values for tests.

Nothing here calls the closed forms in :mod:`lowdepth_gsee.filters`; the
filters are only inspected for their parameters, and every transform is
rewritten from scratch or integrated numerically.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .filters import GaussianDerivativeFilter, GaussianFilter
from .spectral import SpectralMeasure

QUAD_TOL = 1e-10


class QuadratureError(RuntimeError):
    """Adaptive integration missed its tolerance; a harness bug, not a domain state."""


def _kernel(filt):
    if isinstance(filt, GaussianDerivativeFilter):
        s = filt.sigma
        return lambda u: -u / (math.sqrt(2 * math.pi) * s**3) * np.exp(-0.5 * (u / s) ** 2)
    if isinstance(filt, GaussianFilter):
        s = filt.sigma
        return lambda u: np.exp(-0.5 * (u / s) ** 2) / (s * math.sqrt(2 * math.pi))
    if callable(filt):
        return filt
    raise TypeError(f"no reference kernel for {type(filt).__name__}")


def convolution_exact(filt, measure: SpectralMeasure, x):
    """sum_j p_j k(x - E_j) with the untruncated kernel; ``filt`` may be a plain callable."""
    k = _kernel(filt)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for e, p in measure.levels:
        out = out + p * k(x - e)
    return out if out.ndim else float(out)


def _spectrum(filt):
    """Untruncated Fourier transform, real and imaginary parts.

    Derived by hand from the spatial kernels; :func:`fourier_quadrature`
    checks it numerically.
    """
    a = 2.0 * (math.pi * filt.sigma) ** 2
    if isinstance(filt, GaussianDerivativeFilter):
        return (lambda xi: 0.0 * xi), (lambda xi: 2 * math.pi * xi * np.exp(-a * xi * xi))
    if isinstance(filt, GaussianFilter):
        return (lambda xi: np.exp(-a * xi * xi)), (lambda xi: 0.0 * xi)
    raise TypeError(f"no reference spectrum for {type(filt).__name__}")


def _quad_vec(fn, lo, hi, points=None):
    val, err, info = integrate.quad_vec(
        fn, lo, hi, epsabs=QUAD_TOL, epsrel=0, norm="max", limit=20000, points=points,
        full_output=True,
    )
    # status 2 (rounding-limited) is fine when the error estimate still meets the target
    if info.status == 1 or err > QUAD_TOL:
        raise QuadratureError(f"quad_vec on [{lo}, {hi}] reached error {err:.3g}")
    return val


def fourier_quadrature(filt, xi: float) -> complex:
    """int k(x) exp(-2 pi i x xi) dx of the spatial kernel, by quadrature."""
    k = _kernel(filt)
    s = filt.sigma
    lim = 14.0 * s  # kernel mass beyond this is below 1e-40
    kw = dict(limit=500, epsabs=1e-13, epsrel=1e-13, points=[-s, 0.0, s])
    re, e1 = integrate.quad(lambda u: k(u) * math.cos(2 * math.pi * u * xi), -lim, lim, **kw)
    im, e2 = integrate.quad(lambda u: -k(u) * math.sin(2 * math.pi * u * xi), -lim, lim, **kw)
    if e1 + e2 > QUAD_TOL:
        raise QuadratureError(f"Fourier quadrature error {e1 + e2:.3g}")
    return complex(re, im)


def truncated_filter_quadrature(filt, x):
    """int_{-T}^{T} k_hat(xi) exp(2 pi i x xi) d xi, real part, by adaptive quadrature.

    ``x`` may be an array; all points are integrated together.
    """
    T = filt.band_limit
    if not math.isfinite(T):
        raise ValueError("truncated quadrature needs a finite band limit")
    re, im = _spectrum(filt)
    xs = np.atleast_1d(np.asarray(x, dtype=float))

    def integrand(xi):
        w = 2 * math.pi * xs * xi
        return re(xi) * np.cos(w) - im(xi) * np.sin(w)

    # split the interval so each piece holds a bounded number of oscillations
    span = max(1.0, float(np.max(np.abs(xs))) * 2 * T)
    pieces = int(min(400, max(4, math.ceil(span / 4))))
    edges = np.linspace(-T, T, pieces + 1)
    total = np.zeros_like(xs)
    for lo, hi in zip(edges[:-1], edges[1:]):
        total = total + _quad_vec(integrand, lo, hi)
    return total if np.ndim(x) else float(total[0])


def truncated_convolution_quadrature(filt, measure: SpectralMeasure, x):
    """sum_j p_j k_T(x - E_j), each term by :func:`truncated_filter_quadrature`."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(np.shape(np.atleast_1d(x)))
    for e, p in measure.levels:
        out = out + p * np.atleast_1d(truncated_filter_quadrature(filt, np.atleast_1d(x) - e))
    return out if x.ndim else float(out[0])


def truncated_convolution_series(filt, measure: SpectralMeasure, x):
    """Same quantity via the integral of the signal against k_hat, as the sampler sees it."""
    T = filt.band_limit
    re, im = _spectrum(filt)
    E, P = measure.arrays()
    xs = np.atleast_1d(np.asarray(x, dtype=float))

    def integrand(xi):
        # k_hat(xi) * sum_j p_j exp(2 pi i (x - E_j) xi), real part
        w = 2 * math.pi * np.subtract.outer(xs, E) * xi
        c, s = np.cos(w) @ P, np.sin(w) @ P
        return re(xi) * c - im(xi) * s

    total = _quad_vec(integrand, -T, T, points=[0.0])
    return total if np.ndim(x) else float(total[0])


def l1_quadrature(filt) -> float:
    """int_{-T}^{T} |k_hat(xi)| d xi."""
    T = filt.band_limit
    re, im = _spectrum(filt)
    f = lambda xi: math.hypot(float(re(xi)), float(im(xi)))  # noqa: E731
    total, err = 0.0, 0.0
    # integrate over [0, T] twice by symmetry; split at the peak of |k_hat|
    peak = 1.0 / (2 * math.pi * filt.sigma)
    edges = [0.0] + [v for v in (peak, 4 * peak) if v < T] + [T]
    if not math.isfinite(T):
        edges = [0.0, peak, 4 * peak, math.inf]
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=500)
        total += v
        err += e
    if err > QUAD_TOL:
        raise QuadratureError(f"l1 quadrature error {err:.3g}")
    return 2.0 * total


def band_limit_tail_bound(sigma: float, T: float) -> float:
    """(4 / (sigma^2 pi)) exp(-sigma^2 pi^2 T^2 / 2)."""
    return 4.0 / (sigma**2 * math.pi) * math.exp(-0.5 * (sigma * math.pi * T) ** 2)


def signal_exact(measure: SpectralMeasure, t: float) -> complex:
    return complex(sum(p * complex(math.cos(2 * math.pi * e * t), -math.sin(2 * math.pi * e * t)) for e, p in measure.levels))


def random_valid_instance(rng: np.random.Generator, max_excited: int = 4):
    """Random instance whose gap and overlap promises hold, with an admissible epsilon.

    Returns (instance, epsilon).
    """
    from .spectral import ProblemInstance, max_admissible_epsilon

    eta = float(rng.uniform(0.05, 0.9))
    delta = float(rng.uniform(0.02, 0.5))
    n_exc = int(rng.integers(0, max_excited + 1))
    e0 = float(rng.uniform(-1.0, 1.0))
    if n_exc == 0:
        energies, weights = [e0], [1.0]
    else:
        p0 = float(rng.uniform(eta, 1.0))
        first = e0 + delta * float(rng.uniform(1.0, 3.0))
        rest = first + np.cumsum(rng.uniform(0.01, 0.5, n_exc - 1))
        energies = [e0, first, *rest.tolist()]
        exc = rng.dirichlet(np.ones(n_exc)) * (1.0 - p0)
        weights = [p0, *exc.tolist()]
        weights[0] = 1.0 - math.fsum(weights[1:])
    measure = SpectralMeasure(tuple(energies), tuple(weights))
    inst = ProblemInstance(measure, delta, eta, e0 - 1.0, energies[-1] + 1.0)
    eps = max_admissible_epsilon(delta, eta) * float(rng.uniform(0.1, 1.0))
    return inst, eps
