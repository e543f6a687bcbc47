"""Gaussian and Gaussian-derivative filters, their band limits and frequency samplers.

Fourier convention: ``f_hat(xi) = int f(x) exp(-2 pi i x xi) dx`` with inverse
``f(x) = int f_hat(xi) exp(2 pi i x xi) d xi``, matching the Hadamard signal
``tr(rho exp(-2 pi i H t))``. Under it the normal density of width sigma has
``f_hat(xi) = exp(-2 (sigma pi xi)^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class GaussianFilter:
    """Normal density of width ``sigma``, optionally band-limited to [-T, T].

    Its Fourier transform is real and positive, so the phase is identically 0.
    """

    sigma: float
    band_limit: float = math.inf

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not self.band_limit > 0:
            raise ValueError("band_limit must be positive")

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-(x**2) / (2 * self.sigma**2)) / (SQRT_2PI * self.sigma)

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.exp(-2.0 * (self.sigma * math.pi * xi) ** 2)
        return np.where(np.abs(xi) <= self.band_limit, out, 0.0)

    def phase(self, xi):
        return np.zeros_like(np.asarray(xi, dtype=float))

    def phase_factor(self, xi):
        return np.ones_like(np.asarray(xi, dtype=float), dtype=complex)

    def l1_norm(self) -> float:
        scale = gaussian_spectral_scale(self.sigma)
        return SQRT_2PI * scale * math.erf(self.band_limit / (scale * math.sqrt(2.0)))

    def sample_frequency(self, rng: np.random.Generator, size: int | None = None):
        """Truncated normal with standard deviation 1/(2 pi sigma), by inverse CDF."""
        scale = gaussian_spectral_scale(self.sigma)
        b = self.band_limit / scale
        lo, hi = special.ndtr(-b), special.ndtr(b)
        u = rng.random(size)
        xi = scale * special.ndtri(lo + u * (hi - lo))
        return np.clip(xi, -self.band_limit, self.band_limit)


def gaussian_spectral_scale(sigma: float) -> float:
    """Standard deviation of f_hat viewed as a normal density in xi."""
    return 1.0 / (2.0 * math.pi * sigma)


def gaussian_f_value(filt: GaussianFilter, x):
    return filt.value(x)


def gaussian_f_hat(filt: GaussianFilter, xi):
    return filt.fourier(xi)


@dataclass(frozen=True)
class GaussianDerivativeFilter:
    """g_sigma = f_sigma', band-limited to [-T, T]."""

    sigma: float
    band_limit: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not self.band_limit >= 0:
            raise ValueError("band_limit must be nonnegative")

    @property
    def _a(self) -> float:
        return 2.0 * (self.sigma * math.pi) ** 2

    def value(self, x):
        """Untruncated g_sigma(x) = -x exp(-x^2 / (2 sigma^2)) / (sqrt(2 pi) sigma^3)."""
        x = np.asarray(x, dtype=float)
        return -x * np.exp(-(x**2) / (2 * self.sigma**2)) / (SQRT_2PI * self.sigma**3)

    def fourier(self, xi):
        """2 pi i xi exp(-2 (sigma pi xi)^2) on [-T, T], zero outside."""
        xi = np.asarray(xi, dtype=float)
        out = 2j * math.pi * xi * np.exp(-self._a * xi**2)
        return np.where(np.abs(xi) <= self.band_limit, out, 0.0)

    def phase(self, xi):
        """1/4 for xi >= 0 (phase of +i), 3/4 for xi < 0."""
        xi = np.asarray(xi, dtype=float)
        return np.where(xi < 0, 0.75, 0.25)

    def phase_factor(self, xi):
        """exp(2 pi i phase(xi)), exactly +/- i."""
        xi = np.asarray(xi, dtype=float)
        return np.where(xi < 0, -1j, 1j)

    def l1_norm(self) -> float:
        """(1 / (pi sigma^2)) (1 - exp(-2 (sigma pi T)^2)), below the 4 / (pi sigma^2) bound."""
        return 1.0 / (math.pi * self.sigma**2) * -math.expm1(-self._a * self.band_limit**2)

    def sample_frequency(self, rng: np.random.Generator, size: int | None = None):
        """Draw from density proportional to |xi| exp(-a xi^2) on [-T, T].

        Magnitude by exact inverse CDF, sign uniform.
        """
        if not self.band_limit > 0:
            raise ValueError("cannot sample a filter with zero band limit")
        a = self._a
        mass = -math.expm1(-a * self.band_limit**2)
        u = rng.random(size)
        flip = rng.random(size) < 0.5
        mag = np.sqrt(-np.log1p(-u * mass) / a)
        mag = np.minimum(mag, self.band_limit)
        return np.where(flip, -mag, mag)


def g_value(filt: GaussianDerivativeFilter, x):
    return filt.value(x)


def g_hat(filt: GaussianDerivativeFilter, xi):
    return filt.fourier(xi)


def choose_sigma(delta_lb: float, epsilon: float, eta_lb: float) -> float:
    """min(0.9 D / sqrt(2 ln(9 D / (eps eta))), 0.2 D)."""
    arg = 9.0 * delta_lb / (epsilon * eta_lb)
    if arg <= 1.0:
        raise ValueError(f"9*delta/(epsilon*eta) = {arg:g} must exceed 1")
    return min(0.9 * delta_lb / math.sqrt(2.0 * math.log(arg)), 0.2 * delta_lb)


def choose_band_limit(sigma: float, eps1: float) -> float:
    """T = sqrt(2 ln(8 / (pi eps1 sigma^2))) / (pi sigma); sup |g - g_T| <= eps1 / 2.

    The spectral tail beyond this T is (pi eps1 sigma^2 / 8)^4 / (pi sigma^2),
    far below eps1 / 2, so the choice is conservative.
    """
    arg = 8.0 / (math.pi * eps1 * sigma**2)
    if arg <= 1.0:
        raise ValueError(f"8/(pi*eps1*sigma^2) = {arg:g} must exceed 1")
    return math.sqrt(2.0 * math.log(arg)) / (math.pi * sigma)


def gaussian_band_limit(sigma: float, eps1: float) -> float:
    """Smallest T with int_{|xi|>T} f_hat(xi) d xi <= eps1 / 2."""
    scale = gaussian_spectral_scale(sigma)
    target = 0.5 * eps1 / (SQRT_2PI * scale)
    if target >= 1.0:  # any T works; keep one standard deviation
        return scale
    return scale * math.sqrt(2.0) * float(special.erfcinv(target))
