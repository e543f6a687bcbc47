"""Hadamard-test simulation from a known spectral measure, plus evolution-time metering."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from . import kernels
from .spectral import SpectralMeasure


class HadamardBasis(enum.Enum):
    """W = I measures the real part of the signal, W = S^dagger the imaginary part."""

    REAL = "re"
    IMAG = "im"


@dataclass(frozen=True)
class HadamardSample:
    t: float
    basis: HadamardBasis
    outcome: int

    def __post_init__(self):
        if self.outcome not in (1, -1):
            raise ValueError(f"outcome must be +1 or -1, got {self.outcome}")


@dataclass(frozen=True)
class EvolutionMeter:
    """Evolution time in units of applications of c-exp(2 pi i H)."""

    max_abs_t: float = 0.0
    total_abs_t: float = 0.0
    num_tests: int = 0

    def record(self, t: float) -> "EvolutionMeter":
        a = abs(float(t))
        return EvolutionMeter(max(self.max_abs_t, a), self.total_abs_t + a, self.num_tests + 1)

    def record_batch(self, t, repeats: int = 1) -> "EvolutionMeter":
        """Record ``repeats`` tests at every time in ``t``.

        The total is summed with ``math.fsum`` so it is independent of order.
        """
        a = np.abs(np.asarray(t, dtype=float))
        if a.size == 0:
            return self
        return EvolutionMeter(
            max(self.max_abs_t, float(a.max())),
            math.fsum([self.total_abs_t, repeats * math.fsum(a)]),
            self.num_tests + repeats * int(a.size),
        )

    def merge(self, other: "EvolutionMeter") -> "EvolutionMeter":
        return EvolutionMeter(
            max(self.max_abs_t, other.max_abs_t),
            self.total_abs_t + other.total_abs_t,
            self.num_tests + other.num_tests,
        )


def meter_record(meter: EvolutionMeter, t: float) -> EvolutionMeter:
    return meter.record(t)


def signal(measure: SpectralMeasure, t):
    """tr[rho exp(-2 pi i H t)] = sum_j p_j exp(-2 pi i E_j t); scalar or array ``t``."""
    energies, weights = measure.arrays()
    re, im = kernels.signal_batch(np.atleast_1d(np.asarray(t, dtype=float)), energies, weights)
    out = re + 1j * im
    if np.ndim(t) == 0:
        return complex(out[0])
    return out


def bernoulli_pm1(mean, rng: np.random.Generator) -> np.ndarray:
    """+/-1 draws with the given means (clamped to [-1, 1])."""
    mean = np.clip(np.asarray(mean, dtype=float), -1.0, 1.0)
    u = rng.random(mean.shape)
    return np.where(u < 0.5 * (1.0 + mean), 1, -1).astype(np.int8)


class HadamardBackend(Protocol):
    """Anything that can run batches of Hadamard tests at given times."""

    def run_tests(self, t: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Return (X, Y): one W=I and one W=S^dagger outcome per time."""
        ...


class ExactSpectralBackend:
    """Samples outcomes exactly from the spectral measure (shot noise only)."""

    def __init__(self, measure: SpectralMeasure):
        self.measure = measure
        self._energies, self._weights = measure.arrays()

    def run_tests(self, t, rng):
        re, im = kernels.signal_batch(t, self._energies, self._weights)
        x = bernoulli_pm1(re, rng)
        y = bernoulli_pm1(im, rng)
        return x, y


def sample_hadamard(
    measure: SpectralMeasure, t: float, basis: HadamardBasis, rng: np.random.Generator
) -> HadamardSample:
    """One Hadamard-test outcome; metering is left to the caller."""
    s = signal(measure, t)
    m = s.real if basis is HadamardBasis.REAL else s.imag
    outcome = int(bernoulli_pm1(np.array([m]), rng)[0])
    return HadamardSample(float(t), basis, outcome)
