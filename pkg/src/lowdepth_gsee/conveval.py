"""Fourier-sample collection and evaluation of filtered spectral convolutions.

Samples are gathered once by :func:`init`; the convolution can then be
evaluated anywhere with :meth:`FourierSampleSet.eval` without touching the
backend again.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels, streams
from .backend import EvolutionMeter, HadamardBackend


def required_samples(l1: float, eps1: float, delta1: float, M: int) -> int:
    """ceil(l1^2 ln(4 M / delta1) / eps1^2)."""
    # the bound only needs a positive log; delta1 >= 1 is allowed but vacuous
    if not (l1 > 0 and eps1 > 0 and 0 < delta1 < 4 * M and M >= 1):
        raise ValueError("need l1, eps1 > 0, 0 < delta1 < 4 M and M >= 1")
    return max(1, math.ceil(l1**2 * math.log(4 * M / delta1) / eps1**2))


@dataclass(frozen=True)
class FourierSampleSet:
    """Times t_i and weighted outcomes z_i = L e^{2 pi i phi(t_i)} (x_i + i y_i)."""

    t: np.ndarray
    z: np.ndarray
    l1: float
    meter: EvolutionMeter

    def __post_init__(self):
        if self.t.shape != self.z.shape or self.t.ndim != 1:
            raise ValueError("t and z must be 1-d arrays of equal length")
        if self.t.size == 0:
            raise ValueError("a sample set needs at least one entry")
        for arr in (self.t, self.z):
            arr.flags.writeable = False

    @property
    def size(self) -> int:
        return int(self.t.size)

    def _sums(self, xs) -> tuple[np.ndarray, np.ndarray]:
        return kernels.conv_sums(self.t, self.z.real, self.z.imag, xs)

    def mean_complex(self, xs) -> np.ndarray:
        """(1/S) sum_i exp(2 pi i t_i x) z_i, for diagnostics."""
        re, im = self._sums(np.atleast_1d(xs))
        return (re + 1j * im) / self.size

    def eval(self, x: float) -> float:
        """Real part of the sample mean at ``x``; estimates (f_T * p)(x)."""
        re, _ = self._sums(np.array([x], dtype=float))
        return float(re[0] / self.size)

    def eval_many(self, xs) -> np.ndarray:
        re, _ = self._sums(np.atleast_1d(np.asarray(xs, dtype=float)))
        return re / self.size

    def eval_grid(self, x0: float, spacing: float, count: int) -> np.ndarray:
        """:meth:`eval` at x0 + j * spacing, j = 0..count-1 (fast path)."""
        re, _ = kernels.conv_sums_grid(self.t, self.z.real, self.z.imag, x0, spacing, count)
        return re / self.size

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(f"# l1={self.l1:.17g} samples={self.size}\n")
            w = csv.writer(fh)
            w.writerow(["t", "z_re", "z_im"])
            for ti, zi in zip(self.t.tolist(), self.z.tolist()):
                w.writerow([f"{ti:.17g}", f"{zi.real:.17g}", f"{zi.imag:.17g}"])

    @classmethod
    def from_csv(cls, path) -> "FourierSampleSet":
        lines = Path(path).read_text().splitlines()
        header = lines[0]
        if not header.startswith("# l1="):
            raise ValueError(f"{path}: missing '# l1=' header line")
        l1 = float(header.split()[1].split("=", 1)[1])
        rows = list(csv.reader(lines[2:]))
        data = np.array(rows, dtype=float).reshape(-1, 3)
        t = data[:, 0].copy()
        z = data[:, 1] + 1j * data[:, 2]
        return cls(t, z, l1, EvolutionMeter().record_batch(t, repeats=2))


def init(
    backend: HadamardBackend,
    filt,
    eps1: float,
    delta1: float,
    M: int,
    seed,
    workers: int = 1,
    num_samples: int | None = None,
) -> FourierSampleSet:
    """Collect S = required_samples(...) Fourier samples for ``filt``.

    Each sample draws t from |f_hat_T| / L and runs one W=I and one
    W=S^dagger Hadamard test at that same t. ``num_samples`` overrides S
    (the accuracy arguments are then ignored).
    """
    l1 = filt.l1_norm()
    S = required_samples(l1, eps1, delta1, M) if num_samples is None else int(num_samples)
    if S < 1:
        raise ValueError("num_samples must be positive")

    def block(_b: int, n: int, rng: np.random.Generator):
        t = np.asarray(filt.sample_frequency(rng, n), dtype=float)
        x, y = backend.run_tests(t, rng)
        z = l1 * filt.phase_factor(t) * (x + 1j * y)
        return t, z

    parts = streams.map_blocks(block, S, seed, workers)
    t = np.concatenate([p[0] for p in parts])
    z = np.concatenate([p[1] for p in parts])
    meter = EvolutionMeter().record_batch(t, repeats=2)
    return FourierSampleSet(t, z, l1, meter)
