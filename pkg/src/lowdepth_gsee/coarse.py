"""Coarse ground-energy locator: leftmost threshold crossing of a narrow Gaussian scan.

The narrow Gaussian f_s (s much smaller than sigma) convolved with the spectral
measure has a bump of height >= eta f_s(0) at E_0 and, since every other
level lies to the right, nothing comparable to its left. Scanning from the
bottom of the window and stopping at the first estimate above
tau = eta f_s(0) / 2 lands within sigma/4 of E_0:

* left of E_0 - s sqrt(2 ln(8/eta)) the exact value is below tau/4, so even
  with estimation error 3 tau / 4 nothing crosses; with the choice of s below
  that distance is at most sqrt(3)/8 sigma < sigma/4;
* the grid point nearest E_0 (within s/2) has exact value >= 1.76 tau and
  therefore crosses.

The estimation error budget is tau/2 for sampling plus tau/4 for truncating
the Gaussian's spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import conveval
from .backend import EvolutionMeter, HadamardBackend
from .filters import SQRT_2PI, GaussianFilter, gaussian_band_limit
from .spectral import ProblemInstance


class CoarseNotFound(RuntimeError):
    """No grid point crossed the threshold: the overlap promise or window is wrong."""


@dataclass(frozen=True)
class CoarseConfig:
    scan_width: float
    grid_spacing: float
    threshold: float
    per_point_accuracy: float

    def __post_init__(self):
        if not (self.scan_width > 0 and self.grid_spacing > 0):
            raise ValueError("scan width and spacing must be positive")
        if not (self.threshold > 0 and self.per_point_accuracy > 0):
            raise ValueError("threshold and accuracy must be positive")
        if self.grid_spacing > self.scan_width:
            raise ValueError("grid spacing may not exceed the scan width")


def coarse_config(sigma: float, eta_lb: float) -> CoarseConfig:
    if eta_lb >= 2:
        raise ValueError("eta_lb must be below 2")
    s = sigma / (8.0 * math.sqrt(2.0 * math.log(2.0 / eta_lb)))
    tau = 0.5 * eta_lb / (SQRT_2PI * s)
    return CoarseConfig(scan_width=s, grid_spacing=s, threshold=tau, per_point_accuracy=tau / 2)


@dataclass(frozen=True)
class CoarseResult:
    estimate: float
    meter: EvolutionMeter
    grid_size: int = 0
    samples: int = 0

    @property
    def classical_ops(self) -> int:
        return self.grid_size * self.samples


def coarse_estimate(
    backend: HadamardBackend,
    instance: ProblemInstance,
    sigma: float,
    delta_half: float,
    seed,
    workers: int = 1,
) -> CoarseResult:
    """Estimate E_0 to within sigma/4 with probability at least 1 - delta_half."""
    cfg = coarse_config(sigma, instance.eta_lb)
    width = instance.e_hi - instance.e_lo
    count = math.ceil(width / cfg.grid_spacing - 1e-9) + 1
    filt = GaussianFilter(cfg.scan_width, gaussian_band_limit(cfg.scan_width, cfg.per_point_accuracy))
    samples = conveval.init(backend, filt, cfg.per_point_accuracy, delta_half, count, seed, workers)
    values = samples.eval_grid(instance.e_lo, cfg.grid_spacing, count)
    above = np.flatnonzero(values >= cfg.threshold)
    if above.size == 0:
        raise CoarseNotFound(
            f"no point in [{instance.e_lo}, {instance.e_hi}] reached threshold {cfg.threshold:.6g}"
        )
    estimate = instance.e_lo + cfg.grid_spacing * int(above[0])
    return CoarseResult(estimate, samples.meter, count, samples.size)


def oracle_coarse_estimate(backend, instance, sigma, delta_half, seed, workers=1) -> CoarseResult:
    """Test-only stand-in that reads E_0 off the instance; costs nothing."""
    return CoarseResult(instance.measure.ground_energy, EvolutionMeter())
