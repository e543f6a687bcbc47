"""End-to-end low-depth ground state energy estimation.

Pipeline: choose the filter width from the gap, locate E_0 coarsely to
within sigma/4, sample the band-limited Gaussian-derivative convolution once,
evaluate it on a grid around the coarse estimate, and return the grid point
where it is closest to zero.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import conveval, streams
from .backend import ExactSpectralBackend, HadamardBackend
from .coarse import CoarseResult, coarse_estimate
from .costs import ResourceReport, StageCost
from .filters import SQRT_2PI, GaussianDerivativeFilter, choose_band_limit, choose_sigma
from .spectral import (
    Accuracy,
    ProblemInstance,
    min_admissible_gap,
    validate_epsilon,
)

log = logging.getLogger(__name__)

CoarseFn = Callable[..., CoarseResult]


class PreconditionError(ValueError):
    """The requested accuracy is outside the regime where the estimate is guaranteed."""


def grid_size(sigma: float, epsilon: float) -> int:
    """M = ceil(sigma / eps) + 1."""
    # ratios like 0.020000000000000004 / 0.002 must not round up to the next integer
    return math.ceil(sigma / epsilon * (1 - 1e-12)) + 1


def eps_tilde(epsilon: float, eta_lb: float, sigma: float) -> float:
    """0.1 eps eta / (sqrt(2 pi) sigma^3): the per-point accuracy budget on g_sigma * p."""
    return 0.1 * epsilon * eta_lb / (SQRT_2PI * sigma**3)


def make_grid(e0_tilde: float, sigma: float, M: int) -> np.ndarray:
    """x_j = E0~ - sigma/4 + (sigma / (2M)) (j - 1), j = 1..M."""
    return e0_tilde - 0.25 * sigma + (0.5 * sigma / M) * np.arange(M)


def zero_crossing(h) -> int:
    """0-based index of min |h_j|; ties go to the smallest index."""
    return int(np.argmin(np.abs(np.asarray(h, dtype=float))))


@dataclass(frozen=True)
class GseeParams:
    sigma: float
    eps_tilde: float
    band_limit: float
    grid_size: int
    grid: np.ndarray
    coarse_estimate: float

    @property
    def spacing(self) -> float:
        return 0.5 * self.sigma / self.grid_size

    @classmethod
    def select(
        cls, delta_lb: float, epsilon: float, eta_lb: float, coarse: float
    ) -> "GseeParams":
        sigma = choose_sigma(delta_lb, epsilon, eta_lb)
        et = eps_tilde(epsilon, eta_lb, sigma)
        M = grid_size(sigma, epsilon)
        return cls(
            sigma=sigma,
            eps_tilde=et,
            band_limit=choose_band_limit(sigma, et),
            grid_size=M,
            grid=make_grid(coarse, sigma, M),
            coarse_estimate=coarse,
        )


@dataclass(frozen=True)
class GseeResult:
    """``argmin_index`` is 0-based into ``grid``/``conv_estimates``."""

    estimate: float
    conv_estimates: np.ndarray
    argmin_index: int
    params: GseeParams
    resources: ResourceReport
    delta_lb: float
    epsilon: float
    unsound: bool = False
    alpha: float | None = None
    delta_eff: float | None = None
    floored: bool = False
    extra: dict = field(default_factory=dict)


def run_gsee(
    instance: ProblemInstance,
    acc: Accuracy,
    seed,
    *,
    workers: int = 1,
    allow_invalid_epsilon: bool = False,
    backend: HadamardBackend | None = None,
    coarse: CoarseFn = coarse_estimate,
) -> GseeResult:
    """Estimate E_0 to within ``acc.epsilon`` with failure probability below ``acc.delta_fail``.

    Raises PreconditionError when epsilon is too large for the gap/overlap
    bounds, unless ``allow_invalid_epsilon`` is set; the result is then
    marked ``unsound``. :class:`CoarseNotFound` propagates from the coarse stage.
    """
    verdict = validate_epsilon(instance, acc)
    unsound = not verdict.ok or not instance.gap_promise_holds
    if not verdict.ok:
        if not allow_invalid_epsilon:
            raise PreconditionError(
                f"epsilon={acc.epsilon:g} exceeds the admissible {verdict.max_epsilon:.6g} "
                f"for delta={instance.delta_lb:g}, eta={instance.eta_lb:g}"
            )
        log.warning("epsilon %g above admissible %g; result is unsound", acc.epsilon, verdict.max_epsilon)
    if acc.epsilon >= instance.delta_lb:
        raise PreconditionError("epsilon must be smaller than the gap bound")

    backend = backend or ExactSpectralBackend(instance.measure)
    sigma = choose_sigma(instance.delta_lb, acc.epsilon, instance.eta_lb)
    half = acc.delta_fail / 2

    rough = coarse(
        backend, instance, sigma, half, streams.child(seed, streams.STAGE_COARSE), workers
    )
    params = GseeParams.select(instance.delta_lb, acc.epsilon, instance.eta_lb, rough.estimate)
    filt = GaussianDerivativeFilter(params.sigma, params.band_limit)
    samples = conveval.init(
        backend,
        filt,
        params.eps_tilde / 2,
        half,
        params.grid_size,
        streams.child(seed, streams.STAGE_MAIN),
        workers,
    )
    h = samples.eval_grid(float(params.grid[0]), params.spacing, params.grid_size)
    j = zero_crossing(h)

    report = ResourceReport.combine(
        StageCost.from_meter(rough.meter, rough.classical_ops),
        StageCost.from_meter(samples.meter, params.grid_size * samples.size),
    )
    return GseeResult(
        estimate=float(params.grid[j]),
        conv_estimates=h,
        argmin_index=j,
        params=params,
        resources=report,
        delta_lb=instance.delta_lb,
        epsilon=acc.epsilon,
        unsound=unsound,
    )


def effective_gap(delta_lb: float, epsilon: float, eta_lb: float, alpha: float) -> tuple[float, bool]:
    """Gap bound used at trade-off parameter ``alpha``.

    Interpolates geometrically between ``delta_lb`` (alpha = 0) and the
    smallest gap bound for which ``epsilon`` is admissible (alpha = 1), which
    is eps times a log factor. The flag reports whether the result lies above
    the bare eps^alpha delta^(1-alpha).
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    floor = min_admissible_gap(epsilon, eta_lb)
    if delta_lb <= floor:
        return delta_lb, False
    d = floor**alpha * delta_lb ** (1.0 - alpha)
    d = min(max(d, floor), delta_lb)
    return d, d > epsilon**alpha * delta_lb ** (1.0 - alpha)


def run_gsee_alpha(
    instance: ProblemInstance, acc: Accuracy, alpha: float, seed, **kwargs
) -> GseeResult:
    """:func:`run_gsee` with the gap bound shrunk toward eps, trading depth for samples."""
    d_eff, floored = effective_gap(instance.delta_lb, acc.epsilon, instance.eta_lb, alpha)
    res = run_gsee(instance.with_delta(d_eff), acc, seed, **kwargs)
    return GseeResult(
        estimate=res.estimate,
        conv_estimates=res.conv_estimates,
        argmin_index=res.argmin_index,
        params=res.params,
        resources=res.resources,
        delta_lb=instance.delta_lb,
        epsilon=acc.epsilon,
        unsound=res.unsound,
        alpha=alpha,
        delta_eff=d_eff,
        floored=floored,
    )
