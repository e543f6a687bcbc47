"""Depth baselines, reduction factors, trade-off sweeps and their CSV reports."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .costs import ResourceReport, StageCost
from .engine import eps_tilde, run_gsee, run_gsee_alpha
from .filters import choose_band_limit, choose_sigma
from .spectral import Accuracy, ProblemInstance

__all__ = [
    "ResourceReport",
    "StageCost",
    "qpe_baseline_depth",
    "lt22_baseline_depth",
    "reduction_factors",
    "TABLE1_MOLECULES",
    "table1_rows",
    "TradeoffRow",
    "tradeoff_table",
    "tradeoff_slopes",
    "EpsilonRow",
    "epsilon_sweep",
    "loglog_slope",
    "write_csv",
]

# gap lower bounds (Hartree) of the two electrolyte molecules
TABLE1_MOLECULES = {"EC": 0.244, "PF6-": 0.448}


def qpe_baseline_depth(epsilon: float) -> float:
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return 2.0 / epsilon


def lt22_baseline_depth(epsilon: float) -> float:
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return 2.0 / (math.pi * epsilon)


def reduction_factors(delta_lb: float, epsilon: float, eta_lb: float) -> tuple[float, float, float]:
    """Returns (vs_qpe, vs_lt22, t_max_predicted) for the main-stage band limit."""
    sigma = choose_sigma(delta_lb, epsilon, eta_lb)
    t_pred = choose_band_limit(sigma, eps_tilde(epsilon, eta_lb, sigma))
    return qpe_baseline_depth(epsilon) / t_pred, lt22_baseline_depth(epsilon) / t_pred, t_pred


def table1_rows(epsilon: float = 1e-3, eta_lb: float = 1e-3, gaps: dict | None = None) -> list[dict]:
    rows = []
    for name, d in (gaps or TABLE1_MOLECULES).items():
        vs_qpe, vs_lt22, t = reduction_factors(d, epsilon, eta_lb)
        rows.append(
            dict(molecule=name, delta_lb=d, epsilon=epsilon, eta=eta_lb, t_max=t, vs_qpe=vs_qpe, vs_lt22=vs_lt22)
        )
    return rows


@dataclass(frozen=True)
class TradeoffRow:
    alpha: float
    delta_eff: float
    t_max: float
    t_total: float
    n_tests: int
    success: bool
    seed: int
    floored: bool = False

    FIELDS = ("alpha", "delta_eff", "t_max", "t_total", "n_tests", "success", "seed")

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.FIELDS}


def tradeoff_table(
    instance: ProblemInstance,
    acc: Accuracy,
    alphas: Sequence[float],
    seeds: Sequence[int],
    workers: int = 1,
) -> list[TradeoffRow]:
    """One row per (alpha, seed); costs are the main stage's meters."""
    e0 = instance.measure.ground_energy
    rows = []
    for a in alphas:
        for s in seeds:
            r = run_gsee_alpha(instance, acc, a, s, workers=workers)
            main = r.resources.main
            rows.append(
                TradeoffRow(
                    alpha=float(a),
                    delta_eff=float(r.delta_eff),
                    t_max=main.t_max,
                    t_total=main.t_total,
                    n_tests=main.n_tests,
                    success=abs(r.estimate - e0) <= acc.epsilon,
                    seed=int(s),
                    floored=r.floored,
                )
            )
    return rows


def loglog_slope(x: Iterable[float], y: Iterable[float]) -> float:
    """Least-squares slope of log y against log x."""
    lx, ly = np.log(np.asarray(list(x), float)), np.log(np.asarray(list(y), float))
    if lx.size < 2 or np.ptp(lx) == 0:
        raise ValueError("need at least two distinct x values")
    return float(np.polyfit(lx, ly, 1)[0])


def _means_by(rows, key, field):
    groups: dict[float, list[float]] = {}
    for r in rows:
        groups.setdefault(getattr(r, key), []).append(getattr(r, field))
    return {k: float(np.mean(v)) for k, v in groups.items()}


def tradeoff_slopes(rows: Sequence[TradeoffRow]) -> dict:
    """Slopes of seed-averaged log t_max vs log(1/delta_eff) and log t_total vs log delta_eff."""
    tmax = _means_by(rows, "delta_eff", "t_max")
    ttot = _means_by(rows, "delta_eff", "t_total")
    d = sorted(tmax)
    return {
        "t_max_vs_inv_delta": loglog_slope([1 / v for v in d], [tmax[v] for v in d]),
        "t_total_vs_delta": loglog_slope(d, [ttot[v] for v in d]),
    }


@dataclass(frozen=True)
class EpsilonRow:
    epsilon: float
    t_max: float
    t_total: float
    n_tests: int
    success: bool
    seed: int


def epsilon_sweep(
    instance: ProblemInstance,
    epsilons: Sequence[float],
    delta_fail: float,
    seeds: Sequence[int],
    workers: int = 1,
) -> tuple[list[EpsilonRow], float]:
    """Rows at fixed gap bound, plus the slope of log t_total vs log(1/eps)."""
    e0 = instance.measure.ground_energy
    rows = []
    for eps in epsilons:
        for s in seeds:
            r = run_gsee(instance, Accuracy(eps, delta_fail), s, workers=workers)
            m = r.resources.main
            rows.append(EpsilonRow(eps, m.t_max, m.t_total, m.n_tests, abs(r.estimate - e0) <= eps, int(s)))
    means = _means_by(rows, "epsilon", "t_total")
    e = sorted(means)
    return rows, loglog_slope([1 / v for v in e], [means[v] for v in e])


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_csv(path, fields: Sequence[str], rows: Iterable[dict], params: dict) -> None:
    """CSV with a leading ``# key=value ...`` comment line, then header and rows."""
    meta = " ".join(f"{k}={_fmt(v)}" for k, v in params.items())
    with open(path, "w", newline="") as fh:
        fh.write(f"# lowdepth_gsee {__version__} {meta}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in fields])
