"""Acceptance criteria as callable checks, shared by the test suite and ``selftest``.

Each check returns a :class:`CriterionResult`. Production code is always
reached through module attributes so tests can patch it (the mutation test
corrupts ``GaussianDerivativeFilter.l1_norm`` and expects a failure).
"""

from __future__ import annotations

import contextlib
import io
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import coarse, conveval, engine, filters, oracles, resources, spectral, streams
from .backend import ExactSpectralBackend

DEMO_EPSILON = 0.002
DEMO_DELTA = 0.1
ALPHAS = (0.0, 0.25, 0.5, 0.75, 1.0)
SWEEP_SEEDS = tuple(range(10))
EPSILON_SWEEP = (0.003, 0.0045, 0.006, 0.009)
EPSILON_SWEEP_SEEDS = tuple(range(5))


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _seed(*key: int) -> np.random.SeedSequence:
    return streams.child(20240917, *key)


def demo_instance() -> spectral.ProblemInstance:
    return spectral.load_instance(spectral.shipped_instance_path("demo"))


def _binomial_cap(p: float, n: int, k: float = 3.0) -> float:
    return p + k * math.sqrt(p * (1 - p) / n)


# --- 1 ----------------------------------------------------------------------

TABLE1_TARGETS = {"EC": (0.244, 43.0, 16.0), "PF6-": (0.448, 78.0, 28.0)}


def table1_reproduction() -> tuple[bool, str]:
    ok, parts = True, []
    for name, (gap, qpe, lt22) in TABLE1_TARGETS.items():
        vs_qpe, vs_lt22, t = resources.reduction_factors(gap, 1e-3, 1e-3)
        row_ok = abs(vs_qpe / qpe - 1) <= 0.2 and abs(vs_lt22 / lt22 - 1) <= 0.2
        ok &= row_ok
        parts.append(f"{name} T={t:.2f} vs_qpe={vs_qpe:.1f}/{qpe:g} vs_lt22={vs_lt22:.1f}/{lt22:g}")
    return ok, "; ".join(parts)


# --- 2 ----------------------------------------------------------------------


def end_to_end_contract(runs: int = 50, need: int = 42) -> tuple[bool, str]:
    inst = demo_instance()
    acc = spectral.Accuracy(DEMO_EPSILON, DEMO_DELTA)
    e0 = inst.measure.ground_energy
    hits, worst = 0, 0.0
    for s in range(runs):
        r = engine.run_gsee(inst, acc, _seed(2, s))
        err = abs(r.estimate - e0)
        worst = max(worst, err)
        hits += err <= acc.epsilon
    return hits >= need, f"{hits}/{runs} within eps (need {need}); worst error {worst:.2e}"


# --- 3 ----------------------------------------------------------------------


def _demo_filter() -> filters.GaussianDerivativeFilter:
    inst = demo_instance()
    sigma = filters.choose_sigma(inst.delta_lb, DEMO_EPSILON, inst.eta_lb)
    T = filters.choose_band_limit(sigma, engine.eps_tilde(DEMO_EPSILON, inst.eta_lb, sigma))
    return filters.GaussianDerivativeFilter(sigma, T)


def unbiasedness(trials: int = 100, samples: int = 10_000) -> tuple[bool, str]:
    inst = demo_instance()
    filt = _demo_filter()
    backend = ExactSpectralBackend(inst.measure)
    e0, s = inst.measure.ground_energy, filt.sigma
    xs = e0 + s * np.array([-0.5, -0.25, 0.0, 0.25, 0.5])
    vals = np.empty((trials, xs.size))
    for k in range(trials):
        fs = conveval.init(backend, filt, 1.0, 0.5, xs.size, _seed(3, k), num_samples=samples)
        vals[k] = fs.eval_many(xs)
    ref = oracles.convolution_exact(filt, inst.measure, xs)
    se = vals.std(axis=0, ddof=1) / math.sqrt(trials)
    z = np.abs(vals.mean(axis=0) - ref) / se
    return bool(np.all(z <= 5.0)), f"max |mean - exact| / SE = {z.max():.2f} over {xs.size} points"


# --- 4 ----------------------------------------------------------------------


def hoeffding_envelope(trials: int = 200, eps1: float = 20.0, delta1: float = 0.1, M: int = 10) -> tuple[bool, str]:
    inst = demo_instance()
    filt = _demo_filter()
    backend = ExactSpectralBackend(inst.measure)
    xs = np.linspace(0.25, 0.6, M)
    ref = oracles.truncated_convolution_quadrature(filt, inst.measure, xs)
    S = conveval.required_samples(filt.l1_norm(), eps1, delta1, M)
    misses = 0
    for k in range(trials):
        fs = conveval.init(backend, filt, eps1, delta1, M, _seed(4, k))
        if fs.size != S:
            return False, f"init drew {fs.size} samples, expected {S}"
        misses += bool(np.any(np.abs(fs.eval_many(xs) - ref) > eps1))
    cap = _binomial_cap(delta1, trials)
    rate = misses / trials
    return rate <= cap, f"miss rate {rate:.3f} (cap {cap:.3f}) at S={S}"


# --- 5 ----------------------------------------------------------------------


def separation_bounds(instances: int = 100, points: int = 2001) -> tuple[bool, str]:
    rng = np.random.default_rng(_seed(5))
    c = spectral.SEPARATION_CONST
    violations = 0
    for _ in range(instances):
        inst, eps = oracles.random_valid_instance(rng)
        m = inst.measure
        sigma = filters.choose_sigma(inst.delta_lb, eps, inst.eta_lb)
        if eps > c * min(sigma, 0.2 * inst.delta_lb) * (1 + 1e-12):
            return False, f"generator produced inadmissible eps={eps}"
        g = filters.GaussianDerivativeFilter(sigma, 1.0)
        e0, p0 = m.ground_energy, m.ground_weight
        unit = eps * p0 / (filters.SQRT_2PI * sigma**3)
        inner = np.linspace(e0 - 0.5 * eps, e0 + 0.5 * eps, points)
        left = np.linspace(e0 - 0.5 * sigma, e0 - eps, points)[:-1]
        right = np.linspace(e0 + eps, e0 + 0.5 * sigma, points)[1:]
        near = np.abs(oracles.convolution_exact(g, m, inner))
        far = np.abs(oracles.convolution_exact(g, m, np.concatenate([left, right])))
        violations += int(np.sum(near >= 0.6 * unit)) + int(np.sum(far <= 0.8 * unit))
    return violations == 0, f"{violations} violations over {instances} instances"


# --- 6 ----------------------------------------------------------------------


def band_limit_truncation(pairs: int = 20, points: int = 10_000) -> tuple[bool, str]:
    rng = np.random.default_rng(_seed(6))
    worst = 0.0
    for _ in range(pairs):
        sigma = float(10 ** rng.uniform(-2, 0))
        # eps1 relative to the filter's peak height, kept inside the formula's domain
        eps1 = float(10 ** rng.uniform(-4, -0.5)) / sigma**2
        T = filters.choose_band_limit(sigma, eps1)
        filt = filters.GaussianDerivativeFilter(sigma, T)
        xs = np.linspace(-10 * sigma, 10 * sigma, points)
        gap = np.max(np.abs(oracles.convolution_exact(filt, _point_mass(), xs) - oracles.truncated_filter_quadrature(filt, xs)))
        worst = max(worst, gap / (eps1 / 2))
        # convolution form on a random measure
        inst, _ = oracles.random_valid_instance(rng)
        ys = inst.measure.ground_energy + np.linspace(-5 * sigma, 5 * sigma, 101)
        cgap = np.max(
            np.abs(
                oracles.convolution_exact(filt, inst.measure, ys)
                - oracles.truncated_convolution_quadrature(filt, inst.measure, ys)
            )
        )
        worst = max(worst, cgap / (eps1 / 2))
    return worst <= 1.0, f"max deviation / (eps1/2) = {worst:.3g}"


def _point_mass() -> spectral.SpectralMeasure:
    return spectral.SpectralMeasure((0.0,), (1.0,))


# --- 7 ----------------------------------------------------------------------


def l1_closed_form(pairs: int = 50) -> tuple[bool, str]:
    rng = np.random.default_rng(_seed(7))
    worst_rel, over_bound = 0.0, 0
    for _ in range(pairs):
        sigma = float(10 ** rng.uniform(-2, 0.5))
        T = float(10 ** rng.uniform(-1, 1.5)) / sigma
        filt = filters.GaussianDerivativeFilter(sigma, T)
        closed = filt.l1_norm()
        quad = oracles.l1_quadrature(filt)
        over_bound += closed > 4.0 / (math.pi * sigma**2)
        worst_rel = max(worst_rel, abs(closed - quad) / quad)
    ok = over_bound == 0 and worst_rel <= 1e-9
    return ok, f"max relative error {worst_rel:.2e}; {over_bound} above 4/(pi sigma^2)"


# --- 8, 9 -------------------------------------------------------------------

_sweep_cache: dict = {}


def _alpha_sweep():
    if "rows" not in _sweep_cache:
        inst = demo_instance()
        acc = spectral.Accuracy(DEMO_EPSILON, DEMO_DELTA)
        seeds = [int(_seed(9, s).generate_state(1)[0]) for s in SWEEP_SEEDS]
        _sweep_cache["rows"] = resources.tradeoff_table(inst, acc, ALPHAS, seeds)
    return _sweep_cache["rows"]


def scaling_slopes() -> tuple[bool, str]:
    rows = _alpha_sweep()
    s_max = resources.tradeoff_slopes(rows)["t_max_vs_inv_delta"]
    inst = demo_instance()
    seeds = [int(_seed(8, s).generate_state(1)[0]) for s in EPSILON_SWEEP_SEEDS]
    _, s_tot = resources.epsilon_sweep(inst, EPSILON_SWEEP, DEMO_DELTA, seeds)
    ok = 0.85 <= s_max <= 1.15 and 1.7 <= s_tot <= 2.3
    return ok, f"t_max vs 1/delta_eff slope {s_max:.3f} in [0.85, 1.15]; t_total vs 1/eps slope {s_tot:.3f} in [1.7, 2.3]"


def alpha_monotonicity() -> tuple[bool, str]:
    rows = _alpha_sweep()
    tmax = [np.mean([r.t_max for r in rows if r.alpha == a]) for a in ALPHAS]
    ttot = [np.mean([r.t_total for r in rows if r.alpha == a]) for a in ALPHAS]
    ok = all(np.diff(tmax) >= 0) and all(np.diff(ttot) <= 0)
    return ok, "mean t_max " + ", ".join(f"{v:.1f}" for v in tmax) + "; mean t_total " + ", ".join(
        f"{v:.3g}" for v in ttot
    )


# --- 10 ---------------------------------------------------------------------


def coarse_contract(runs: int = 100, need: int = 95) -> tuple[bool, str]:
    ok, parts = True, []
    for idx, name in enumerate(spectral.SHIPPED_INSTANCES):
        inst = spectral.load_instance(spectral.shipped_instance_path(name))
        sigma = filters.choose_sigma(inst.delta_lb, DEMO_EPSILON, inst.eta_lb)
        T_main = filters.choose_band_limit(sigma, engine.eps_tilde(DEMO_EPSILON, inst.eta_lb, sigma))
        backend = ExactSpectralBackend(inst.measure)
        hits, depth = 0, 0.0
        for s in range(runs):
            r = coarse.coarse_estimate(backend, inst, sigma, 0.05, _seed(10, idx, s))
            hits += abs(r.estimate - inst.measure.ground_energy) <= sigma / 4
            depth = max(depth, r.meter.max_abs_t)
        ok &= hits >= need and depth <= 10 * T_main
        parts.append(f"{name}: {hits}/{runs} within sigma/4, coarse depth {depth / T_main:.2f}x main T")
    return ok, "; ".join(parts)


# --- 11 ---------------------------------------------------------------------


def determinism() -> tuple[bool, str]:
    from . import cli

    def outputs(args, workers):
        with tempfile.TemporaryDirectory() as d, contextlib.redirect_stdout(io.StringIO()):
            code = cli.main([*args, "--out", d, "--workers", str(workers)])
            if code != 0:
                raise RuntimeError(f"{' '.join(args)} exited {code}")
            return {p.name: p.read_bytes() for p in sorted(Path(d).iterdir())}

    commands = [
        ["run", "--instance", "demo", "--epsilon", "0.002", "--delta", "0.1", "--seed", "7"],
        ["run", "--instance", "far_excited", "--epsilon", "0.004", "--delta", "0.1", "--alpha", "0.5", "--seed", "3"],
        ["sweep-alpha", "--instance", "demo", "--epsilon", "0.004", "--alphas", "0,1", "--seeds", "1,2"],
    ]
    bad = []
    for args in commands:
        a, b, c = outputs(args, 1), outputs(args, 3), outputs(args, 3)
        if not (a == b == c) or not a:
            bad.append(args[0])
    with tempfile.TemporaryDirectory() as d1, tempfile.TemporaryDirectory() as d2, contextlib.redirect_stdout(
        io.StringIO()
    ):
        cli.main(["table1", "--out", d1])
        cli.main(["table1", "--out", d2])
        if Path(d1, "table1.csv").read_bytes() != Path(d2, "table1.csv").read_bytes():
            bad.append("table1")
    n = len(commands) + 1
    return not bad, f"{n - len(bad)}/{n} commands byte-identical across repeats and worker counts" + (
        f"; differing: {', '.join(bad)}" if bad else ""
    )


CRITERIA: dict[int, tuple[str, Callable[[], tuple[bool, str]]]] = {
    1: ("table1-reproduction", table1_reproduction),
    2: ("end-to-end-contract", end_to_end_contract),
    3: ("unbiasedness", unbiasedness),
    4: ("hoeffding-envelope", hoeffding_envelope),
    5: ("separation-bounds", separation_bounds),
    6: ("band-limit-truncation", band_limit_truncation),
    7: ("l1-closed-form", l1_closed_form),
    8: ("scaling-slopes", scaling_slopes),
    9: ("alpha-monotonicity", alpha_monotonicity),
    10: ("coarse-contract", coarse_contract),
    11: ("determinism", determinism),
}

# every criterion fits the two-minute selftest budget (about 30 s on one core)
FAST_SUBSET = tuple(sorted(CRITERIA))


def run_criterion(number: int) -> CriterionResult:
    name, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failure, reported with its cause
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - start)
