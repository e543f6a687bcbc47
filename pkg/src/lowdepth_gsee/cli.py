"""Command-line entry point: ``lowdepth-gsee {run,table1,sweep-alpha,selftest}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__, acceptance, engine, resources, spectral
from .coarse import CoarseNotFound

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_COARSE = 3

RESULT_FIELDS = (
    "estimate", "e0_true", "error", "success", "unsound", "alpha", "delta_eff", "floored",
    "sigma", "eps_tilde", "band_limit", "grid_size", "coarse_estimate",
    "t_max", "t_total", "n_tests", "classical_ops",
    "coarse_t_max", "coarse_t_total", "coarse_n_tests",
    "main_t_max", "main_t_total", "main_n_tests",
)  # fmt: skip
PROFILE_FIELDS = ("x", "h")
TABLE1_FIELDS = ("molecule", "delta_lb", "epsilon", "eta", "t_max", "vs_qpe", "vs_lt22")
SLOPE_FIELDS = ("quantity", "slope")


def _positive(kind):
    def parse(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"{text} must be positive")
        return v

    return parse


def _probability(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"{text} must lie in (0, 1)")
    return v


def _unit_interval(text):
    v = float(text)
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError(f"{text} must lie in [0, 1]")
    return v


def _float_list(text):
    return [_unit_interval(t) for t in text.split(",") if t]


def _int_list(text):
    """Comma list of integers or a range ``a:b``."""
    if ":" in text:
        a, b = text.split(":")
        return list(range(int(a), int(b)))
    return [int(t) for t in text.split(",") if t]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lowdepth-gsee", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--instance", required=True, help="instance JSON path or shipped name (demo, far_excited)")
        sp.add_argument("--epsilon", type=_positive(float), required=True)
        sp.add_argument("--delta", type=_probability, default=0.1, help="failure probability")
        sp.add_argument("--workers", type=_positive(int), default=1)
        sp.add_argument("--out", type=Path, default=Path("."))

    r = sub.add_parser("run", help="estimate the ground energy of one instance")
    common(r)
    r.add_argument("--alpha", type=_unit_interval, default=0.0)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--allow-invalid-epsilon", action="store_true")

    t = sub.add_parser("table1", help="depth reduction factors for the electrolyte gaps")
    t.add_argument("--epsilon", type=_positive(float), default=1e-3)
    t.add_argument("--eta", type=_probability, default=1e-3)
    t.add_argument("--delta-lb", type=_positive(float), action="append", help="custom gap(s), replaces the built-ins")
    t.add_argument("--out", type=Path, default=Path("."))
    t.add_argument("--workers", type=_positive(int), default=1, help=argparse.SUPPRESS)

    s = sub.add_parser("sweep-alpha", help="depth / total-time trade-off sweep")
    common(s)
    s.add_argument("--alphas", type=_float_list, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    s.add_argument("--seeds", type=_int_list, default=list(range(10)))

    st = sub.add_parser("selftest", help="run the fast acceptance subset")
    st.add_argument("--list", action="store_true", help="print criterion names and exit")
    return p


def _cmd_run(a, parser) -> int:
    inst = _load(a, parser)
    acc = spectral.Accuracy(a.epsilon, a.delta)
    try:
        res = engine.run_gsee_alpha(
            inst, acc, a.alpha, a.seed, workers=a.workers, allow_invalid_epsilon=a.allow_invalid_epsilon
        )
    except engine.PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CoarseNotFound as exc:
        print(f"coarse stage failed: {exc}", file=sys.stderr)
        return EXIT_COARSE

    e0 = inst.measure.ground_energy
    rep, prm = res.resources, res.params
    row = dict(
        estimate=res.estimate, e0_true=e0, error=abs(res.estimate - e0),
        success=abs(res.estimate - e0) <= a.epsilon, unsound=res.unsound,
        alpha=res.alpha, delta_eff=res.delta_eff, floored=res.floored,
        sigma=prm.sigma, eps_tilde=prm.eps_tilde, band_limit=prm.band_limit,
        grid_size=prm.grid_size, coarse_estimate=prm.coarse_estimate,
        t_max=rep.t_max, t_total=rep.t_total, n_tests=rep.n_tests, classical_ops=rep.classical_ops,
        coarse_t_max=rep.coarse.t_max, coarse_t_total=rep.coarse.t_total, coarse_n_tests=rep.coarse.n_tests,
        main_t_max=rep.main.t_max, main_t_total=rep.main.t_total, main_n_tests=rep.main.n_tests,
    )  # fmt: skip
    meta = dict(instance=a.instance, epsilon=a.epsilon, delta=a.delta, alpha=a.alpha, seed=a.seed)
    a.out.mkdir(parents=True, exist_ok=True)
    resources.write_csv(a.out / "result.csv", RESULT_FIELDS, [row], meta)
    profile = [dict(x=float(x), h=float(h)) for x, h in zip(prm.grid, res.conv_estimates)]
    resources.write_csv(a.out / "profile.csv", PROFILE_FIELDS, profile, meta)
    flag = " (UNSOUND)" if res.unsound else ""
    print(f"estimate {res.estimate:.10g}  error {row['error']:.3g}{flag}  -> {a.out}")
    return EXIT_OK


def _cmd_table1(a) -> int:
    gaps = None
    if a.delta_lb:
        gaps = {f"custom{i + 1}": d for i, d in enumerate(a.delta_lb)}
    try:
        rows = resources.table1_rows(a.epsilon, a.eta, gaps)
    except ValueError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    a.out.mkdir(parents=True, exist_ok=True)
    resources.write_csv(a.out / "table1.csv", TABLE1_FIELDS, rows, dict(epsilon=a.epsilon, eta=a.eta))
    for r in rows:
        print(f"{r['molecule']:>8}  T={r['t_max']:.3f}  vs QPE {r['vs_qpe']:.1f}x  vs LT22 {r['vs_lt22']:.1f}x")
    return EXIT_OK


def _cmd_sweep(a, parser) -> int:
    inst = _load(a, parser)
    acc = spectral.Accuracy(a.epsilon, a.delta)
    try:
        rows = resources.tradeoff_table(inst, acc, a.alphas, a.seeds, workers=a.workers)
    except engine.PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CoarseNotFound as exc:
        print(f"coarse stage failed: {exc}", file=sys.stderr)
        return EXIT_COARSE
    meta = dict(
        instance=a.instance, epsilon=a.epsilon, delta=a.delta,
        alphas=",".join(f"{x:g}" for x in a.alphas), seeds=",".join(map(str, a.seeds)),
    )  # fmt: skip
    a.out.mkdir(parents=True, exist_ok=True)
    resources.write_csv(a.out / "tradeoff.csv", resources.TradeoffRow.FIELDS, [r.as_dict() for r in rows], meta)
    if len({r.delta_eff for r in rows}) >= 2:
        slopes = resources.tradeoff_slopes(rows)
        resources.write_csv(
            a.out / "slopes.csv", SLOPE_FIELDS, [dict(quantity=k, slope=v) for k, v in slopes.items()], meta
        )
        for k, v in slopes.items():
            print(f"{k}: {v:.3f}")
    print(f"{len(rows)} rows -> {a.out / 'tradeoff.csv'}")
    return EXIT_OK



def _cmd_selftest(a) -> int:
    numbers = list(acceptance.FAST_SUBSET)
    if a.list:
        for n in numbers:
            print(f"{n:2d} {acceptance.CRITERIA[n][0]}")
        return EXIT_OK
    failed = 0
    for n in numbers:
        res = acceptance.run_criterion(n)
        print(res.line(), flush=True)
        failed += not res.passed
    print(f"{len(numbers) - failed}/{len(numbers)} criteria passed")
    return 1 if failed else EXIT_OK


def _load(a, parser) -> spectral.ProblemInstance:
    try:
        return spectral.resolve_instance(a.instance)
    except spectral.InstanceError as exc:
        parser.exit(EXIT_PRECONDITION, f"{parser.prog}: error: {exc}\n")


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if a.command == "run":
        return _cmd_run(a, parser)
    if a.command == "table1":
        return _cmd_table1(a)
    if a.command == "sweep-alpha":
        return _cmd_sweep(a, parser)
    return _cmd_selftest(a)


if __name__ == "__main__":
    sys.exit(main())
