"""Per-stage and combined quantum/classical cost records."""

from __future__ import annotations

from dataclasses import dataclass

from .backend import EvolutionMeter


@dataclass(frozen=True)
class StageCost:
    t_max: float = 0.0
    t_total: float = 0.0
    n_tests: int = 0
    classical_ops: int = 0

    @classmethod
    def from_meter(cls, meter: EvolutionMeter, classical_ops: int = 0) -> "StageCost":
        return cls(meter.max_abs_t, meter.total_abs_t, meter.num_tests, classical_ops)


@dataclass(frozen=True)
class ResourceReport:
    """Evolution times in units of applications of c-exp(2 pi i H).

    Top-level fields combine both stages; ``coarse`` and ``main`` break them down.
    """

    t_max: float
    t_total: float
    n_tests: int
    classical_ops: int
    coarse: StageCost
    main: StageCost

    def __post_init__(self):
        if min(self.t_max, self.t_total, self.n_tests, self.classical_ops) < 0:
            raise ValueError("resource counts must be nonnegative")
        if self.n_tests % 2:
            raise ValueError("Hadamard tests come in Re/Im pairs")

    @classmethod
    def combine(cls, coarse: StageCost, main: StageCost) -> "ResourceReport":
        return cls(
            t_max=max(coarse.t_max, main.t_max),
            t_total=coarse.t_total + main.t_total,
            n_tests=coarse.n_tests + main.n_tests,
            classical_ops=coarse.classical_ops + main.classical_ops,
            coarse=coarse,
            main=main,
        )
