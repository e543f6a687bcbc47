"""Spectral measures, problem instances and the accuracy preconditions."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

#: c = sqrt(2 ln(10/9)), the constant in the admissible-accuracy condition.
SEPARATION_CONST = math.sqrt(2.0 * math.log(10.0 / 9.0))

DENSE_DIM_CAP = 64
MERGE_TOL = 1e-12


class InstanceError(ValueError):
    """Raised for malformed spectra, instances or instance files."""


@dataclass(frozen=True)
class SpectralMeasure:
    """Discrete measure sum_j p_j delta(x - E_j) with ascending, distinct energies."""

    energies: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.energies) == 0:
            raise InstanceError("a spectral measure needs at least one level")
        if len(self.energies) != len(self.weights):
            raise InstanceError("energies and weights differ in length")
        e = np.asarray(self.energies, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if not np.all(np.isfinite(e)) or not np.all(np.isfinite(w)):
            raise InstanceError("energies and weights must be finite")
        if np.any(np.diff(e) <= 0):
            raise InstanceError("energies must be strictly ascending")
        if np.any(w < 0):
            raise InstanceError("weights must be nonnegative")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise InstanceError(f"weights sum to {math.fsum(self.weights)!r}, not 1")
        object.__setattr__(self, "energies", tuple(float(x) for x in e))
        object.__setattr__(self, "weights", tuple(float(x) for x in w))

    @classmethod
    def from_levels(cls, levels: Sequence[tuple[float, float]]) -> "SpectralMeasure":
        levels = sorted(levels)
        return cls(tuple(e for e, _ in levels), tuple(p for _, p in levels))

    @property
    def count(self) -> int:
        return len(self.energies)

    @property
    def ground_energy(self) -> float:
        return self.energies[0]

    @property
    def ground_weight(self) -> float:
        return self.weights[0]

    @property
    def gap(self) -> float:
        """E_1 - E_0, or inf for a single level."""
        if self.count == 1:
            return math.inf
        return self.energies[1] - self.energies[0]

    @property
    def levels(self) -> list[tuple[float, float]]:
        return list(zip(self.energies, self.weights))

    def mean_energy(self) -> float:
        return math.fsum(e * p for e, p in self.levels)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.energies), np.asarray(self.weights)


def from_dense_hamiltonian(H, rho, *, dim_cap: int = DENSE_DIM_CAP) -> SpectralMeasure:
    """Spectral measure of ``H`` with weights <E_j|rho|E_j>.

    Degenerate eigenvalues (within 1e-12) are merged by summing their weights.
    """
    H = np.asarray(H, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InstanceError("H must be a square matrix")
    if rho.shape != H.shape:
        raise InstanceError(f"dimension mismatch: H {H.shape} vs rho {rho.shape}")
    if H.shape[0] > dim_cap:
        raise InstanceError(f"dimension {H.shape[0]} exceeds the cap of {dim_cap}")
    if np.max(np.abs(H - H.conj().T)) > 1e-10:
        raise InstanceError("H is not Hermitian")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise InstanceError("rho is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise InstanceError("rho must have unit trace")
    if np.min(np.linalg.eigvalsh(rho)) < -1e-10:
        raise InstanceError("rho is not positive semidefinite")

    evals, evecs = np.linalg.eigh(H)
    overlaps = np.real(np.einsum("ij,ik,kj->j", evecs.conj(), rho, evecs))
    overlaps = np.clip(overlaps, 0.0, None)

    energies: list[float] = []
    weights: list[float] = []
    for e, p in zip(evals, overlaps):
        if energies and abs(e - energies[-1]) <= MERGE_TOL:
            weights[-1] += p
        else:
            energies.append(float(e))
            weights.append(float(p))
    total = math.fsum(weights)
    weights = [p / total for p in weights]
    return SpectralMeasure(tuple(energies), tuple(weights))


@dataclass(frozen=True)
class ProblemInstance:
    """A spectral measure plus the promised gap/overlap bounds and a search window.

    A gap bound larger than the true gap is allowed but flagged by
    :attr:`gap_promise_holds`; it is needed to demonstrate what breaks when
    the promise is wrong.
    """

    measure: SpectralMeasure
    delta_lb: float
    eta_lb: float
    e_lo: float
    e_hi: float

    def __post_init__(self):
        if not self.delta_lb > 0:
            raise InstanceError("delta_lb must be positive")
        if not 0 < self.eta_lb < 1:
            raise InstanceError("eta_lb must lie in (0, 1)")
        if self.eta_lb > self.measure.ground_weight + 1e-12:
            raise InstanceError(
                f"eta_lb={self.eta_lb} exceeds the ground-state weight "
                f"{self.measure.ground_weight}"
            )
        if self.e_lo > self.measure.ground_energy or self.e_hi < self.measure.energies[-1]:
            raise InstanceError("search window [e_lo, e_hi] must contain every energy")

    @property
    def gap_promise_holds(self) -> bool:
        return self.delta_lb <= self.measure.gap

    def with_delta(self, delta_lb: float) -> "ProblemInstance":
        return ProblemInstance(self.measure, delta_lb, self.eta_lb, self.e_lo, self.e_hi)

    def to_dict(self) -> dict:
        return {
            "energies": list(self.measure.energies),
            "weights": list(self.measure.weights),
            "delta_lb": self.delta_lb,
            "eta_lb": self.eta_lb,
            "e_lo": self.e_lo,
            "e_hi": self.e_hi,
        }


@dataclass(frozen=True)
class Accuracy:
    epsilon: float
    delta_fail: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InstanceError("epsilon must be positive")
        if not 0 < self.delta_fail < 1:
            raise InstanceError("delta_fail must lie in (0, 1)")


def parse_instance(doc: dict) -> ProblemInstance:
    required = ("energies", "weights", "delta_lb", "eta_lb", "e_lo", "e_hi")
    missing = [k for k in required if k not in doc]
    if missing:
        raise InstanceError(f"instance is missing keys: {', '.join(missing)}")
    energies, weights = doc["energies"], doc["weights"]
    if not isinstance(energies, list) or not isinstance(weights, list):
        raise InstanceError("energies and weights must be arrays")
    if len(energies) != len(weights):
        raise InstanceError(
            f"energies ({len(energies)}) and weights ({len(weights)}) differ in length"
        )
    try:
        measure = SpectralMeasure(
            tuple(float(e) for e in energies), tuple(float(p) for p in weights)
        )
        return ProblemInstance(
            measure,
            float(doc["delta_lb"]),
            float(doc["eta_lb"]),
            float(doc["e_lo"]),
            float(doc["e_hi"]),
        )
    except (TypeError, ValueError) as exc:
        raise InstanceError(str(exc)) from exc


def load_instance(path) -> ProblemInstance:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise InstanceError(f"{path}: top level must be an object")
    return parse_instance(doc)


# --- admissible accuracy ----------------------------------------------------


def epsilon_condition(delta_lb: float, eta_lb: float, epsilon: float) -> bool:
    """eps <= c * min(0.9 D / sqrt(2 ln(9 D / (eps eta))), 0.2 D)."""
    arg = 9.0 * delta_lb / (epsilon * eta_lb)
    if arg <= 1.0:
        return False
    first = 0.9 * delta_lb / math.sqrt(2.0 * math.log(arg))
    return epsilon <= SEPARATION_CONST * min(first, 0.2 * delta_lb)


@dataclass(frozen=True)
class EpsilonVerdict:
    ok: bool
    epsilon: float
    max_epsilon: float


def max_admissible_epsilon(delta_lb: float, eta_lb: float) -> float:
    """Largest epsilon passing :func:`epsilon_condition` (bisection, 1e-12 relative)."""
    hi = SEPARATION_CONST * 0.2 * delta_lb
    if epsilon_condition(delta_lb, eta_lb, hi):
        return hi
    lo = hi
    while not epsilon_condition(delta_lb, eta_lb, lo):
        lo *= 0.5
    while hi - lo > 1e-12 * lo:
        mid = 0.5 * (lo + hi)
        if epsilon_condition(delta_lb, eta_lb, mid):
            lo = mid
        else:
            hi = mid
    return lo


def validate_epsilon(instance: ProblemInstance, acc: Accuracy) -> EpsilonVerdict:
    ok = epsilon_condition(instance.delta_lb, instance.eta_lb, acc.epsilon)
    bound = max_admissible_epsilon(instance.delta_lb, instance.eta_lb)
    return EpsilonVerdict(ok, acc.epsilon, bound)


def min_admissible_gap(epsilon: float, eta_lb: float) -> float:
    """Smallest gap bound for which ``epsilon`` passes the condition (bisection)."""
    hi = epsilon
    while not epsilon_condition(hi, eta_lb, epsilon):
        hi *= 2.0
    lo = hi / 2.0
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        if epsilon_condition(mid, eta_lb, epsilon):
            hi = mid
        else:
            lo = mid
    return hi


# --- shipped instances ------------------------------------------------------

SHIPPED_INSTANCES = ("demo", "far_excited")


def shipped_instance_path(name: str) -> Path:
    """Path of a bundled instance file (``demo`` or ``far_excited``)."""
    if name not in SHIPPED_INSTANCES:
        raise InstanceError(f"unknown shipped instance {name!r}; have {', '.join(SHIPPED_INSTANCES)}")
    return Path(__file__).with_name("data") / f"{name}.json"


def resolve_instance(spec: str) -> ProblemInstance:
    """Load from a file path, falling back to a shipped instance name."""
    p = Path(spec)
    if p.exists():
        return load_instance(p)
    if spec in SHIPPED_INSTANCES:
        return load_instance(shipped_instance_path(spec))
    raise InstanceError(f"{spec}: no such file or shipped instance")
