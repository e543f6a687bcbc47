"""Ground state energy estimation with Gaussian-derivative filters at reduced circuit depth."""

__version__ = "0.1.0"

from .spectral import (  # noqa: E402
    Accuracy,
    InstanceError,
    ProblemInstance,
    SpectralMeasure,
    from_dense_hamiltonian,
    load_instance,
    max_admissible_epsilon,
    validate_epsilon,
)
from .filters import GaussianDerivativeFilter, GaussianFilter, choose_band_limit, choose_sigma  # noqa: E402
from .backend import ExactSpectralBackend, EvolutionMeter  # noqa: E402
from .conveval import FourierSampleSet, required_samples  # noqa: E402
from .coarse import CoarseNotFound, coarse_estimate  # noqa: E402
from .engine import GseeParams, GseeResult, PreconditionError, run_gsee, run_gsee_alpha  # noqa: E402
from .costs import ResourceReport, StageCost  # noqa: E402
from .resources import (  # noqa: E402
    lt22_baseline_depth,
    qpe_baseline_depth,
    reduction_factors,
    tradeoff_table,
)

__all__ = [
    "Accuracy",
    "CoarseNotFound",
    "EvolutionMeter",
    "ExactSpectralBackend",
    "FourierSampleSet",
    "GaussianDerivativeFilter",
    "GaussianFilter",
    "GseeParams",
    "GseeResult",
    "InstanceError",
    "PreconditionError",
    "ProblemInstance",
    "ResourceReport",
    "SpectralMeasure",
    "StageCost",
    "choose_band_limit",
    "choose_sigma",
    "coarse_estimate",
    "from_dense_hamiltonian",
    "load_instance",
    "lt22_baseline_depth",
    "max_admissible_epsilon",
    "qpe_baseline_depth",
    "reduction_factors",
    "required_samples",
    "run_gsee",
    "run_gsee_alpha",
    "tradeoff_table",
    "validate_epsilon",
]
