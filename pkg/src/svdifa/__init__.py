"""SVD-based exploratory item factor analysis."""

from .errors import ConfigError, InputError, NumericalError, SvdIfaError
from .estimator import (
    EstimationConfig,
    IfaEstimate,
    ResponseMatrix,
    TruncationPolicy,
    estimate_binary,
    estimate_missing,
    estimate_ordinal,
    recover_probability_matrix,
)
from .evaluate import AlignmentResult, alignment_loss, probability_rmse
from .links import LOGISTIC, PROBIT, LinkFunction, LinkKind
from .rankselect import ScreeResult, scree
from .simulate import (
    GroundTruth,
    OrdinalGroundTruth,
    SimulationScenario,
    generate_items,
    generate_ordinal,
    generate_responses,
    generate_truth,
    simulate_dataset,
)

__all__ = [
    "AlignmentResult",
    "ConfigError",
    "EstimationConfig",
    "GroundTruth",
    "IfaEstimate",
    "InputError",
    "LOGISTIC",
    "LinkFunction",
    "LinkKind",
    "NumericalError",
    "OrdinalGroundTruth",
    "PROBIT",
    "ResponseMatrix",
    "ScreeResult",
    "SimulationScenario",
    "SvdIfaError",
    "TruncationPolicy",
    "alignment_loss",
    "estimate_binary",
    "estimate_missing",
    "estimate_ordinal",
    "generate_items",
    "generate_ordinal",
    "generate_responses",
    "generate_truth",
    "probability_rmse",
    "recover_probability_matrix",
    "scree",
    "simulate_dataset",
]

__version__ = "0.1.0"
