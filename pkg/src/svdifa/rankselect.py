"""Scree diagnostic: standardized second-stage singular values and the
gap statistics used to pick the number of factors.

The pipeline is run with a deliberately generous input dimension; a gap
between consecutive standardized singular values marks the true number of
factors. The automatic pick maximizes the ratio of consecutive values, a
heuristic rendering of the visual gap; both ratio and difference series
are returned so users can inspect the plot themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .estimator import (
    EstimationConfig,
    ResponseMatrix,
    estimate_binary,
    estimate_missing,
    estimate_ordinal,
)

RATIO_CAP = 1e12


@dataclass(frozen=True)
class ScreeResult:
    standardized_values: np.ndarray  # sigma_k / sqrt(NJ), k = 1..input_dim
    gap_ratios: np.ndarray  # sigma_k / sigma_{k+1}, k = 1..input_dim-1
    gap_diffs: np.ndarray
    suggested_k: int


def default_input_dim(n_persons: int, n_items: int) -> int:
    return min(15, min(n_persons, n_items) - 2)


def scree(data: ResponseMatrix, config: EstimationConfig) -> ScreeResult:
    """Run the estimator at the configured input dimension and extract the
    scree series from the second-stage singular values."""
    k_dag = config.working_dim
    if k_dag < 2:
        raise ConfigError(f"input dimension must be >= 2, got {k_dag}")
    n, j = data.shape
    if k_dag + 1 > min(n, j):
        raise ConfigError(
            f"input dimension {k_dag} too large for a {n}x{j} matrix"
        )
    run_config = replace(config, n_factors=k_dag, input_dim=None)
    if data.n_categories > 1:
        estimate = estimate_ordinal(data, run_config)
    elif data.is_complete:
        estimate = estimate_binary(data, run_config)
    else:
        estimate = estimate_missing(data, run_config)

    values = estimate.singular_values_std[:k_dag]
    with np.errstate(divide="ignore"):
        ratios = np.where(
            values[1:] < 1e-12, RATIO_CAP, values[:-1] / np.maximum(values[1:], 1e-300)
        )
    ratios = np.minimum(ratios, RATIO_CAP)
    diffs = values[:-1] - values[1:]
    suggested = int(np.argmax(ratios)) + 1  # argmax takes the first maximum
    return ScreeResult(
        standardized_values=values,
        gap_ratios=ratios,
        gap_diffs=diffs,
        suggested_k=suggested,
    )
