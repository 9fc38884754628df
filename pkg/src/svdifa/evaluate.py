"""Rotation-invariant loading loss and probability recovery error.

Loadings are identifiable only up to an invertible (oblique) rotation, so
the loss aligns the estimate to the reference with the least-squares
minimizer over all K x K matrices before taking the scaled Frobenius
discrepancy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class AlignmentResult:
    loss: float
    rotation: np.ndarray
    aligned_loadings: np.ndarray


def alignment_loss(reference: np.ndarray, estimate: np.ndarray) -> AlignmentResult:
    """min over K x K matrices O of ||reference - estimate @ O||_F^2 / (J K).

    The minimizer is the least-squares solution; rank-deficient estimates
    fall back to the minimum-norm solution via the pseudoinverse.
    """
    reference = np.asarray(reference, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    if reference.ndim == 1:
        reference = reference[:, np.newaxis]
    if estimate.ndim == 1:
        estimate = estimate[:, np.newaxis]
    if reference.shape != estimate.shape:
        raise InputError(
            f"shape mismatch: reference {reference.shape} vs estimate {estimate.shape}"
        )
    j, k = reference.shape
    if k < 1:
        raise InputError("need at least one factor")
    rotation, *_ = np.linalg.lstsq(estimate, reference, rcond=None)
    aligned = estimate @ rotation
    loss = float(np.sum((reference - aligned) ** 2)) / (j * k)
    return AlignmentResult(loss=loss, rotation=rotation, aligned_loadings=aligned)


def probability_rmse(true_probs: np.ndarray, estimated_probs: np.ndarray) -> float:
    """(1 / NJ) * sum of squared entrywise probability errors."""
    true_probs = np.asarray(true_probs, dtype=float)
    estimated_probs = np.asarray(estimated_probs, dtype=float)
    if true_probs.shape != estimated_probs.shape:
        raise InputError(
            f"shape mismatch: {true_probs.shape} vs {estimated_probs.shape}"
        )
    return float(np.mean((true_probs - estimated_probs) ** 2))
