"""Shared low-rank kernel: SVD, rank thresholding, reconstruction, clamping.

The dense path (numpy LAPACK) is the correctness reference. For large inputs
(N * J > 10**7) a randomized truncated SVD is used instead; it computes at
least max(k_floor, want + 5, 50) factors and escalates if the smallest
computed singular value still clears the threshold, so the thresholding rule
sees every singular value that could matter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.utils.extmath import randomized_svd

from .errors import ConfigError, InputError, NumericalError

DENSE_LIMIT = 10_000_000
_RSVD_OVERSAMPLE = 10
_RSVD_POWER_ITER = 2


@dataclass(frozen=True)
class SvdFactors:
    """Singular triples sorted by decreasing singular value.

    left_vectors is N x r, right_vectors is J x r, singular_values has length
    r. The sign of each right vector is fixed so that its largest-magnitude
    entry is positive; the matching left vector is flipped accordingly.
    """

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @property
    def n_factors(self) -> int:
        return self.singular_values.shape[0]


@dataclass(frozen=True)
class ThresholdRule:
    """Working-rank rule: max(k_floor, #{sigma_k >= threshold})."""

    k_floor: int
    threshold: float

    def __post_init__(self):
        if self.k_floor < 2:
            raise ConfigError(f"k_floor must be >= 2, got {self.k_floor}")
        if not self.threshold > 0:
            raise ConfigError(f"threshold must be positive, got {self.threshold}")


def _fix_signs(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # flip so that each right vector's largest-magnitude entry is positive
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, v * signs


def svd(matrix: np.ndarray) -> SvdFactors:
    """Full dense SVD with the deterministic sign convention."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise InputError(f"expected a 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InputError("matrix has non-finite entries")
    try:
        u, s, vt = np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"SVD failed to converge on a {matrix.shape[0]}x{matrix.shape[1]} matrix"
        ) from exc
    u, v = _fix_signs(u, vt.T)
    return SvdFactors(singular_values=s, left_vectors=u, right_vectors=v)


def truncated_svd(
    matrix: np.ndarray,
    n_factors: int,
    seed: int = 0,
) -> SvdFactors:
    """Randomized truncated SVD of the leading n_factors triples."""
    matrix = np.asarray(matrix, dtype=float)
    if not np.all(np.isfinite(matrix)):
        raise InputError("matrix has non-finite entries")
    n_factors = min(n_factors, min(matrix.shape))
    u, s, vt = randomized_svd(
        matrix,
        n_components=n_factors,
        n_oversamples=_RSVD_OVERSAMPLE,
        n_iter=_RSVD_POWER_ITER,
        random_state=seed,
    )
    u, v = _fix_signs(u, vt.T)
    return SvdFactors(singular_values=s, left_vectors=u, right_vectors=v)


def adaptive_svd(matrix: np.ndarray, want: int, threshold: float) -> SvdFactors:
    """Dense SVD for small inputs, randomized otherwise.

    `want` is the number of factors the caller will consume (working-rank
    floor or scree input dimension); the randomized path computes a buffer
    above it and escalates while the smallest computed singular value still
    exceeds `threshold`.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.size <= DENSE_LIMIT:
        return svd(matrix)
    full = min(matrix.shape)
    n = min(max(want + 5, 50), full)
    while True:
        factors = truncated_svd(matrix, n)
        if n >= full or factors.singular_values[-1] < threshold:
            return factors
        n = min(2 * n, full)


def select_rank(factors: SvdFactors, rule: ThresholdRule) -> int:
    """Working rank: max(k_floor, count above threshold), capped at r."""
    above = int(np.count_nonzero(factors.singular_values >= rule.threshold))
    return min(max(rule.k_floor, above), factors.n_factors)


def truncated_reconstruction(
    factors: SvdFactors, rank: int, scale: float = 1.0
) -> np.ndarray:
    """scale * sum_{k<=rank} sigma_k u_k v_k'."""
    if rank < 1 or rank > factors.n_factors:
        raise InputError(
            f"rank {rank} out of range 1..{factors.n_factors}"
        )
    if not scale > 0:
        raise InputError(f"scale must be positive, got {scale}")
    u = factors.left_vectors[:, :rank]
    v = factors.right_vectors[:, :rank]
    s = factors.singular_values[:rank]
    return scale * ((u * s) @ v.T)


def clamp_to_interval(matrix: np.ndarray, epsilon: float) -> np.ndarray:
    """Clamp entrywise into [epsilon, 1 - epsilon]."""
    if not (0.0 < epsilon < 0.5):
        raise ConfigError(f"epsilon must lie in (0, 0.5), got {epsilon}")
    return np.clip(matrix, epsilon, 1.0 - epsilon)


def center_columns(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Subtract column means; returns (centered, means)."""
    matrix = np.asarray(matrix, dtype=float)
    means = matrix.mean(axis=0)
    return matrix - means, means
