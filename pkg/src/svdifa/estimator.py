"""Two-stage SVD estimators for exploratory IFA.

Pipeline (binary, complete data):

  1. SVD of the 0/1 response matrix Y.
  2. Keep K_tilde = max(K + 1, #{sigma_k >= c sqrt(N)}) triples (c = 1.01 by
     default) and reconstruct the probability matrix.
  3. Clamp entries into [eps, 1 - eps] so the inverse link is defined.
  4. Apply f_inverse entrywise, column-center; the column means are the
     intercept estimates.
  5. A second SVD of the centered matrix yields loadings (scaled right
     vectors) and factor scores (scaled left vectors).

The missing-data variant zero-fills unobserved cells, rescales the
reconstruction by the inverse observation rate, and widens the singular
value threshold to c sqrt(N (p + 3 p (1 - p))). The ordinal variant runs
the binary pipeline on each dichotomization Y >= t, averages the centered
matrices, and applies the final SVD to the average.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import lowrank
from .errors import ConfigError, InputError
from .links import LOGISTIC, LinkFunction
from .lowrank import SvdFactors, ThresholdRule

DEFAULT_EPSILON = 1e-4
DEFAULT_THRESHOLD_CONSTANT = 1.01


@dataclass(frozen=True)
class ResponseMatrix:
    """N x J integer responses in 0..n_categories with an observation mask."""

    values: np.ndarray
    mask: np.ndarray
    n_categories: int = 1

    def __post_init__(self):
        values = np.asarray(self.values)
        mask = np.asarray(self.mask, dtype=bool)
        if values.ndim != 2:
            raise InputError(f"values must be 2-D, got shape {values.shape}")
        if mask.shape != values.shape:
            raise InputError(
                f"mask shape {mask.shape} does not match values shape {values.shape}"
            )
        if self.n_categories < 1:
            raise InputError("n_categories must be >= 1")
        if not mask.any():
            raise InputError("no observed responses")
        observed = values[mask]
        if observed.size and (observed.min() < 0 or observed.max() > self.n_categories):
            raise InputError(
                f"observed values must lie in 0..{self.n_categories}"
            )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def complete(cls, values: np.ndarray, n_categories: int = 1) -> "ResponseMatrix":
        values = np.asarray(values)
        return cls(values, np.ones(values.shape, dtype=bool), n_categories)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def is_complete(self) -> bool:
        return bool(self.mask.all())

    @property
    def observed_rate(self) -> float:
        return float(self.mask.mean())


@dataclass(frozen=True)
class TruncationPolicy:
    """Clamp level for the reconstructed probabilities.

    Either a constant epsilon, or the power decay gamma0 * J**(-gamma1)
    clamped into (0, 0.2].
    """

    epsilon: float | None = DEFAULT_EPSILON
    gamma0: float | None = None
    gamma1: float | None = None

    @classmethod
    def constant(cls, epsilon: float) -> "TruncationPolicy":
        if not (0.0 < epsilon <= 0.2):
            raise ConfigError(f"constant epsilon must lie in (0, 0.2], got {epsilon}")
        return cls(epsilon=epsilon)

    @classmethod
    def power_decay(cls, gamma0: float, gamma1: float) -> "TruncationPolicy":
        if not gamma0 > 0:
            raise ConfigError(f"gamma0 must be positive, got {gamma0}")
        if not gamma1 > 0:
            raise ConfigError(f"gamma1 must be positive, got {gamma1}")
        return cls(epsilon=None, gamma0=gamma0, gamma1=gamma1)

    def resolve(self, n_items: int, n_factors: int) -> float:
        if self.epsilon is not None:
            return self.epsilon
        if self.gamma1 >= 1.0 / (4.0 * (n_factors + 3)):
            raise ConfigError(
                f"gamma1 must be below 1/(4(K+3)) = "
                f"{1.0 / (4.0 * (n_factors + 3)):.6g} for K = {n_factors}"
            )
        eps = self.gamma0 * n_items ** (-self.gamma1)
        return min(eps, 0.2)


@dataclass(frozen=True)
class EstimationConfig:
    n_factors: int
    link: LinkFunction = LOGISTIC
    truncation: TruncationPolicy = TruncationPolicy()
    threshold_constant: float = DEFAULT_THRESHOLD_CONSTANT
    input_dim: int | None = None  # defaults to n_factors

    def __post_init__(self):
        if self.n_factors < 1:
            raise ConfigError(f"n_factors must be >= 1, got {self.n_factors}")
        if not (1.0 < self.threshold_constant < 1.5):
            raise ConfigError(
                f"threshold_constant must lie in (1, 1.5), got {self.threshold_constant}"
            )
        if self.input_dim is not None and self.input_dim < self.n_factors:
            raise ConfigError("input_dim must be >= n_factors")

    @property
    def working_dim(self) -> int:
        return self.input_dim if self.input_dim is not None else self.n_factors

    def validate_shape(self, n_persons: int, n_items: int) -> None:
        if self.working_dim >= min(n_persons, n_items):
            raise ConfigError(
                f"number of factors {self.working_dim} too large for a "
                f"{n_persons}x{n_items} matrix"
            )
        if n_persons < n_items:
            warnings.warn(
                f"N = {n_persons} < J = {n_items}: the estimator assumes at "
                "least as many persons as items; results may be unstable",
                stacklevel=3,
            )


@dataclass(frozen=True)
class IfaEstimate:
    """Output of the two-stage pipeline.

    loadings is J x K, scores is N x K with scores.T @ scores = N * I,
    intercepts is length J (J x T for ordinal data), and
    singular_values_std holds all computed second-stage singular values
    divided by sqrt(N J).
    """

    loadings: np.ndarray
    scores: np.ndarray
    intercepts: np.ndarray
    singular_values_std: np.ndarray
    k_tilde: int
    epsilon_used: float
    timings: dict = field(default_factory=dict, compare=False)


def _assemble(
    factors: SvdFactors,
    n_persons: int,
    n_items: int,
    k: int,
    intercepts: np.ndarray,
    k_tilde: int,
    epsilon: float,
    timings: dict,
) -> IfaEstimate:
    s = factors.singular_values[:k]
    loadings = factors.right_vectors[:, :k] * (s / np.sqrt(n_persons))
    scores = factors.left_vectors[:, :k] * np.sqrt(n_persons)
    std = factors.singular_values / np.sqrt(n_persons * n_items)
    return IfaEstimate(
        loadings=loadings,
        scores=scores,
        intercepts=intercepts,
        singular_values_std=std,
        k_tilde=k_tilde,
        epsilon_used=epsilon,
        timings=timings,
    )


def _second_svd(matrix: np.ndarray, want: int) -> SvdFactors:
    if matrix.size <= lowrank.DENSE_LIMIT:
        return lowrank.svd(matrix)
    return lowrank.truncated_svd(matrix, max(want + 5, 50))


def _denoise_to_centered(
    values: np.ndarray,
    scale: float,
    rule: ThresholdRule,
    link: LinkFunction,
    epsilon: float,
    timings: dict,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Steps 2-7 of the binary pipeline: SVD, truncate, clamp, inverse link,
    center. Returns (centered matrix, intercepts, k_tilde)."""
    t0 = time.perf_counter()
    factors = lowrank.adaptive_svd(values, rule.k_floor, rule.threshold)
    timings["first_svd"] = timings.get("first_svd", 0.0) + time.perf_counter() - t0

    t0 = time.perf_counter()
    k_tilde = lowrank.select_rank(factors, rule)
    x = lowrank.truncated_reconstruction(factors, k_tilde, scale)
    x_hat = lowrank.clamp_to_interval(x, epsilon)
    assert np.all(x_hat >= epsilon) and np.all(x_hat <= 1.0 - epsilon)
    m_tilde = link.f_inverse(x_hat)
    centered, intercepts = lowrank.center_columns(m_tilde)
    timings["denoise"] = timings.get("denoise", 0.0) + time.perf_counter() - t0
    return centered, intercepts, k_tilde


def estimate_binary(data: ResponseMatrix, config: EstimationConfig) -> IfaEstimate:
    """Complete-data binary estimator."""
    if data.n_categories != 1:
        raise InputError("estimate_binary requires binary data (n_categories = 1)")
    if not data.is_complete:
        raise InputError(
            "estimate_binary requires a full mask; use estimate_missing"
        )
    n, j = data.shape
    config.validate_shape(n, j)
    k = config.working_dim
    epsilon = config.truncation.resolve(j, k)
    timings: dict = {}

    rule = ThresholdRule(
        k_floor=k + 1, threshold=config.threshold_constant * np.sqrt(n)
    )
    centered, intercepts, k_tilde = _denoise_to_centered(
        data.values.astype(float), 1.0, rule, config.link, epsilon, timings
    )

    t0 = time.perf_counter()
    factors = _second_svd(centered, k)
    timings["second_svd"] = time.perf_counter() - t0
    return _assemble(factors, n, j, k, intercepts, k_tilde, epsilon, timings)


def estimate_missing(data: ResponseMatrix, config: EstimationConfig) -> IfaEstimate:
    """Binary estimator tolerating missing-at-random cells.

    With a full mask the observation rate is exactly 1 and this reduces
    bit-for-bit to the complete-data pipeline.
    """
    if data.n_categories != 1:
        raise InputError("estimate_missing requires binary data (n_categories = 1)")
    n, j = data.shape
    config.validate_shape(n, j)
    k = config.working_dim
    epsilon = config.truncation.resolve(j, k)
    timings: dict = {}

    p_hat = data.observed_rate
    z = np.where(data.mask, data.values, 0).astype(float)
    threshold = config.threshold_constant * np.sqrt(
        n * (p_hat + 3.0 * p_hat * (1.0 - p_hat))
    )
    rule = ThresholdRule(k_floor=k + 1, threshold=threshold)
    centered, intercepts, k_tilde = _denoise_to_centered(
        z, 1.0 / p_hat, rule, config.link, epsilon, timings
    )

    t0 = time.perf_counter()
    factors = _second_svd(centered, k)
    timings["second_svd"] = time.perf_counter() - t0
    return _assemble(factors, n, j, k, intercepts, k_tilde, epsilon, timings)


def estimate_ordinal(data: ResponseMatrix, config: EstimationConfig) -> IfaEstimate:
    """Ordinal estimator: average the centered matrices of the T
    dichotomizations Y >= t, then take one final SVD."""
    if data.n_categories < 1:
        raise InputError("n_categories must be >= 1")
    if not data.is_complete:
        raise ConfigError(
            "ordinal data with missing responses is not supported"
        )
    n, j = data.shape
    config.validate_shape(n, j)
    k = config.working_dim
    epsilon = config.truncation.resolve(j, k)
    t = data.n_categories
    timings: dict = {}

    threshold = config.threshold_constant * np.sqrt(n)
    rule = ThresholdRule(k_floor=k + 1, threshold=threshold)
    m_sum = np.zeros((n, j))
    intercepts = np.empty((j, t))
    k_tilde = 0
    for level in range(1, t + 1):
        dichotomized = (data.values >= level).astype(float)
        centered, d_hat, kt = _denoise_to_centered(
            dichotomized, 1.0, rule, config.link, epsilon, timings
        )
        m_sum += centered
        intercepts[:, level - 1] = d_hat
        k_tilde = max(k_tilde, kt)
    m_avg = m_sum / t

    t0 = time.perf_counter()
    factors = _second_svd(m_avg, k)
    timings["second_svd"] = time.perf_counter() - t0
    if t == 1:
        intercepts = intercepts[:, 0]
    return _assemble(factors, n, j, k, intercepts, k_tilde, epsilon, timings)


def recover_probability_matrix(
    estimate: IfaEstimate, link: LinkFunction = LOGISTIC
) -> np.ndarray:
    """f(scores @ loadings' + intercepts) entrywise."""
    intercepts = np.asarray(estimate.intercepts)
    if intercepts.ndim != 1:
        raise InputError(
            "probability recovery needs one intercept per item; ordinal "
            "estimates carry per-threshold intercepts"
        )
    linear = estimate.scores @ estimate.loadings.T + intercepts[np.newaxis, :]
    return link.f(linear)
