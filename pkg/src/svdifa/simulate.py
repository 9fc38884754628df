"""Seeded generators for the benchmark scenarios.

Item parameters and person draws come from two independent counter-based
streams (Philox), so a study can hold the items fixed across replications
by fixing item_seed while varying person_seed.

Item design, for a base block of 200 items: intercepts uniform on [-1, 1];
each loading row is a uniform [1, 2] vector masked by a sparsity pattern
drawn uniformly from the binary K-vectors with between 1 and q_max_active
active entries. When n_items is a larger multiple of 200 the base block is
tiled, which keeps the item population identical across matrix widths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InputError
from .estimator import ResponseMatrix
from .links import LOGISTIC, LinkFunction

BASE_BLOCK_ITEMS = 200


@dataclass(frozen=True)
class SimulationScenario:
    n_factors: int
    n_items: int
    n_persons: int | None = None  # defaults to 20 * n_items
    latent_correlation: float = 0.0
    link: LinkFunction = LOGISTIC
    q_max_active: int | None = None  # defaults to min(3, n_factors)
    item_seed: int = 0
    person_seed: int = 1

    def __post_init__(self):
        if self.n_factors < 1:
            raise ConfigError("n_factors must be >= 1")
        if self.n_items < 1:
            raise ConfigError("n_items must be >= 1")
        if not (0.0 <= self.latent_correlation < 1.0):
            raise ConfigError(
                f"latent_correlation must lie in [0, 1), got {self.latent_correlation}"
            )
        if self.q_max_active is None:
            object.__setattr__(self, "q_max_active", min(3, self.n_factors))
        if not (1 <= self.q_max_active <= self.n_factors):
            raise ConfigError(
                f"q_max_active must lie in 1..{self.n_factors}, got {self.q_max_active}"
            )

    @property
    def persons(self) -> int:
        return self.n_persons if self.n_persons is not None else 20 * self.n_items

    def latent_covariance(self) -> np.ndarray:
        k, rho = self.n_factors, self.latent_correlation
        return (1.0 - rho) * np.eye(k) + rho * np.ones((k, k))


@dataclass(frozen=True)
class GroundTruth:
    loadings: np.ndarray  # J x K
    intercepts: np.ndarray  # J
    thetas: np.ndarray  # N x K
    probabilities: np.ndarray  # N x J


@dataclass(frozen=True)
class OrdinalGroundTruth:
    loadings: np.ndarray  # J x K
    intercepts: np.ndarray  # J x T, strictly decreasing along T
    thetas: np.ndarray  # N x K
    cumulative_probabilities: np.ndarray  # T x N x J, Pr(Y >= t)


def _item_rng(scenario: SimulationScenario) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(scenario.item_seed))


def _person_rng(scenario: SimulationScenario, stream: int = 0) -> np.random.Generator:
    # separate substreams so theta draws and response draws stay independent
    seq = np.random.SeedSequence(entropy=scenario.person_seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(seq))


def sparsity_patterns(n_factors: int, q_max_active: int) -> np.ndarray:
    """All binary K-vectors with 1..q_max_active active entries."""
    patterns = [
        p
        for p in itertools.product((0, 1), repeat=n_factors)
        if 1 <= sum(p) <= q_max_active
    ]
    return np.array(patterns, dtype=float)


def generate_items(scenario: SimulationScenario) -> tuple[np.ndarray, np.ndarray]:
    """Draw (loadings, intercepts), deterministic given item_seed."""
    rng = _item_rng(scenario)
    j, k = scenario.n_items, scenario.n_factors
    block = BASE_BLOCK_ITEMS if j % BASE_BLOCK_ITEMS == 0 else j
    patterns = sparsity_patterns(k, scenario.q_max_active)

    d = rng.uniform(-1.0, 1.0, size=block)
    slopes = rng.uniform(1.0, 2.0, size=(block, k))
    q = patterns[rng.integers(0, len(patterns), size=block)]
    a = slopes * q

    reps = j // block
    return np.tile(a, (reps, 1)), np.tile(d, reps)


def draw_thetas(scenario: SimulationScenario, rng: np.random.Generator) -> np.ndarray:
    cov = scenario.latent_covariance()
    eigvals, eigvecs = np.linalg.eigh(cov)
    sqrt_cov = (eigvecs * np.sqrt(eigvals)) @ eigvecs.T
    z = rng.standard_normal((scenario.persons, scenario.n_factors))
    return z @ sqrt_cov


def generate_truth(scenario: SimulationScenario) -> GroundTruth:
    """Items, persons, and the implied probability matrix."""
    loadings, intercepts = generate_items(scenario)
    thetas = draw_thetas(scenario, _person_rng(scenario))
    probs = scenario.link.f(thetas @ loadings.T + intercepts[np.newaxis, :])
    return GroundTruth(
        loadings=loadings, intercepts=intercepts, thetas=thetas, probabilities=probs
    )


def generate_responses(
    scenario: SimulationScenario,
    truth: GroundTruth,
    missing_rate: float = 0.0,
) -> ResponseMatrix:
    """Bernoulli responses at the true probabilities, with an independent
    MCAR observation mask. Deterministic given person_seed."""
    if not (0.0 <= missing_rate < 1.0):
        raise ConfigError(f"missing_rate must lie in [0, 1), got {missing_rate}")
    n, j = truth.probabilities.shape
    if truth.loadings.shape != (scenario.n_items, scenario.n_factors):
        raise InputError("ground truth shapes do not match the scenario")
    rng = _person_rng(scenario, stream=1)
    values = (rng.random((n, j)) < truth.probabilities).astype(np.int8)
    if missing_rate > 0.0:
        mask = rng.random((n, j)) >= missing_rate
        if not mask.any():
            raise InputError("mask left no observed responses")
    else:
        mask = np.ones((n, j), dtype=bool)
    return ResponseMatrix(values=values, mask=mask, n_categories=1)


def simulate_dataset(
    scenario: SimulationScenario, missing_rate: float = 0.0
) -> tuple[ResponseMatrix, GroundTruth]:
    truth = generate_truth(scenario)
    return generate_responses(scenario, truth, missing_rate), truth


def generate_ordinal(
    scenario: SimulationScenario,
    n_categories: int,
    threshold_spread: float = 1.0,
) -> tuple[ResponseMatrix, OrdinalGroundTruth]:
    """Graded-response data: cumulative category probabilities share the
    item slopes, with per-category intercepts spaced threshold_spread apart
    and centered on the base intercept."""
    if n_categories < 2:
        raise ConfigError(f"n_categories must be >= 2, got {n_categories}")
    if not threshold_spread > 0:
        raise ConfigError(f"threshold_spread must be positive, got {threshold_spread}")
    t = n_categories
    loadings, base_intercepts = generate_items(scenario)
    # d_{j,1} > d_{j,2} > ... > d_{j,T}, spacing = threshold_spread
    offsets = threshold_spread * ((t - 1) / 2.0 - np.arange(t))
    intercepts = base_intercepts[:, np.newaxis] + offsets[np.newaxis, :]

    thetas = draw_thetas(scenario, _person_rng(scenario))
    linear = thetas @ loadings.T
    cumulative = np.stack(
        [scenario.link.f(linear + intercepts[:, level]) for level in range(t)]
    )
    if np.any(np.diff(cumulative, axis=0) > 0):
        raise InputError("cumulative probabilities are not nonincreasing")
    u = _person_rng(scenario, stream=1).random(linear.shape)
    values = (u[np.newaxis, :, :] < cumulative).sum(axis=0).astype(np.int8)
    data = ResponseMatrix(
        values=values, mask=np.ones(linear.shape, dtype=bool), n_categories=t
    )
    truth = OrdinalGroundTruth(
        loadings=loadings,
        intercepts=intercepts,
        thetas=thetas,
        cumulative_probabilities=cumulative,
    )
    return data, truth
