"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The heavier criteria share a cache of simulation runs (20 replications per
cell at J = 200 / 400, independent and correlated factors, complete and
20% missing data).
"""

import time

import numpy as np
import pytest

from svdifa.errors import SvdIfaError
from svdifa.estimator import (
    EstimationConfig,
    ResponseMatrix,
    TruncationPolicy,
    estimate_binary,
    estimate_missing,
    estimate_ordinal,
    recover_probability_matrix,
)
from svdifa.evaluate import alignment_loss, probability_rmse
from svdifa.links import LOGISTIC
from svdifa.rankselect import scree
from svdifa.simulate import SimulationScenario, simulate_dataset

from reference import reference_binary_pipeline

REPS = 20
_cache: dict = {}


def check_estimate_invariants(estimate, n, j):
    gram = estimate.scores.T @ estimate.scores
    k = estimate.loadings.shape[1]
    assert np.allclose(gram, n * np.eye(k), rtol=1e-6, atol=1e-6 * n)
    sigma = estimate.singular_values_std[:k] * np.sqrt(n * j)
    assert np.allclose(np.sum(estimate.loadings**2, axis=0), sigma**2 / n, rtol=1e-6)


def run_cell(n_items: int, rho: float, missing_rate: float = 0.0):
    """20 seeded replications; returns (losses, rmses), caching results."""
    key = (n_items, rho, missing_rate)
    if key in _cache:
        return _cache[key]
    losses, rmses = [], []
    for rep in range(REPS):
        scenario = SimulationScenario(
            n_factors=4, n_items=n_items, latent_correlation=rho,
            item_seed=0, person_seed=rep + 1,
        )
        data, truth = simulate_dataset(scenario, missing_rate)
        config = EstimationConfig(n_factors=4)
        if missing_rate > 0:
            estimate = estimate_missing(data, config)
        else:
            estimate = estimate_binary(data, config)
        check_estimate_invariants(estimate, *data.shape)
        losses.append(alignment_loss(truth.loadings, estimate.loadings).loss)
        rmses.append(
            probability_rmse(
                truth.probabilities, recover_probability_matrix(estimate, LOGISTIC)
            )
        )
    _cache[key] = (np.array(losses), np.array(rmses))
    return _cache[key]


def report(name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f": {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


class TestAcceptance:
    def test_criterion_1_loss_reproduction(self):
        losses, _ = run_cell(200, 0.0)
        median = float(np.median(losses))
        report(
            "criterion 1 (loss reproduction, K=4 J=200 N=4000)",
            median <= 0.012,
            f"median loss {median:.5f} (bound 0.012)",
        )

    def test_criterion_2_monotone_improvement(self):
        losses_200, rmses_200 = run_cell(200, 0.0)
        losses_400, rmses_400 = run_cell(400, 0.0)
        loss_ok = np.median(losses_400) < np.median(losses_200)
        rmse_ok = np.median(rmses_400) < np.median(rmses_200)
        report(
            "criterion 2 (monotone improvement in J)",
            loss_ok and rmse_ok,
            f"loss {np.median(losses_200):.5f}->{np.median(losses_400):.5f}, "
            f"rmse {np.median(rmses_200):.5f}->{np.median(rmses_400):.5f}",
        )

    def test_criterion_3_correlated_factor_ordering(self):
        losses_indep, _ = run_cell(200, 0.0)
        losses_corr, _ = run_cell(200, 0.3)
        report(
            "criterion 3 (correlated factors harder)",
            float(np.median(losses_corr)) >= float(np.median(losses_indep)),
            f"rho=0.3 median {np.median(losses_corr):.5f} vs "
            f"rho=0 median {np.median(losses_indep):.5f}",
        )

    def _scree_runs(self):
        if "scree" not in _cache:
            runs = []
            for seed in range(10):
                scenario = SimulationScenario(
                    n_factors=5, n_items=200, person_seed=seed
                )
                data, _ = simulate_dataset(scenario)
                runs.append(scree(data, EstimationConfig(n_factors=5, input_dim=10)))
            _cache["scree"] = runs
        return _cache["scree"]

    def test_criterion_4a_scree_selection(self):
        runs = self._scree_runs()
        hits = sum(r.suggested_k == 5 for r in runs)
        report(
            "criterion 4a (scree suggests K=5)",
            hits >= 9,
            f"{hits}/10 runs picked 5",
        )

    def test_criterion_4b_gap_magnitude(self):
        # the 5x calibration of the singular value gap is not reached at this
        # scale; the observed ratio sits near 3 (clear on the plot, but below
        # the stated factor). Kept as stated and expected to fail honestly.
        runs = self._scree_runs()
        ratios = [r.standardized_values[4] / r.standardized_values[5] for r in runs]
        hits = sum(r >= 5.0 for r in ratios)
        report(
            "criterion 4b (gap ratio >= 5 in >= 9/10 runs)",
            hits >= 9,
            f"{hits}/10 runs reached 5x; observed ratios "
            f"{np.round(ratios, 2).tolist()}",
        )

    def test_criterion_5_reduction_identities(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n, j = int(rng.integers(20, 60)), int(rng.integers(6, 15))
            data = ResponseMatrix.complete(rng.integers(0, 2, size=(n, j)))
            config = EstimationConfig(n_factors=2)
            b = estimate_binary(data, config)
            m = estimate_missing(data, config)
            bit_identical = (
                np.array_equal(b.loadings, m.loadings)
                and np.array_equal(b.scores, m.scores)
                and np.array_equal(b.intercepts, m.intercepts)
                and np.array_equal(b.singular_values_std, m.singular_values_std)
            )
            if not bit_identical:
                report("criterion 5 (reduction identities)", False,
                       "full-mask missing-data run differs from complete-data run")
            o = estimate_ordinal(data, config)
            if alignment_loss(b.loadings, o.loadings).loss > 1e-12:
                report("criterion 5 (reduction identities)", False,
                       "T=1 ordinal run differs from binary run")
        report("criterion 5 (reduction identities)", True,
               "20 random inputs bit-identical; T=1 ordinal within 1e-12")

    def test_criterion_6_oracle_equivalence(self):
        hand = np.array(
            [
                [1, 0, 1, 1],
                [0, 1, 0, 0],
                [1, 1, 1, 0],
                [0, 0, 1, 1],
                [1, 0, 0, 1],
                [0, 1, 1, 0],
            ]
        )
        config = EstimationConfig(
            n_factors=1, truncation=TruncationPolicy.constant(0.01)
        )
        estimate = estimate_binary(ResponseMatrix.complete(hand), config)
        loadings, scores, d_hat, s2, k_tilde = reference_binary_pipeline(
            hand, k=1, epsilon=0.01
        )
        ok = (
            estimate.k_tilde == k_tilde
            and np.allclose(estimate.loadings, loadings, atol=1e-10)
            and np.allclose(estimate.scores, scores, atol=1e-10)
            and np.allclose(estimate.intercepts, d_hat, atol=1e-10)
            and np.allclose(
                estimate.singular_values_std, s2 / np.sqrt(24), atol=1e-10
            )
        )
        report("criterion 6 (oracle equivalence on 6x4 hand matrix)", ok)

    def test_criterion_7_rotation_invariance(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((30, 4))
        worst = 0.0
        count = 0
        while count < 50:
            q = rng.standard_normal((4, 4))
            if np.linalg.cond(q) > 1e3:
                continue
            count += 1
            worst = max(worst, alignment_loss(a, a @ q).loss)
        # estimate invariants are asserted inside run_cell for every
        # benchmark replication
        run_cell(200, 0.0)
        report(
            "criterion 7 (rotation invariance + estimate invariants)",
            worst <= 1e-12,
            f"worst loss over 50 invertible rotations {worst:.2e}",
        )

    def test_criterion_8_missing_data(self):
        losses_complete, _ = run_cell(200, 0.0)
        losses_missing, _ = run_cell(200, 0.0, missing_rate=0.2)
        finite = np.all(np.isfinite(losses_missing))
        ratio = float(np.median(losses_missing) / np.median(losses_complete))
        report(
            "criterion 8 (20% MCAR)",
            finite and ratio <= 3.0,
            f"median ratio missing/complete = {ratio:.2f} (bound 3.0)",
        )

    def test_criterion_9_performance(self):
        scenario = SimulationScenario(
            n_factors=8, n_items=1200, latent_correlation=0.3, person_seed=0
        )
        data, truth = simulate_dataset(scenario)
        t0 = time.perf_counter()
        estimate = estimate_binary(data, EstimationConfig(n_factors=8))
        elapsed = time.perf_counter() - t0
        loss = alignment_loss(truth.loadings, estimate.loadings).loss
        report(
            "criterion 9 (K=8 J=1200 N=24000 under 5 minutes)",
            elapsed < 300.0 and np.isfinite(loss),
            f"estimator took {elapsed:.1f}s, loss {loss:.5f}",
        )
