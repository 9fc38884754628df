import numpy as np
import pytest
from hypothesis import given, strategies as st

from svdifa.errors import ConfigError, InputError
from svdifa.lowrank import (
    SvdFactors,
    ThresholdRule,
    center_columns,
    clamp_to_interval,
    select_rank,
    svd,
    truncated_reconstruction,
    truncated_svd,
)


class TestSvd:
    def test_diagonal(self):
        factors = svd(np.diag([3.0, 1.0]))
        assert np.allclose(factors.singular_values, [3.0, 1.0])

    def test_rank_one(self):
        factors = svd(np.ones((2, 2)))
        assert np.allclose(factors.singular_values, [2.0, 0.0], atol=1e-12)

    def test_reconstruction(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((20, 10))
        f = svd(a)
        recon = (f.left_vectors * f.singular_values) @ f.right_vectors.T
        assert np.linalg.norm(a - recon) < 1e-8

    def test_orthonormal_columns(self):
        rng = np.random.default_rng(1)
        f = svd(rng.standard_normal((15, 7)))
        assert np.allclose(f.left_vectors.T @ f.left_vectors, np.eye(7), atol=1e-8)
        assert np.allclose(f.right_vectors.T @ f.right_vectors, np.eye(7), atol=1e-8)

    def test_sign_convention(self):
        rng = np.random.default_rng(2)
        f = svd(rng.standard_normal((12, 5)))
        for col in f.right_vectors.T:
            assert col[np.argmax(np.abs(col))] > 0

    def test_nonfinite_rejected(self):
        bad = np.ones((3, 3))
        bad[0, 0] = np.nan
        with pytest.raises(InputError):
            svd(bad)

    def test_randomized_matches_dense_leading_triples(self):
        rng = np.random.default_rng(3)
        # strong low-rank structure so the randomized path is accurate
        a = rng.standard_normal((200, 30)) @ np.diag([50, 40, 30] + [0.1] * 27)
        dense = svd(a)
        fast = truncated_svd(a, 5)
        assert np.allclose(fast.singular_values[:3], dense.singular_values[:3], rtol=1e-6)


class TestSelectRank:
    def test_threshold_count_vs_floor(self):
        f = SvdFactors(np.array([10.0, 5.0, 0.1]), np.eye(3), np.eye(3))
        assert select_rank(f, ThresholdRule(2, 4.0)) == 2

    def test_floor_dominates(self):
        f = SvdFactors(np.array([10.0, 0.1, 0.05]), np.eye(3), np.eye(3))
        assert select_rank(f, ThresholdRule(3, 4.0)) == 3

    def test_count_dominates(self):
        f = SvdFactors(np.array([10.0, 9.0, 8.0, 7.0]), np.eye(4), np.eye(4))
        assert select_rank(f, ThresholdRule(2, 4.0)) == 4

    def test_monotone_in_threshold(self):
        rng = np.random.default_rng(4)
        values = np.sort(rng.uniform(0, 10, size=12))[::-1]
        f = SvdFactors(values, np.eye(12), np.eye(12))
        picks = [select_rank(f, ThresholdRule(2, t)) for t in np.linspace(0.1, 12, 40)]
        assert all(a >= b for a, b in zip(picks, picks[1:]))

    def test_rule_validation(self):
        with pytest.raises(ConfigError):
            ThresholdRule(1, 1.0)
        with pytest.raises(ConfigError):
            ThresholdRule(2, 0.0)


class TestReconstruction:
    def test_full_rank_identity(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((8, 6))
        f = svd(a)
        assert np.allclose(truncated_reconstruction(f, 6), a, atol=1e-8)

    def test_rank_one_diag(self):
        f = svd(np.diag([2.0, 1.0]))
        assert np.allclose(truncated_reconstruction(f, 1), [[2, 0], [0, 0]], atol=1e-12)

    def test_scaled_best_rank_two(self):
        rng = np.random.default_rng(6)
        a = rng.standard_normal((5, 4))
        f = svd(a)
        expected = 2.0 * truncated_reconstruction(f, 2, 1.0)
        assert np.allclose(truncated_reconstruction(f, 2, 2.0), expected, atol=1e-12)

    def test_eckart_young(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a = rng.standard_normal((9, 6))
            f = svd(a)
            k = int(rng.integers(1, 5))
            best = np.linalg.norm(a - truncated_reconstruction(f, k))
            for _ in range(20):
                b = rng.standard_normal((9, k)) @ rng.standard_normal((k, 6))
                assert best <= np.linalg.norm(a - b) + 1e-10

    def test_rank_out_of_range(self):
        f = svd(np.eye(3))
        with pytest.raises(InputError):
            truncated_reconstruction(f, 4)
        with pytest.raises(InputError):
            truncated_reconstruction(f, 0)


class TestClamp:
    def test_piecewise(self):
        assert clamp_to_interval(np.array(-0.3), 1e-4) == pytest.approx(1e-4)
        assert clamp_to_interval(np.array(0.5), 1e-4) == pytest.approx(0.5)
        assert clamp_to_interval(np.array(1.2), 0.01) == pytest.approx(0.99)

    def test_epsilon_validation(self):
        for eps in (0.0, 0.5, -0.1, 0.7):
            with pytest.raises(ConfigError):
                clamp_to_interval(np.zeros(2), eps)

    @given(
        st.lists(st.floats(-5, 5), min_size=2, max_size=20),
        st.floats(1e-6, 0.49),
    )
    def test_idempotent_and_order_preserving(self, values, eps):
        x = np.sort(np.array(values))
        once = clamp_to_interval(x, eps)
        assert np.array_equal(clamp_to_interval(once, eps), once)
        assert np.all(np.diff(once) >= 0)


class TestCenterColumns:
    def test_simple(self):
        centered, means = center_columns(np.array([[1.0], [3.0]]))
        assert np.allclose(centered, [[-1.0], [1.0]])
        assert means[0] == pytest.approx(2.0)

    def test_idempotent_on_centered(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((10, 3))
        a -= a.mean(axis=0)
        centered, means = center_columns(a)
        assert np.allclose(centered, a, atol=1e-12)
        assert np.allclose(means, 0.0, atol=1e-12)

    def test_roundtrip(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal((100, 5))
        centered, means = center_columns(a)
        assert np.allclose(centered + means, a, atol=1e-12)
        assert np.allclose(centered.mean(axis=0), 0.0, atol=1e-10)
