"""Tests for TT rounding and truncation-rank selection."""

import numpy as np
import pytest

from ttspin.core.tt import (
    BudgetRule,
    TruncationPolicy,
    check_orthonormality,
    norm,
    random_tt,
    round_tt,
    to_dense,
    truncation_rank,
)


class TestTruncationRank:
    """Tests for truncation_rank."""

    def test_tail_within_delta(self):
        """The smallest rank whose discarded tail fits delta is chosen."""
        rank, discarded_sq, capped = truncation_rank(np.array([3.0, 2.0, 1.0]), 1.0)
        assert rank == 2
        assert discarded_sq == pytest.approx(1.0)
        assert not capped

    def test_zero_delta_keeps_everything(self):
        """Zero tolerance keeps all singular values."""
        rank, discarded_sq, _ = truncation_rank(np.array([3.0, 2.0, 1.0]), 0.0)
        assert rank == 3
        assert discarded_sq == 0.0

    def test_cap_wins(self):
        """The cap overrides the error budget and is reported."""
        rank, discarded_sq, capped = truncation_rank(np.array([3.0, 2.0, 1.0]), 0.0, max_rank=1)
        assert rank == 1
        assert discarded_sq == pytest.approx(5.0)
        assert capped

    def test_rank_at_least_one(self):
        """A huge delta still keeps one singular value."""
        rank, _, _ = truncation_rank(np.array([1e-3, 1e-4]), 10.0)
        assert rank == 1


class TestRoundTT:
    """Tests for round_tt."""

    @pytest.mark.parametrize("seed", range(100))
    def test_error_bound(self, seed):
        """||round(t) - t|| <= eps ||t|| for random tensors."""
        eps = 1e-2
        t = random_tt([3] * 5, 6, seed=seed)
        rounded = round_tt(t, TruncationPolicy(rel_tolerance=eps))
        error = np.linalg.norm(to_dense(rounded) - to_dense(t))
        assert error <= eps * np.linalg.norm(to_dense(t)) * (1 + 1e-10)
        assert rounded.truncation_error <= eps * norm(t) * (1 + 1e-10)
        assert not rounded.cap_limited

    def test_redundant_sum_recovers_ranks(self):
        """Rounding t + t recovers the ranks of t."""
        t = random_tt([2] * 6, 3, seed=1)
        rounded = round_tt(t + t)
        assert rounded.ranks == [1, 2, 3, 3, 3, 2, 1]
        np.testing.assert_allclose(to_dense(rounded), 2 * to_dense(t), atol=1e-11)

    def test_result_is_gauged_at_zero(self):
        """The rounded tensor has a valid center at site 0."""
        rounded = round_tt(random_tt([2] * 5, 3, seed=2))
        assert rounded.ortho_center == 0
        assert check_orthonormality(rounded, 0).ok

    def test_rank_cap_flags_result(self):
        """A binding cap marks the result cap-limited."""
        t = random_tt([2] * 6, 4, seed=3)
        rounded = round_tt(t, TruncationPolicy(rel_tolerance=1e-12, max_rank=2))
        assert max(rounded.ranks) <= 2
        assert rounded.cap_limited
        assert rounded.truncation_error > 0

    def test_zero_tensor_rounds_to_canonical_zero(self):
        """An exactly zero tensor becomes the rank-1 zero."""
        rounded = round_tt(random_tt([2] * 4, 3, seed=4) * 0.0)
        assert rounded.ranks == [1] * 5
        assert norm(rounded) == 0.0

    def test_single_site(self):
        """One-site tensors are returned unchanged."""
        t = random_tt([5], 1, seed=6)
        np.testing.assert_allclose(to_dense(round_tt(t)), to_dense(t))

    def test_operator_rounding(self):
        """Operators round through their flat cores."""
        op = random_tt([2, 2, 2], 2, seed=8, in_modes=[2, 2, 2])
        rounded = round_tt(op + op)
        assert rounded.ranks == op.ranks
        np.testing.assert_allclose(to_dense(rounded), 2 * to_dense(op), atol=1e-11)

    def test_per_bond_budget_is_looser(self):
        """Spending eps at every bond never keeps more rank than the split budget."""
        t = random_tt([3] * 5, 6, seed=10)
        split = round_tt(t, TruncationPolicy(rel_tolerance=0.1))
        loose = round_tt(
            t, TruncationPolicy(rel_tolerance=0.1, per_site_budget=BudgetRule.PER_BOND)
        )
        assert all(a <= b for a, b in zip(loose.ranks, split.ranks, strict=True))
