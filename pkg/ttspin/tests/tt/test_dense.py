"""Tests for dense conversion and TT-SVD."""

import numpy as np
import pytest

from ttspin.core.exceptions import DenseCapError, ModeMismatchError
from ttspin.core.tt import TTOperator, TruncationPolicy, from_dense, random_tt, to_dense


class TestToDense:
    """Tests for to_dense."""

    def test_cap(self):
        """Dense expansion beyond the cap raises DenseCapError."""
        t = random_tt([2] * 6, 2, seed=0)
        with pytest.raises(DenseCapError) as exc:
            to_dense(t, max_entries=32)
        assert exc.value.exit_code == 6

    def test_cap_counts_operator_entries(self):
        """Operators count out x in entries."""
        op = random_tt([2, 2], 1, seed=0, in_modes=[2, 2])
        assert to_dense(op, max_entries=16).shape == (4, 4)
        with pytest.raises(DenseCapError):
            to_dense(op, max_entries=15)


class TestFromDense:
    """Tests for from_dense."""

    def test_vector_recovers_exact_ranks(self):
        """A TT-SVD of a low-rank tensor recovers its ranks."""
        t = random_tt([2, 3, 2, 3], 2, seed=1)
        back = from_dense(to_dense(t), [2, 3, 2, 3])
        assert back.ranks == [1, 2, 2, 2, 1]
        assert back.ortho_center == 3
        np.testing.assert_allclose(to_dense(back), to_dense(t), atol=1e-12)

    def test_kronecker_matrix_is_rank_one(self):
        """kron(A, B, C) has an operator TT with all ranks 1."""
        rng = np.random.default_rng(2)
        mats = [rng.standard_normal((2, 2)) for _ in range(3)]
        dense = np.kron(np.kron(mats[0], mats[1]), mats[2])
        op = from_dense(dense, [2, 2, 2])
        assert isinstance(op, TTOperator)
        assert op.ranks == [1, 1, 1, 1]
        np.testing.assert_allclose(to_dense(op), dense, atol=1e-12)

    def test_rectangular_matrix(self):
        """in_modes may differ from modes."""
        rng = np.random.default_rng(3)
        dense = rng.standard_normal((6, 4))
        op = from_dense(dense, [3, 2], in_modes=[2, 2])
        assert op.in_modes == [2, 2]
        np.testing.assert_allclose(to_dense(op), dense, atol=1e-12)

    def test_truncation_error_bound(self):
        """A loose tolerance truncates within its budget."""
        rng = np.random.default_rng(4)
        vec = rng.standard_normal(3**5)
        t = from_dense(vec, [3] * 5, TruncationPolicy(rel_tolerance=0.3))
        assert np.linalg.norm(to_dense(t) - vec) <= 0.3 * np.linalg.norm(vec) * (1 + 1e-10)

    def test_zero_array(self):
        """A zero array gives the canonical zero."""
        assert from_dense(np.zeros(8), [2, 2, 2]).ranks == [1, 1, 1, 1]

    def test_size_mismatch(self):
        """The array length must equal the product of modes."""
        with pytest.raises(ModeMismatchError):
            from_dense(np.zeros(7), [2, 2, 2])

    def test_too_many_axes(self):
        """Only vectors and matrices are accepted."""
        with pytest.raises(ModeMismatchError):
            from_dense(np.zeros((2, 2, 2)), [2, 2, 2])
