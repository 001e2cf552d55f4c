"""Tests for closed-form TT operators and the detection state."""

import numpy as np
import pytest

from ttspin.core.exceptions import SpinSystemError, StructureError
from ttspin.core.oracle import dense_detection_state, devectorize, vectorize
from ttspin.core.spin import (
    IDENTITY,
    SPLUS,
    SZ,
    analytic_total_sz,
    analytic_zz_chain,
    detection_state,
    two_band_cores,
)
from ttspin.core.tt import TTOperator, local_block_count, to_dense


def total_sz_diagonal(n_sites):
    """Per-basis-state total magnetization, site 0 slowest."""
    diag = np.zeros(1)
    for _ in range(n_sites):
        diag = np.add.outer(diag, [0.5, -0.5]).ravel()
    return diag


class TestTotalSz:
    """Tests for analytic_total_sz."""

    @pytest.mark.parametrize("n_sites", [2, 3, 5, 7])
    def test_dense_form(self, n_sites):
        """Contracts to the diagonal total-Sz matrix."""
        np.testing.assert_array_equal(
            to_dense(analytic_total_sz(n_sites)), np.diag(total_sz_diagonal(n_sites))
        )

    @pytest.mark.parametrize("n_sites", [2, 4, 20])
    def test_ranks_and_blocks(self, n_sites):
        """Ranks are 2 and 4N - 4 local blocks are stored."""
        op = analytic_total_sz(n_sites)
        assert op.ranks == [1] + [2] * (n_sites - 1) + [1]
        assert local_block_count(op) == 4 * n_sites - 4

    def test_single_site_rejected(self):
        """One site has no two-band structure."""
        with pytest.raises(StructureError):
            analytic_total_sz(1)


class TestZZChain:
    """Tests for analytic_zz_chain."""

    @pytest.mark.parametrize("n_sites", [2, 3, 4, 6])
    def test_dense_form(self, n_sites):
        """Equals sum over all pairs n < m of sz_n sz_m."""
        total = total_sz_diagonal(n_sites)
        pairs = (total**2 - n_sites / 4) / 2
        np.testing.assert_allclose(
            to_dense(analytic_zz_chain(n_sites)), np.diag(pairs), atol=1e-15
        )

    @pytest.mark.parametrize("n_sites", [2, 3, 20])
    def test_ranks_and_blocks(self, n_sites):
        """Interior ranks are 3 and 9N - 12 local blocks are stored."""
        op = analytic_zz_chain(n_sites)
        assert op.ranks == [1] + [3] * (n_sites - 1) + [1]
        assert local_block_count(op) == 9 * n_sites - 12

    def test_single_site_rejected(self):
        """One site has no pairs."""
        with pytest.raises(StructureError):
            analytic_zz_chain(1)


class TestTwoBandCores:
    """Tests for two_band_cores."""

    def test_mixed_blocks(self):
        """Site-dependent blocks are summed with identity elsewhere."""
        blocks = [SZ, 2 * SZ, 3 * SZ]
        op = TTOperator(two_band_cores(blocks, IDENTITY))
        expected = (
            np.kron(np.kron(SZ, IDENTITY), IDENTITY)
            + 2 * np.kron(np.kron(IDENTITY, SZ), IDENTITY)
            + 3 * np.kron(np.kron(IDENTITY, IDENTITY), SZ)
        )
        np.testing.assert_allclose(to_dense(op), expected)

    def test_single_site_is_bare_block(self):
        """One block gives a one-core chain."""
        cores = two_band_cores([SPLUS], IDENTITY)
        assert len(cores) == 1
        np.testing.assert_array_equal(cores[0][0, :, :, 0], SPLUS)


class TestDetectionState:
    """Tests for detection_state and the Liouville basis."""

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_dense(self, make_system, seed):
        """The TT detection state equals vec(sum s+) of the chosen isotope."""
        system = make_system(seed, 4)
        isotope = system.spins[0].isotope
        np.testing.assert_allclose(
            to_dense(detection_state(system, isotope)),
            dense_detection_state(system, isotope),
            atol=1e-15,
        )

    def test_single_spin_state(self, single_spin):
        """One spin gives vec(s+) = (0, 1, 0, 0)."""
        np.testing.assert_array_equal(to_dense(detection_state(single_spin, "15N")), [0, 1, 0, 0])

    def test_missing_isotope(self, hn_pair):
        """Detecting an absent isotope is a spin-system error."""
        with pytest.raises(SpinSystemError):
            detection_state(hn_pair, "13C")

    def test_site_ordered_vectorization(self):
        """vectorize interleaves row and column indices per site."""
        rng = np.random.default_rng(0)
        a, b = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
        vec = vectorize(np.kron(a, b), 2)
        np.testing.assert_allclose(vec, np.kron(a.reshape(-1), b.reshape(-1)))
        np.testing.assert_allclose(devectorize(vec, 2), np.kron(a, b))
