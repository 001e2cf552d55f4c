"""Tests for alternating CP-sum compression."""

import numpy as np
import pytest

from ttspin.core.exceptions import ModeMismatchError, StructureError
from ttspin.core.oracle import expand_cp_sum
from ttspin.core.spin import (
    CPOperatorSum,
    CPTerm,
    LocalOperator,
    analytic_zz_chain,
    commutation_superoperator,
    hamiltonian_terms,
)
from ttspin.core.summation import AmenSummation, SummationConfig, amen_sum
from ttspin.core.tt import TruncationPolicy, TTOperator, from_dense, identity, norm, to_dense
from ttspin.schemas.enums import SpaceTag, SummationMethod
from ttspin.tests.summation.sums import zeeman, zz_all_pairs


class TestAmenSum:
    """Tests for amen_sum."""

    def test_zz_chain_ranks(self, zz_chain_terms):
        """All-pairs ZZ compresses to boundary rank 2 and interior rank 3."""
        op, report = amen_sum(zz_chain_terms)
        ranks = op.ranks
        assert ranks[1] == 2 and ranks[-2] == 2
        assert all(r == 3 for r in ranks[2:-2])
        assert report.converged
        assert report.final_rank_profile.ranks == ranks

    def test_zz_chain_matches_analytic(self, zz_chain_terms):
        """The compressed sum equals the closed-form operator."""
        op, _ = amen_sum(zz_chain_terms)
        reference = analytic_zz_chain(20)
        assert norm(op - reference) <= 1e-10 * norm(reference)

    def test_zeeman_ranks(self, zeeman_terms):
        """A sum of one-site terms has every interior rank 2."""
        op, _ = amen_sum(zeeman_terms)
        assert op.ranks[1:-1] == [2] * 19

    @pytest.mark.parametrize("seed", range(25))
    def test_liouvillian_matches_dense(self, make_system, seed):
        """Compressed Liouvillians agree with the dense expansion."""
        terms = commutation_superoperator(hamiltonian_terms(make_system(seed, 4)))
        op, report = amen_sum(terms, SummationConfig(rel_tolerance=1e-12))
        dense = expand_cp_sum(terms)
        error = np.linalg.norm(to_dense(op) - dense) / np.linalg.norm(dense)
        assert error <= 1e-9
        assert report.method == SummationMethod.AMEN
        assert report.n_terms == terms.n_terms

    @pytest.mark.parametrize("seed", range(5))
    def test_hamiltonian_matches_dense(self, make_system, seed):
        """Eight-spin Hamiltonians compress to the dense sum within 1e-10."""
        terms = hamiltonian_terms(make_system(seed, 8))
        op, _ = amen_sum(terms, SummationConfig(rel_tolerance=1e-12))
        dense = expand_cp_sum(terms)
        assert np.linalg.norm(to_dense(op) - dense) <= 1e-10 * np.linalg.norm(dense)

    def test_nearest_neighbour_chain(self, hetero_chain):
        """A chain with nearest-neighbour couplings stays at rank 3."""
        terms = hamiltonian_terms(hetero_chain)
        op, _ = amen_sum(terms, SummationConfig(rel_tolerance=1e-12))
        assert max(op.ranks) <= 3
        dense = expand_cp_sum(terms)
        assert np.linalg.norm(to_dense(op) - dense) <= 1e-10 * np.linalg.norm(dense)

    def test_error_history_non_increasing(self, zz_chain_terms):
        """The best residual estimate never grows between sweeps."""
        _, report = amen_sum(zz_chain_terms)
        history = report.error_history
        assert len(history) == report.sweeps_used
        assert all(b <= a for a, b in zip(history, history[1:], strict=False))
        assert len(report.rank_history) == report.sweeps_used

    def test_single_site(self):
        """One-site sums are added directly."""
        terms = CPOperatorSum(
            n_sites=1,
            terms=[
                CPTerm(coeff=2.0, factors={0: LocalOperator.of("sz")}),
                CPTerm(coeff=1.0, factors={0: LocalOperator.of("sx")}),
            ],
        )
        op, report = amen_sum(terms)
        assert op.n_sites == 1
        assert report.sweeps_used == 1
        np.testing.assert_allclose(to_dense(op), expand_cp_sum(terms), atol=1e-15)

    def test_cancelling_sum_is_zero(self):
        """A sum whose terms cancel returns the canonical zero."""
        sz = LocalOperator.of("sz")
        terms = CPOperatorSum(
            n_sites=4,
            terms=[
                CPTerm(coeff=3.0, factors={1: sz, 2: sz}),
                CPTerm(coeff=-3.0, factors={1: sz, 2: sz}),
            ],
        )
        op, report = amen_sum(terms)
        assert op.ranks == [1] * 5
        assert norm(op) == 0.0
        assert report.final_rel_error_estimate == 0.0

    def test_empty_sum(self):
        """An empty sum is a structure error."""
        with pytest.raises(StructureError):
            amen_sum(CPOperatorSum(n_sites=3))

    def test_rank_cap(self):
        """A binding cap is reported on the result and the report."""
        op, report = amen_sum(zz_all_pairs(8), SummationConfig(max_rank=1, max_sweeps=3))
        assert report.cap_limited
        assert op.cap_limited
        assert op.ranks == [1] * 9

    def test_initial_guess_operator(self):
        """An operator guess with matching modes is accepted."""
        terms = zz_all_pairs(6)
        op, _ = amen_sum(terms, SummationConfig(initial_guess=identity([2] * 6)))
        assert norm(op - analytic_zz_chain(6)) <= 1e-10 * norm(analytic_zz_chain(6))

    def test_default_guess_is_first_term(self):
        """Without a guess the run starts from the first nonzero term."""
        sz = LocalOperator.of("sz")
        terms = CPOperatorSum(
            n_sites=3,
            terms=[
                CPTerm(coeff=0.0, factors={0: sz}),
                CPTerm(coeff=0.5, factors={1: sz}),
                CPTerm(coeff=40.0, factors={2: sz}),
            ],
        )
        coeffs, factors = terms.factor_arrays()
        cores = AmenSummation(coeffs, factors, SummationConfig()).initial_cores()
        guess = TTOperator([c.reshape(1, 2, 2, 1) for c in cores])
        second = terms.model_copy(update={"terms": terms.terms[1:2]})
        np.testing.assert_allclose(to_dense(guess), expand_cp_sum(second), atol=1e-15)

    def test_initial_guess_mode_mismatch(self):
        """A guess on other modes is rejected."""
        with pytest.raises(ModeMismatchError):
            amen_sum(zz_all_pairs(4), SummationConfig(initial_guess=identity([2] * 5)))

    def test_liouville_result_is_operator(self, hn_pair):
        """Liouville sums compress to operators with 4x4 local modes."""
        terms = commutation_superoperator(hamiltonian_terms(hn_pair))
        op, _ = amen_sum(terms)
        assert isinstance(op, TTOperator)
        assert op.out_modes == [4, 4]
        assert terms.space_tag == SpaceTag.LIOUVILLE

    def test_seeded_runs_are_identical(self, zeeman_terms):
        """Equal seeds give identical cores."""
        a, _ = amen_sum(zeeman_terms, SummationConfig(seed=5))
        b, _ = amen_sum(zeeman_terms, SummationConfig(seed=5))
        for ca, cb in zip(a.cores, b.cores, strict=True):
            np.testing.assert_array_equal(ca, cb)

    def test_zeeman_plus_zz_ranks(self):
        """Zeeman plus all-pairs ZZ stays at rank 4 or less and matches TT-SVD."""
        terms = zeeman([7.0 * n - 20.0 for n in range(8)]) + zz_all_pairs(8)
        op, _ = amen_sum(terms, SummationConfig(rel_tolerance=1e-12))
        minimal = from_dense(expand_cp_sum(terms), [2] * 8, TruncationPolicy(rel_tolerance=1e-12))
        assert max(op.ranks) <= 4
        assert op.ranks == minimal.ranks

    def test_sweep_cost_linear_in_terms(self):
        """Four times the terms costs well under sixteen times per sweep."""

        def sweep_ms(terms):
            cfg = SummationConfig(rel_tolerance=1e-15, max_sweeps=3)
            runs = [amen_sum(terms, cfg)[1] for _ in range(3)]
            return min(r.wall_time_ms["sweeps"] / r.sweeps_used for r in runs)

        full = zz_all_pairs(24)
        quarter = full.model_copy(update={"terms": full.terms[: full.n_terms // 4]})
        assert sweep_ms(full) < 8 * sweep_ms(quarter)
