"""Tests for the dense brute-force oracle."""

import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from ttspin.core.exceptions import DenseCapError, SpinSystemError
from ttspin.core.oracle import (
    DenseLimits,
    dense_detection_state,
    dense_hamiltonian,
    dense_liouvillian,
    dense_resolvent_spectrum,
    dense_shifted,
    dense_spectrum,
    expand_cp_sum,
    vectorize,
)
from ttspin.core.spin import commutation_superoperator, hamiltonian_terms


class TestLimits:
    """Tests for DenseLimits."""

    def test_defaults_from_settings(self):
        """Caps default to the configured spin counts."""
        limits = DenseLimits()
        assert limits.max_hilbert_spins == 12
        assert limits.max_liouville_spins == 7

    def test_liouville_cap(self, make_system):
        """Liouville matrices beyond the cap are refused."""
        with pytest.raises(DenseCapError) as exc:
            dense_liouvillian(make_system(0, 4), DenseLimits(max_liouville_spins=3))
        assert exc.value.exit_code == 6

    def test_hilbert_cap(self, make_system):
        """Hilbert matrices beyond the cap are refused."""
        with pytest.raises(DenseCapError):
            dense_hamiltonian(make_system(0, 4), DenseLimits(max_hilbert_spins=3))

    def test_cp_expansion_cap(self, make_system):
        """Liouville CP sums use the Liouville cap."""
        terms = commutation_superoperator(hamiltonian_terms(make_system(1, 3)))
        with pytest.raises(DenseCapError):
            expand_cp_sum(terms, DenseLimits(max_liouville_spins=2))


class TestLiouvillian:
    """Tests for dense_liouvillian and dense_shifted."""

    @pytest.mark.parametrize("seed", range(5))
    def test_hermitian(self, make_system, seed):
        """The commutation superoperator of a Hermitian H is Hermitian."""
        lv = dense_liouvillian(make_system(seed, 3))
        np.testing.assert_allclose(lv, lv.conj().T, atol=1e-10)

    @pytest.mark.parametrize("seed", range(5))
    def test_commutator(self, make_system, seed):
        """L vec(rho) equals vec(H rho - rho H)."""
        system = make_system(seed, 3)
        h = dense_hamiltonian(system)
        rho = np.random.default_rng(seed).standard_normal((8, 8))
        np.testing.assert_allclose(
            dense_liouvillian(system) @ vectorize(rho, 3),
            vectorize(h @ rho - rho @ h, 3),
            atol=1e-9,
        )

    def test_identity_in_kernel(self, hn_pair):
        """The identity commutes with every Hamiltonian."""
        lv = dense_liouvillian(hn_pair)
        np.testing.assert_allclose(lv @ vectorize(np.eye(4), 2), 0.0, atol=1e-10)

    def test_shifted_is_positive_definite(self, hn_pair):
        """(L + omega)^2 + mu^2 has spectrum bounded below by mu^2."""
        mu = hn_pair.damping_mu
        shifted = dense_shifted(dense_liouvillian(hn_pair), -300.0, mu)
        assert np.linalg.eigvalsh(shifted).min() >= mu**2 * (1 - 1e-10)


class TestSpectrum:
    """Tests for dense_spectrum and dense_resolvent_spectrum."""

    def test_single_spin_lorentzian(self, single_spin):
        """An isolated spin gives mu / ((omega + 2 pi nu)^2 + mu^2)."""
        mu = single_spin.damping_mu
        omegas = np.linspace(-2 * math.pi * 60, 2 * math.pi * 10, 71)
        expected = mu / ((omegas + 2 * math.pi * 25.0) ** 2 + mu**2)
        np.testing.assert_allclose(dense_spectrum(single_spin, omegas, "15N"), expected, rtol=1e-10)
        np.testing.assert_allclose(
            dense_resolvent_spectrum(single_spin, omegas, "15N"), expected, rtol=1e-10
        )

    @pytest.mark.parametrize("seed", range(20))
    def test_symmetric_form_matches_resolvent(self, make_system, seed):
        """The shifted-square form equals the resolvent form."""
        system = make_system(seed, 3)
        isotope = system.spins[0].isotope
        omegas = np.linspace(-2 * math.pi * 250, 2 * math.pi * 250, 9)
        np.testing.assert_allclose(
            dense_spectrum(system, omegas, isotope),
            dense_resolvent_spectrum(system, omegas, isotope),
            rtol=1e-8,
            atol=1e-12,
        )

    def test_doublet(self, hn_pair):
        """A weakly coupled proton splits into lines at nu +- J/2 of height 1/mu."""
        mu = hn_pair.damping_mu
        peaks = np.array([-2 * math.pi * 75.0, -2 * math.pi * 165.0])
        centre = np.array([-2 * math.pi * 120.0])
        values = dense_spectrum(hn_pair, peaks, "1H")
        np.testing.assert_allclose(values, 1.0 / mu, rtol=1e-2)
        assert dense_spectrum(hn_pair, centre, "1H")[0] < 0.1 * values.min()

    def test_positive(self, make_system):
        """Spectra are positive everywhere."""
        system = make_system(3, 3)
        omegas = np.linspace(-2 * math.pi * 400, 2 * math.pi * 400, 41)
        assert np.all(dense_spectrum(system, omegas, system.spins[0].isotope) > 0)

    def test_area_is_coupling_independent(self, hn_pair):
        """Integrated intensity is pi ||rho0||^2 with or without coupling."""
        omegas = np.linspace(-2 * math.pi * 2000, 2 * math.pi * 2000, 8001)
        rho0 = dense_detection_state(hn_pair, "1H")
        expected = math.pi * float(np.vdot(rho0, rho0).real)
        uncoupled = hn_pair.model_copy(update={"couplings": []})
        for system in (hn_pair, uncoupled):
            area = trapezoid(dense_spectrum(system, omegas, "1H"), omegas)
            assert area == pytest.approx(expected, rel=1e-2)

    @pytest.mark.parametrize("half_width_hz", [2.0, 20.0])
    def test_area_is_damping_independent(self, single_spin, half_width_hz):
        """Narrow and broad lines of one spin integrate to the same pi ||rho0||^2."""
        system = single_spin.model_copy(update={"damping_mu": 2 * math.pi * half_width_hz})
        omegas = np.linspace(-2 * math.pi * 2000, 2 * math.pi * 2000, 8001)
        rho0 = dense_detection_state(system, "15N")
        expected = math.pi * float(np.vdot(rho0, rho0).real)
        area = trapezoid(dense_spectrum(system, omegas, "15N"), omegas)
        assert area == pytest.approx(expected, rel=1e-2)

    def test_missing_isotope(self, hn_pair):
        """Detecting an absent isotope is a spin-system error."""
        with pytest.raises(SpinSystemError):
            dense_detection_state(hn_pair, "13C")
