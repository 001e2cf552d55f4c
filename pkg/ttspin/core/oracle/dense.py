"""Brute-force dense reference for every quantity the TT code computes.

Everything here uses full 2^N x 2^N Hilbert or 4^N x 4^N Liouville
matrices and a general direct solver. The spin-1/2 matrices, the 2*pi
conversion and the per-site vectorization come from the spin package, but
the Liouvillian is built globally as H x 1 - 1 x H^T and then permuted
into the site-ordered basis, independently of the CP/TT code paths.
"""

import logging
from collections.abc import Sequence
from functools import reduce

import numpy as np
import scipy.linalg
from pydantic import BaseModel, Field

from ttspin.config import get_settings
from ttspin.core.exceptions import DenseCapError, SpinSystemError
from ttspin.core.spin.operators import SPLUS
from ttspin.core.spin.system import SpinSystem
from ttspin.core.spin.terms import CPOperatorSum, hamiltonian_terms
from ttspin.schemas.enums import SpaceTag

logger = logging.getLogger(__name__)


class DenseLimits(BaseModel):
    """Size caps of the oracle, in spins."""

    max_hilbert_spins: int = Field(
        default_factory=lambda: get_settings().TTSPIN_MAX_HILBERT_SPINS, ge=1
    )
    max_liouville_spins: int = Field(
        default_factory=lambda: get_settings().TTSPIN_MAX_LIOUVILLE_SPINS, ge=1
    )

    def check_hilbert(self, n_spins: int) -> None:
        if n_spins > self.max_hilbert_spins:
            raise DenseCapError(
                f"oracle cap exceeded: {n_spins} spins > {self.max_hilbert_spins} (Hilbert space)"
            )

    def check_liouville(self, n_spins: int) -> None:
        if n_spins > self.max_liouville_spins:
            raise DenseCapError(
                f"oracle cap exceeded: {n_spins} spins > {self.max_liouville_spins} (Liouville space)"
            )


def _kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)


def expand_cp_sum(terms: CPOperatorSum, limits: DenseLimits | None = None) -> np.ndarray:
    """Dense Kronecker expansion of a CP sum (site 0 slowest)."""
    limits = limits or DenseLimits()
    if terms.space_tag == SpaceTag.HILBERT:
        limits.check_hilbert(terms.n_sites)
    else:
        limits.check_liouville(terms.n_sites)
    dim = terms.local_dim**terms.n_sites
    out = np.zeros((dim, dim), dtype=np.complex128)
    for k, term in enumerate(terms.terms):
        mats = [terms.local_matrix(k, site) for site in range(terms.n_sites)]
        out += term.coeff * _kron_all(mats)
    return out


def _interleave(n_spins: int) -> list[int]:
    return [ax for n in range(n_spins) for ax in (n, n_spins + n)]


def vectorize(rho: np.ndarray, n_spins: int) -> np.ndarray:
    """Density matrix -> site-ordered Liouville vector (i_1 j_1 i_2 j_2 ...)."""
    tensor = np.asarray(rho, dtype=np.complex128).reshape([2] * (2 * n_spins))
    return tensor.transpose(_interleave(n_spins)).reshape(-1)


def devectorize(vec: np.ndarray, n_spins: int) -> np.ndarray:
    """Inverse of vectorize."""
    tensor = np.asarray(vec, dtype=np.complex128).reshape([2] * (2 * n_spins))
    return tensor.transpose(np.argsort(_interleave(n_spins))).reshape(2**n_spins, 2**n_spins)


def dense_hamiltonian(system: SpinSystem, limits: DenseLimits | None = None) -> np.ndarray:
    """Hilbert-space Hamiltonian in rad/s."""
    limits = limits or DenseLimits()
    limits.check_hilbert(system.n_spins)
    return expand_cp_sum(hamiltonian_terms(system), limits)


def dense_liouvillian(system: SpinSystem, limits: DenseLimits | None = None) -> np.ndarray:
    """Commutation superoperator in the site-ordered Liouville basis."""
    limits = limits or DenseLimits()
    limits.check_liouville(system.n_spins)
    n_spins = system.n_spins
    h = dense_hamiltonian(system, limits)
    eye = np.eye(2**n_spins)
    lv = np.kron(h, eye) - np.kron(eye, h.T)
    perm = _interleave(n_spins)
    lv = lv.reshape([2] * (4 * n_spins))
    lv = lv.transpose(perm + [2 * n_spins + p for p in perm])
    return lv.reshape(4**n_spins, 4**n_spins)


def dense_detection_state(system: SpinSystem, isotope: str) -> np.ndarray:
    """vec(sum of s+ over spins of isotope)."""
    sites = system.sites_of(isotope)
    if not sites:
        raise SpinSystemError(f"no spin of isotope {isotope} in the system")
    n_spins = system.n_spins
    eye = np.eye(2, dtype=np.complex128)
    total = sum(
        _kron_all([SPLUS if n == site else eye for n in range(n_spins)]) for site in sites
    )
    return vectorize(total, n_spins)


def dense_shifted(liouvillian: np.ndarray, omega: float, mu: float) -> np.ndarray:
    """(L + omega)^2 + mu^2 as L*L + 2 omega L + (omega^2 + mu^2) 1."""
    eye = np.eye(liouvillian.shape[0])
    return (
        liouvillian.conj().T @ liouvillian
        + 2.0 * omega * liouvillian
        + (omega**2 + mu**2) * eye
    )


def dense_spectrum(
    system: SpinSystem,
    omegas: Sequence[float],
    isotope: str,
    limits: DenseLimits | None = None,
) -> np.ndarray:
    """O(omega) = Re <det | mu (L*L + 2 omega L + (omega^2 + mu^2))^-1 rho0>.

    rho0 and the observable are both the detection state.
    """
    liouvillian = dense_liouvillian(system, limits)
    rho0 = dense_detection_state(system, isotope)
    mu = system.damping_mu
    out = np.empty(len(omegas))
    for k, omega in enumerate(omegas):
        y = scipy.linalg.solve(dense_shifted(liouvillian, omega, mu), rho0)
        out[k] = float(np.real(np.vdot(rho0, mu * y)))
    return out


def dense_resolvent_spectrum(
    system: SpinSystem,
    omegas: Sequence[float],
    isotope: str,
    limits: DenseLimits | None = None,
) -> np.ndarray:
    """Re(-i <det | (L - i mu + omega)^-1 rho0>), the unsymmetrized form."""
    liouvillian = dense_liouvillian(system, limits)
    rho0 = dense_detection_state(system, isotope)
    mu = system.damping_mu
    eye = np.eye(liouvillian.shape[0])
    out = np.empty(len(omegas))
    for k, omega in enumerate(omegas):
        y = scipy.linalg.solve(liouvillian + (omega - 1j * mu) * eye, rho0)
        out[k] = float(np.real(-1j * np.vdot(rho0, y)))
    return out
