"""CP (sum of Kronecker products) operator sums and their generators.

A CPOperatorSum stores each term as a coefficient and a sparse map
site -> LocalOperator; sites absent from the map carry the identity.
"""

import logging
import math

import numpy as np
from pydantic import Field, model_validator

from ttspin.core.exceptions import SpinSystemError
from ttspin.core.spin.operators import (
    IDENTITY,
    LocalOperator,
    left_superoperator,
    right_superoperator,
)
from ttspin.core.spin.system import SpinSystem, coupling_kind
from ttspin.core.tt.tensor import TTOperator
from ttspin.schemas.base import ArraySchema
from ttspin.schemas.enums import CouplingKind, LocalOperatorKind, SpaceTag

logger = logging.getLogger(__name__)

LOCAL_DIM = {SpaceTag.HILBERT: 2, SpaceTag.LIOUVILLE: 4}


class CPTerm(ArraySchema):
    """coeff * kron over sites of factors[site] (identity where absent)."""

    coeff: complex
    factors: dict[int, LocalOperator] = Field(..., min_length=1)


class CPOperatorSum(ArraySchema):
    """List of Kronecker-product terms on a chain of n_sites sites."""

    n_sites: int = Field(..., ge=1)
    space_tag: SpaceTag = SpaceTag.HILBERT
    terms: list[CPTerm] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_terms(self) -> "CPOperatorSum":
        dim = self.local_dim
        for k, term in enumerate(self.terms):
            for site, op in term.factors.items():
                if not 0 <= site < self.n_sites:
                    raise ValueError(f"term {k} acts on site {site} outside 0..{self.n_sites - 1}")
                if op.dim != dim:
                    raise ValueError(
                        f"term {k} has a {op.dim}x{op.dim} factor in {self.space_tag} space"
                    )
        return self

    @property
    def local_dim(self) -> int:
        return LOCAL_DIM[SpaceTag(self.space_tag)]

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def local_matrix(self, k: int, site: int) -> np.ndarray:
        op = self.terms[k].factors.get(site)
        return np.eye(self.local_dim, dtype=np.complex128) if op is None else op.matrix

    def factor_arrays(self) -> tuple[np.ndarray, list[np.ndarray]]:
        """Dense per-site factor stacks.

        Returns:
            (coeffs of shape (K,), per site an array (K, d*d) holding each
            term's local matrix flattened row-major).
        """
        dim = self.local_dim
        coeffs = np.array([term.coeff for term in self.terms], dtype=np.complex128)
        eye = np.eye(dim, dtype=np.complex128).reshape(-1)
        stacks = []
        for site in range(self.n_sites):
            stack = np.tile(eye, (self.n_terms, 1))
            for k, term in enumerate(self.terms):
                op = term.factors.get(site)
                if op is not None:
                    stack[k] = op.matrix.reshape(-1)
            stacks.append(stack)
        return coeffs, stacks

    def __add__(self, other: "CPOperatorSum") -> "CPOperatorSum":
        if (self.n_sites, self.space_tag) != (other.n_sites, other.space_tag):
            raise ValueError("cannot concatenate CP sums on different spaces")
        return CPOperatorSum(
            n_sites=self.n_sites, space_tag=self.space_tag, terms=self.terms + other.terms
        )


def _term(coeff: complex, factors: dict[int, LocalOperatorKind]) -> CPTerm:
    return CPTerm(coeff=coeff, factors={s: LocalOperator.of(k) for s, k in factors.items()})


def hamiltonian_terms(system: SpinSystem) -> CPOperatorSum:
    """Liquid-state Hamiltonian in angular units as a Hilbert-space CP sum.

    One Zeeman term 2*pi*offset*sz per spin; per homonuclear coupling the
    three terms of 2*pi*J*(sx sx + sy sy + sz sz); per heteronuclear
    coupling the single term 2*pi*J*sz sz.
    """
    kind = LocalOperatorKind
    terms = [
        _term(2 * math.pi * spin.offset_hz, {n: kind.SZ})
        for n, spin in enumerate(system.spins)
    ]
    for coupling in system.couplings:
        coeff = 2 * math.pi * coupling.j_hz
        i, j = coupling.i, coupling.j
        if coupling_kind(system, coupling) == CouplingKind.STRONG:
            for axis in (kind.SX, kind.SY, kind.SZ):
                terms.append(_term(coeff, {i: axis, j: axis}))
        else:
            terms.append(_term(coeff, {i: kind.SZ, j: kind.SZ}))
    logger.debug(
        "Generated Hamiltonian terms",
        extra={"n_spins": system.n_spins, "n_terms": len(terms)},
    )
    return CPOperatorSum(n_sites=system.n_spins, space_tag=SpaceTag.HILBERT, terms=terms)


def commutation_superoperator(terms: CPOperatorSum) -> CPOperatorSum:
    """Liouville-space CP sum of rho -> [H, rho].

    Each Hilbert term c * kron_n h_n becomes +c * kron_n (h_n x 1) and
    -c * kron_n (1 x h_n^T).

    Raises:
        SpinSystemError: If the input is already a Liouville-space sum.
    """
    if terms.space_tag != SpaceTag.HILBERT:
        raise SpinSystemError("commutation_superoperator needs a hilbert-space sum")
    out = []
    for term in terms.terms:
        left = {s: LocalOperator(matrix=left_superoperator(op.matrix)) for s, op in term.factors.items()}
        right = {s: LocalOperator(matrix=right_superoperator(op.matrix)) for s, op in term.factors.items()}
        out.append(CPTerm(coeff=term.coeff, factors=left))
        out.append(CPTerm(coeff=-term.coeff, factors=right))
    return CPOperatorSum(n_sites=terms.n_sites, space_tag=SpaceTag.LIOUVILLE, terms=out)


def cp_term_to_tt(term: CPTerm, n_sites: int, local_dim: int = 2) -> TTOperator:
    """Rank-1 TT operator of a single term, coefficient folded into site 0."""
    eye = np.eye(local_dim, dtype=np.complex128)
    cores = []
    for site in range(n_sites):
        op = term.factors.get(site)
        matrix = eye if op is None else op.matrix
        if site == 0:
            matrix = term.coeff * matrix
        cores.append(matrix.reshape(1, local_dim, local_dim, 1))
    return TTOperator(cores)


def cp_total_sz_difference(n_sites: int, epsilon: float) -> CPOperatorSum:
    """Two-term CP form of total Sz: ((1 + eps*sz)^{xN} - 1^{xN}) / eps.

    Exact in exact arithmetic up to O(eps); in floating point the
    subtraction cancels about -log10(eps) significant digits.
    """
    shifted = LocalOperator(matrix=IDENTITY + epsilon * LocalOperator.of("sz").matrix)
    ident = LocalOperator.of(LocalOperatorKind.IDENTITY)
    terms = [
        CPTerm(coeff=1.0 / epsilon, factors={n: shifted for n in range(n_sites)}),
        CPTerm(coeff=-1.0 / epsilon, factors={n: ident for n in range(n_sites)}),
    ]
    return CPOperatorSum(n_sites=n_sites, space_tag=SpaceTag.HILBERT, terms=terms)
