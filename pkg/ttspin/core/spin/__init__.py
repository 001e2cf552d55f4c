"""Spin-system model, CP Hamiltonian generation and analytic TT constructions."""

from ttspin.core.spin.analytic import analytic_total_sz, analytic_zz_chain, two_band_cores
from ttspin.core.spin.operators import (
    IDENTITY,
    SMINUS,
    SPLUS,
    SX,
    SY,
    SZ,
    LocalOperator,
    left_superoperator,
    right_superoperator,
    vectorize_local,
)
from ttspin.core.spin.states import detection_state
from ttspin.core.spin.system import (
    GYROMAGNETIC_MHZ_PER_T,
    Coupling,
    Spin,
    SpinSystem,
    coupling_kind,
    load_spin_system,
    parse_spin_system,
)
from ttspin.core.spin.terms import (
    CPOperatorSum,
    CPTerm,
    commutation_superoperator,
    cp_term_to_tt,
    cp_total_sz_difference,
    hamiltonian_terms,
)

__all__ = [
    "IDENTITY",
    "SX",
    "SY",
    "SZ",
    "SPLUS",
    "SMINUS",
    "LocalOperator",
    "left_superoperator",
    "right_superoperator",
    "vectorize_local",
    "GYROMAGNETIC_MHZ_PER_T",
    "Spin",
    "Coupling",
    "SpinSystem",
    "coupling_kind",
    "load_spin_system",
    "parse_spin_system",
    "CPTerm",
    "CPOperatorSum",
    "hamiltonian_terms",
    "commutation_superoperator",
    "cp_term_to_tt",
    "cp_total_sz_difference",
    "analytic_total_sz",
    "analytic_zz_chain",
    "two_band_cores",
    "detection_state",
]
