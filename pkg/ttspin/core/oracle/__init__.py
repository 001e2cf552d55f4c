"""Dense brute-force oracle for small spin systems."""

from ttspin.core.oracle.dense import (
    DenseLimits,
    dense_detection_state,
    dense_hamiltonian,
    dense_liouvillian,
    dense_resolvent_spectrum,
    dense_shifted,
    dense_spectrum,
    devectorize,
    expand_cp_sum,
    vectorize,
)

__all__ = [
    "DenseLimits",
    "expand_cp_sum",
    "vectorize",
    "devectorize",
    "dense_hamiltonian",
    "dense_liouvillian",
    "dense_detection_state",
    "dense_shifted",
    "dense_spectrum",
    "dense_resolvent_spectrum",
]
