"""Liouville-space states."""

import numpy as np

from ttspin.core.exceptions import SpinSystemError
from ttspin.core.spin.analytic import analytic_sum_vector
from ttspin.core.spin.operators import IDENTITY, SPLUS, vectorize_local
from ttspin.core.spin.system import SpinSystem
from ttspin.core.tt.tensor import TTVector


def detection_state(system: SpinSystem, isotope: str) -> TTVector:
    """Vectorized total raising operator over every spin of `isotope`.

    Serves as both initial state and observable. Built with the two-band
    structure: vec(s+) on matching sites, zero on the others, vec(1) as
    the unit block.

    Raises:
        SpinSystemError: If no spin of that isotope exists.
    """
    sites = set(system.sites_of(isotope))
    if not sites:
        raise SpinSystemError(f"no spin of isotope {isotope} in the system")
    plus = vectorize_local(SPLUS)
    zero = np.zeros_like(plus)
    blocks = [plus if n in sites else zero for n in range(system.n_spins)]
    return analytic_sum_vector(blocks, vectorize_local(IDENTITY))
