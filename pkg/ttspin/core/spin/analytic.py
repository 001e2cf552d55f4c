"""Closed-form TT operators for total Sz and all-pairs ZZ coupling."""

from collections.abc import Sequence

import numpy as np

from ttspin.core.exceptions import StructureError
from ttspin.core.spin.operators import IDENTITY, SZ
from ttspin.core.tt.tensor import TTOperator, TTVector


def two_band_cores(blocks: Sequence[np.ndarray], unit: np.ndarray) -> list[np.ndarray]:
    """Cores of sum_n (unit x ... x blocks[n] x ... x unit), ranks 2.

    First core [b_0, 1], interior [[1, 0], [b_n, 1]], last [1, b_N]^T. A
    single site gives the bare block.
    """
    n_sites = len(blocks)
    shape = unit.shape
    if n_sites == 1:
        return [np.asarray(blocks[0], dtype=np.complex128).reshape(1, *shape, 1)]
    cores = []
    for n, block in enumerate(blocks):
        if n == 0:
            core = np.zeros((1, *shape, 2), dtype=np.complex128)
            core[0, ..., 0] = block
            core[0, ..., 1] = unit
        elif n == n_sites - 1:
            core = np.zeros((2, *shape, 1), dtype=np.complex128)
            core[0, ..., 0] = unit
            core[1, ..., 0] = block
        else:
            core = np.zeros((2, *shape, 2), dtype=np.complex128)
            core[0, ..., 0] = unit
            core[1, ..., 0] = block
            core[1, ..., 1] = unit
        cores.append(core)
    return cores


def analytic_total_sz(n_sites: int) -> TTOperator:
    """Rank-2 TT of sum_n sz^(n); stores 4N - 4 local blocks."""
    if n_sites < 2:
        raise StructureError("analytic_total_sz needs at least two sites")
    return TTOperator(two_band_cores([SZ] * n_sites, IDENTITY))


def analytic_zz_chain(n_sites: int) -> TTOperator:
    """Rank-3 TT of sum_{n<m} sz^(n) sz^(m) over all pairs; stores 9N - 12 blocks.

    First core [0, sz, 1], interior [[1, 0, 0], [sz, 1, 0], [0, sz, 1]],
    last [1, sz, 0]^T.
    """
    if n_sites < 2:
        raise StructureError("analytic_zz_chain needs at least two sites")
    zero = np.zeros((2, 2), dtype=np.complex128)
    first = np.stack([zero, SZ, IDENTITY], axis=-1)[None]
    interior = np.zeros((3, 2, 2, 3), dtype=np.complex128)
    interior[0, ..., 0] = IDENTITY
    interior[1, ..., 0] = SZ
    interior[1, ..., 1] = IDENTITY
    interior[2, ..., 1] = SZ
    interior[2, ..., 2] = IDENTITY
    last = np.stack([IDENTITY, SZ, zero], axis=0)[..., None]
    return TTOperator([first] + [interior] * (n_sites - 2) + [last])


def analytic_sum_vector(blocks: Sequence[np.ndarray], unit: np.ndarray) -> TTVector:
    """Rank-2 TT vector of sum_n (unit x ... x blocks[n] x ... x unit)."""
    return TTVector(two_band_cores(blocks, unit))
