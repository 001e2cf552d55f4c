"""Conversion between tensor trains and dense arrays.

Operators are dense matrices of shape (prod(out_modes), prod(in_modes)) with
site 0 the slowest-varying index, the Kronecker ordering kron(A_0, A_1, ...).
"""

import math
from collections.abc import Sequence

import numpy as np

from ttspin.config import get_settings
from ttspin.core.exceptions import DenseCapError, ModeMismatchError
from ttspin.core.tt.rounding import svd, truncation_rank
from ttspin.core.tt.schemas import TruncationPolicy
from ttspin.core.tt.tensor import TensorTrain, TTOperator, TTVector, zeros


def to_dense(t: TensorTrain, max_entries: int | None = None) -> np.ndarray:
    """Contract a tensor train to a dense vector or matrix.

    Args:
        t: Tensor train.
        max_entries: Size cap (default: Settings.TTSPIN_DENSE_MAX_ENTRIES).

    Returns:
        1-D array for a TTVector, 2-D array for a TTOperator.

    Raises:
        DenseCapError: If the dense array would exceed the cap.
    """
    if max_entries is None:
        max_entries = get_settings().TTSPIN_DENSE_MAX_ENTRIES
    entries = math.prod(t.flat_modes)
    if entries > max_entries:
        raise DenseCapError(
            f"oracle cap exceeded: dense form has {entries} entries, cap is {max_entries}"
        )

    flat = t.flat_cores()
    full = flat[0].reshape(flat[0].shape[1], flat[0].shape[2])
    for core in flat[1:]:
        r, m, rr = core.shape
        full = (full @ core.reshape(r, m * rr)).reshape(-1, rr)
    vec = full.reshape(-1)
    if isinstance(t, TTVector):
        return vec

    out_modes, in_modes = t.out_modes, t.in_modes
    n_sites = t.n_sites
    interleaved = [d for pair in zip(out_modes, in_modes, strict=True) for d in pair]
    axes = list(range(0, 2 * n_sites, 2)) + list(range(1, 2 * n_sites, 2))
    return vec.reshape(interleaved).transpose(axes).reshape(
        math.prod(out_modes), math.prod(in_modes)
    )


def from_dense(
    a: np.ndarray,
    modes: Sequence[int],
    policy: TruncationPolicy | None = None,
    in_modes: Sequence[int] | None = None,
) -> TensorTrain:
    """TT-SVD of a dense vector (TTVector) or matrix (TTOperator).

    Args:
        a: 1-D array of length prod(modes), or 2-D array of shape
            (prod(modes), prod(in_modes)).
        modes: Mode sizes (output modes for a matrix).
        policy: Truncation policy (default: rel_tolerance 1e-12).
        in_modes: Input modes for a matrix (default: modes).

    Returns:
        Tensor train with ortho_center = N - 1.

    Raises:
        ModeMismatchError: If the array size does not match the modes.
    """
    policy = policy or TruncationPolicy()
    a = np.asarray(a, dtype=np.complex128)
    modes = list(modes)
    n_sites = len(modes)

    if a.ndim == 1:
        if a.size != math.prod(modes):
            raise ModeMismatchError(
                f"array length {a.size} does not equal product of modes {modes}"
            )
        vec = a
        flat_modes = modes
        in_modes = None
    elif a.ndim == 2:
        in_modes = list(in_modes) if in_modes is not None else modes
        if a.shape != (math.prod(modes), math.prod(in_modes)):
            raise ModeMismatchError(
                f"matrix shape {a.shape} does not match modes {modes} x {in_modes}"
            )
        axes = [ax for n in range(n_sites) for ax in (n, n_sites + n)]
        vec = a.reshape(modes + in_modes).transpose(axes).reshape(-1)
        flat_modes = [m * k for m, k in zip(modes, in_modes, strict=True)]
    else:
        raise ModeMismatchError(f"expected a vector or a matrix, got {a.ndim} axes")

    total = float(np.linalg.norm(vec))
    if total == 0.0:
        return zeros(modes, in_modes)

    delta = policy.site_tolerance(n_sites) * total
    cores = []
    discarded_sq = 0.0
    cap_limited = False
    rest = vec
    rank = 1
    for n in range(n_sites - 1):
        u, s, vh = svd(rest.reshape(rank * flat_modes[n], -1))
        new_rank, tail_sq, capped = truncation_rank(s, delta, policy.max_rank)
        discarded_sq += tail_sq
        cap_limited = cap_limited or capped
        cores.append(u[:, :new_rank].reshape(rank, flat_modes[n], new_rank))
        rest = s[:new_rank, None] * vh[:new_rank]
        rank = new_rank
    cores.append(rest.reshape(rank, flat_modes[-1], 1))

    kwargs = {
        "ortho_center": n_sites - 1,
        "cap_limited": cap_limited,
        "truncation_error": float(np.sqrt(discarded_sq)),
    }
    if in_modes is None:
        return TTVector(cores, **kwargs)
    op_cores = [
        core.reshape(core.shape[0], m, k, core.shape[2])
        for core, m, k in zip(cores, modes, in_modes, strict=True)
    ]
    return TTOperator(op_cores, **kwargs)
