"""TT rounding: recompression to minimal ranks within an error budget."""

import logging
from typing import TypeVar

import numpy as np
import scipy.linalg

from ttspin.core.tt.gauge import orthogonalize
from ttspin.core.tt.schemas import TruncationPolicy
from ttspin.core.tt.tensor import TensorTrain, TTVector, zeros

logger = logging.getLogger(__name__)

T = TypeVar("T", bound=TensorTrain)


def svd(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD, falling back to the QR-iteration driver if gesdd fails."""
    try:
        return scipy.linalg.svd(mat, full_matrices=False)
    except np.linalg.LinAlgError:
        return scipy.linalg.svd(mat, full_matrices=False, lapack_driver="gesvd")


def truncation_rank(
    singular_values: np.ndarray, delta: float, max_rank: int | None = None
) -> tuple[int, float, bool]:
    """Smallest rank whose discarded tail has Frobenius norm <= delta.

    Args:
        singular_values: Non-increasing singular values.
        delta: Absolute tolerance for the discarded tail.
        max_rank: Optional cap.

    Returns:
        (rank, discarded squared norm, whether the cap reduced the rank).
        The rank is at least 1.
    """
    sq = np.abs(singular_values) ** 2
    tail = np.append(np.cumsum(sq[::-1])[::-1], 0.0)
    rank = max(int(np.argmax(tail <= delta**2)), 1)
    capped = False
    if max_rank is not None and rank > max_rank:
        rank, capped = max_rank, True
    return rank, float(tail[rank]), capped


def round_tt(t: T, policy: TruncationPolicy | None = None) -> T:
    """Recompress t to the smallest ranks allowed by policy.

    The result r satisfies ||r - t|| <= rel_tolerance * ||t|| unless the
    rank cap intervened, in which case r.cap_limited is True. r carries the
    absolute discarded norm in r.truncation_error and ortho_center = 0.

    Args:
        t: Tensor train to round.
        policy: Truncation policy (default: rel_tolerance 1e-12, no cap).

    Returns:
        Rounded tensor train of the same kind.
    """
    policy = policy or TruncationPolicy()
    n_sites = t.n_sites
    t = orthogonalize(t, n_sites - 1)
    cores = t.flat_cores()
    total = float(np.linalg.norm(cores[-1]))
    if total == 0.0:
        in_modes = None if isinstance(t, TTVector) else t.in_modes
        return zeros(t.modes, in_modes)
    if n_sites == 1:
        return t

    delta = policy.site_tolerance(n_sites) * total
    discarded_sq = 0.0
    cap_limited = False
    for n in range(n_sites - 1, 0, -1):
        r, m, rr = cores[n].shape
        u, s, vh = svd(cores[n].reshape(r, m * rr))
        rank, tail_sq, capped = truncation_rank(s, delta, policy.max_rank)
        discarded_sq += tail_sq
        cap_limited = cap_limited or capped
        cores[n] = vh[:rank].reshape(rank, m, rr)
        cores[n - 1] = np.einsum("ajb,bc->ajc", cores[n - 1], u[:, :rank] * s[:rank])

    if cap_limited:
        logger.debug(
            "rank cap %s limited rounding: discarded %.3e of %.3e",
            policy.max_rank,
            np.sqrt(discarded_sq),
            total,
        )
    return t.rebuild(
        cores,
        ortho_center=0,
        cap_limited=cap_limited,
        truncation_error=float(np.sqrt(discarded_sq)),
    )
