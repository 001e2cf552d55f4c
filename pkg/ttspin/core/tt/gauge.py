"""Orthogonalization sweeps (gauge moves)."""

from typing import TypeVar

import numpy as np
import scipy.linalg

from ttspin.core.exceptions import StructureError
from ttspin.core.tt.tensor import TensorTrain

T = TypeVar("T", bound=TensorTrain)


def left_qr(core: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """QR of the (r*m, r') unfolding. Returns the left-orthonormal core and R."""
    r, m, rr = core.shape
    q, rmat = scipy.linalg.qr(core.reshape(r * m, rr), mode="economic")
    return q.reshape(r, m, q.shape[1]), rmat


def right_qr(core: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """QR of the transposed (r, m*r') unfolding.

    Returns the right-orthonormal core Q^T and R such that core = R^T Q^T.
    """
    r, m, rr = core.shape
    q, rmat = scipy.linalg.qr(core.reshape(r, m * rr).T, mode="economic")
    return q.T.reshape(q.shape[1], m, rr), rmat


def orthogonalize(t: T, center: int) -> T:
    """Move the orthogonality center of t to `center`.

    Cores left of center become left-orthonormal, cores right of it
    right-orthonormal. The represented tensor is unchanged. When t already
    records a center only the cores in between are swept.

    Args:
        t: Tensor train.
        center: Target center, 0 <= center < N.

    Returns:
        Tensor train of the same kind with ortho_center = center.
    """
    n_sites = t.n_sites
    if not 0 <= center < n_sites:
        raise StructureError(f"center {center} outside 0..{n_sites - 1}")

    start_left, start_right = 0, n_sites - 1
    if t.ortho_center is not None:
        start_left = min(t.ortho_center, center)
        start_right = max(t.ortho_center, center)

    cores = t.flat_cores()
    for n in range(start_left, center):
        cores[n], rmat = left_qr(cores[n])
        cores[n + 1] = np.einsum("ab,bjc->ajc", rmat, cores[n + 1])
    for n in range(start_right, center, -1):
        cores[n], rmat = right_qr(cores[n])
        cores[n - 1] = np.einsum("ajb,cb->ajc", cores[n - 1], rmat)
    return t.rebuild(
        cores,
        ortho_center=center,
        cap_limited=t.cap_limited,
        truncation_error=t.truncation_error,
    )
