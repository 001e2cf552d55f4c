"""Exact tensor-train arithmetic.

add concatenates cores block-diagonally (ranks add), apply and compose
take Kronecker products of rank indices (ranks multiply). None of these
truncate; call round_tt afterwards.
"""

from typing import TypeVar

import numpy as np

from ttspin.core.exceptions import ModeMismatchError
from ttspin.core.tt.gauge import orthogonalize
from ttspin.core.tt.tensor import TensorTrain, TTOperator, TTVector, check_same_modes

T = TypeVar("T", bound=TensorTrain)


def add(a: T, b: T) -> T:
    """Exact sum a + b with ranks r_a + r_b at every interior bond."""
    check_same_modes(a, b)
    fa, fb = a.flat_cores(), b.flat_cores()
    n_sites = a.n_sites
    if n_sites == 1:
        return a.rebuild([fa[0] + fb[0]])

    cores = []
    for n, (ca, cb) in enumerate(zip(fa, fb, strict=True)):
        if n == 0:
            core = np.concatenate([ca, cb], axis=2)
        elif n == n_sites - 1:
            core = np.concatenate([ca, cb], axis=0)
        else:
            ra, m, rra = ca.shape
            rb, _, rrb = cb.shape
            core = np.zeros((ra + rb, m, rra + rrb), dtype=np.complex128)
            core[:ra, :, :rra] = ca
            core[ra:, :, rra:] = cb
        cores.append(core)
    return a.rebuild(cores)


def scale(a: T, alpha: complex) -> T:
    """alpha * a. The gauge is kept by scaling the center core when one is set."""
    target = a.ortho_center if a.ortho_center is not None else 0
    cores = a.flat_cores()
    cores[target] = cores[target] * alpha
    return a.rebuild(cores, ortho_center=a.ortho_center)


def apply(op: TTOperator, x: TTVector) -> TTVector:
    """Matrix-vector product; result ranks are rank(op) * rank(x)."""
    if op.in_modes != x.modes:
        raise ModeMismatchError(
            f"operator input modes {op.in_modes} do not match vector modes {x.modes}"
        )
    cores = []
    for a_core, x_core in zip(op.cores, x.cores, strict=True):
        ra, m, _, rra = a_core.shape
        rx, _, rrx = x_core.shape
        core = np.einsum("aijb,cjd->acibd", a_core, x_core)
        cores.append(core.reshape(ra * rx, m, rra * rrx))
    return TTVector(cores)


def compose(a: TTOperator, b: TTOperator) -> TTOperator:
    """Operator product a @ b; result ranks are rank(a) * rank(b)."""
    if a.in_modes != b.out_modes:
        raise ModeMismatchError(
            f"input modes {a.in_modes} do not match output modes {b.out_modes}"
        )
    cores = []
    for a_core, b_core in zip(a.cores, b.cores, strict=True):
        ra, m, _, rra = a_core.shape
        rb, _, k, rrb = b_core.shape
        core = np.einsum("aijb,cjkd->acikbd", a_core, b_core)
        cores.append(core.reshape(ra * rb, m, k, rra * rrb))
    return TTOperator(cores)


def inner(x: TensorTrain, y: TensorTrain) -> complex:
    """Hermitian inner product <x, y> = sum conj(x) * y, linear in y."""
    check_same_modes(x, y)
    env = np.ones((1, 1), dtype=np.complex128)
    for cx, cy in zip(x.flat_cores(), y.flat_cores(), strict=True):
        env = np.einsum("ab,aic,bid->cd", env, cx.conj(), cy)
    return complex(env[0, 0])


def norm(x: TensorTrain) -> float:
    """Frobenius norm, read off the center core after orthogonalization."""
    if x.ortho_center is None:
        x = orthogonalize(x, x.n_sites - 1)
    return float(np.linalg.norm(x.cores[x.ortho_center]))


