"""Tensor-train containers.

A tensor train is a chain of 3-way cores (r_{n-1}, m_n, r_n) for vectors or
4-way cores (r_{n-1}, m_n, m'_n, r_n) for operators, with r_0 = r_N = 1.
Instances are immutable: every operation returns a new object.

Algorithms that do not care about the operator structure work on "flat"
cores, where an operator core is stretched to (r, m * m', r').
"""

from collections.abc import Sequence
from typing import Self

import numpy as np

from ttspin.core.exceptions import ModeMismatchError, StructureError
from ttspin.core.tt.schemas import RankProfile, StructureReport

ORTHONORMAL_TOL = 1e-10


class TensorTrain:
    """Common base of TTVector and TTOperator."""

    core_ndim: int = 3

    def __init__(
        self,
        cores: Sequence[np.ndarray],
        ortho_center: int | None = None,
        *,
        cap_limited: bool = False,
        truncation_error: float = 0.0,
    ) -> None:
        arrays = [np.array(core, dtype=np.complex128) for core in cores]
        report = validate_cores(arrays, self.core_ndim)
        if not report.ok:
            raise StructureError(report.message or "invalid cores", site=report.site)
        if ortho_center is not None and not 0 <= ortho_center < len(arrays):
            raise StructureError(f"ortho_center {ortho_center} outside the chain")
        for array in arrays:
            array.flags.writeable = False
        self._cores = tuple(arrays)
        self._ortho_center = ortho_center
        self.cap_limited = cap_limited
        self.truncation_error = truncation_error

    @property
    def cores(self) -> tuple[np.ndarray, ...]:
        return self._cores

    @property
    def n_sites(self) -> int:
        return len(self._cores)

    @property
    def ranks(self) -> list[int]:
        return [1] + [core.shape[-1] for core in self._cores]

    @property
    def ortho_center(self) -> int | None:
        return self._ortho_center

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.complex128)

    @property
    def flat_modes(self) -> list[int]:
        return [int(np.prod(core.shape[1:-1])) for core in self._cores]

    def flat_cores(self) -> list[np.ndarray]:
        """Cores reshaped to (r, M, r') with M the product of the physical modes."""
        return [
            core.reshape(core.shape[0], -1, core.shape[-1]) for core in self._cores
        ]

    def rebuild(
        self,
        flat_cores: Sequence[np.ndarray],
        ortho_center: int | None = None,
        *,
        cap_limited: bool = False,
        truncation_error: float = 0.0,
    ) -> Self:
        """Create an object of the same kind and modes from flat cores."""
        raise NotImplementedError

    def rank_profile(self) -> RankProfile:
        return RankProfile.from_ranks(self.ranks)

    def local_block_count(self) -> int:
        """Number of entries of the rank-block structure, sum of r_{n-1} * r_n."""
        ranks = self.ranks
        return sum(ranks[n] * ranks[n + 1] for n in range(self.n_sites))

    def storage(self) -> int:
        return sum(core.size for core in self._cores)

    def conj(self) -> Self:
        return self.rebuild(
            [core.conj() for core in self.flat_cores()], self._ortho_center
        )

    def __add__(self, other: Self) -> Self:
        from ttspin.core.tt.arithmetic import add

        return add(self, other)

    def __sub__(self, other: Self) -> Self:
        from ttspin.core.tt.arithmetic import add, scale

        return add(self, scale(other, -1.0))

    def __mul__(self, alpha: complex) -> Self:
        from ttspin.core.tt.arithmetic import scale

        return scale(self, alpha)

    __rmul__ = __mul__

    def __neg__(self) -> Self:
        return self * -1.0

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n_sites={self.n_sites}, ranks={self.ranks})"


class TTVector(TensorTrain):
    """Tensor train representing a vector of length prod(modes)."""

    core_ndim = 3

    @property
    def modes(self) -> list[int]:
        return [core.shape[1] for core in self._cores]

    def rebuild(
        self,
        flat_cores: Sequence[np.ndarray],
        ortho_center: int | None = None,
        *,
        cap_limited: bool = False,
        truncation_error: float = 0.0,
    ) -> "TTVector":
        return TTVector(
            flat_cores,
            ortho_center,
            cap_limited=cap_limited,
            truncation_error=truncation_error,
        )

    def as_operator(self, out_modes: Sequence[int], in_modes: Sequence[int]) -> "TTOperator":
        """Reinterpret each mode m_n as an (out_n, in_n) pair."""
        out_modes, in_modes = list(out_modes), list(in_modes)
        if [o * i for o, i in zip(out_modes, in_modes, strict=True)] != self.modes:
            raise ModeMismatchError(
                f"modes {self.modes} cannot be split into {out_modes} x {in_modes}"
            )
        cores = [
            core.reshape(core.shape[0], o, i, core.shape[2])
            for core, o, i in zip(self._cores, out_modes, in_modes, strict=True)
        ]
        return TTOperator(cores, self._ortho_center)


class TTOperator(TensorTrain):
    """Tensor train representing a prod(out_modes) x prod(in_modes) matrix."""

    core_ndim = 4

    @property
    def out_modes(self) -> list[int]:
        return [core.shape[1] for core in self._cores]

    @property
    def in_modes(self) -> list[int]:
        return [core.shape[2] for core in self._cores]

    @property
    def modes(self) -> list[int]:
        return self.out_modes

    @property
    def is_square(self) -> bool:
        return self.out_modes == self.in_modes

    def rebuild(
        self,
        flat_cores: Sequence[np.ndarray],
        ortho_center: int | None = None,
        *,
        cap_limited: bool = False,
        truncation_error: float = 0.0,
    ) -> "TTOperator":
        cores = [
            core.reshape(core.shape[0], o, i, core.shape[-1])
            for core, o, i in zip(flat_cores, self.out_modes, self.in_modes, strict=True)
        ]
        return TTOperator(
            cores,
            ortho_center,
            cap_limited=cap_limited,
            truncation_error=truncation_error,
        )

    def as_vector(self) -> TTVector:
        return TTVector(self.flat_cores(), self._ortho_center)

    def transpose(self) -> "TTOperator":
        return TTOperator([core.transpose(0, 2, 1, 3) for core in self._cores])

    def dagger(self) -> "TTOperator":
        return TTOperator([core.transpose(0, 2, 1, 3).conj() for core in self._cores])


def validate_cores(cores: Sequence[np.ndarray], core_ndim: int) -> StructureReport:
    """Check the structural invariants of a core chain.

    Args:
        cores: Candidate cores.
        core_ndim: 3 for vectors, 4 for operators.

    Returns:
        StructureReport naming the first violation, if any.
    """
    if len(cores) == 0:
        return StructureReport(ok=False, message="a tensor train needs at least one core")
    for n, core in enumerate(cores):
        if core.ndim != core_ndim:
            return StructureReport(
                ok=False,
                site=n,
                message=f"core {n} has {core.ndim} axes, expected {core_ndim}",
            )
        if min(core.shape) < 1:
            return StructureReport(
                ok=False, site=n, message=f"core {n} has an empty axis {core.shape}"
            )
        if not np.all(np.isfinite(core)):
            return StructureReport(ok=False, site=n, message=f"core {n} is not finite")
    if cores[0].shape[0] != 1:
        return StructureReport(
            ok=False, site=0, message=f"boundary rank r_0 = {cores[0].shape[0]}, expected 1"
        )
    if cores[-1].shape[-1] != 1:
        return StructureReport(
            ok=False,
            site=len(cores),
            message=f"boundary rank r_N = {cores[-1].shape[-1]}, expected 1",
        )
    for n in range(1, len(cores)):
        left, right = cores[n - 1].shape[-1], cores[n].shape[0]
        if left != right:
            return StructureReport(
                ok=False, site=n, message=f"rank mismatch at bond {n}: {left} vs {right}"
            )
    return StructureReport()


def validate(t: TensorTrain, tol: float = ORTHONORMAL_TOL) -> StructureReport:
    """Validate a tensor train, including its gauge if a center is recorded.

    Args:
        t: Tensor train to check.
        tol: Orthonormality tolerance.

    Returns:
        StructureReport naming the first violation, if any.
    """
    report = validate_cores(t.cores, t.core_ndim)
    if not report.ok or t.ortho_center is None:
        return report
    return check_orthonormality(t, t.ortho_center, tol)


def check_orthonormality(t: TensorTrain, center: int, tol: float = ORTHONORMAL_TOL) -> StructureReport:
    """Check that cores left of center are left-orthonormal and right of it right-orthonormal."""
    flat = t.flat_cores()
    for n, core in enumerate(flat):
        r, m, rr = core.shape
        if n < center:
            mat = core.reshape(r * m, rr)
            gram = mat.conj().T @ mat
            side = "left"
        elif n > center:
            mat = core.reshape(r, m * rr)
            gram = mat @ mat.conj().T
            side = "right"
        else:
            continue
        if not np.allclose(gram, np.eye(gram.shape[0]), atol=tol, rtol=0):
            return StructureReport(
                ok=False, site=n, message=f"core {n} is not {side}-orthonormal"
            )
    return StructureReport()


def zeros(modes: Sequence[int], in_modes: Sequence[int] | None = None) -> TensorTrain:
    """Canonical zero tensor train: every core rank 1 and zero."""
    if in_modes is None:
        return TTVector([np.zeros((1, m, 1)) for m in modes])
    return TTOperator(
        [np.zeros((1, m, k, 1)) for m, k in zip(modes, in_modes, strict=True)]
    )


def identity(modes: Sequence[int]) -> TTOperator:
    return TTOperator([np.eye(m).reshape(1, m, m, 1) for m in modes])


def rank_one(factors: Sequence[np.ndarray]) -> TensorTrain:
    """Rank-1 tensor train from per-site vectors or matrices."""
    arrays = [np.asarray(f, dtype=np.complex128) for f in factors]
    if all(a.ndim == 1 for a in arrays):
        return TTVector([a.reshape(1, -1, 1) for a in arrays])
    if all(a.ndim == 2 for a in arrays):
        return TTOperator([a.reshape(1, *a.shape, 1) for a in arrays])
    raise StructureError("rank_one factors must be all vectors or all matrices")


def random_tt(
    modes: Sequence[int],
    rank: int | Sequence[int],
    seed: int | np.random.Generator | None = None,
    in_modes: Sequence[int] | None = None,
    real: bool = False,
) -> TensorTrain:
    """Random tensor train with Gaussian cores.

    Args:
        modes: Mode sizes (output modes for operators).
        rank: Interior bond rank, either one value or N - 1 values.
        seed: Seed or generator.
        in_modes: Input modes; given means an operator is built.
        real: Draw real cores instead of complex ones.
    """
    rng = np.random.default_rng(seed)
    n_sites = len(modes)
    if isinstance(rank, int):
        interior = [rank] * (n_sites - 1)
    else:
        interior = list(rank)
    if len(interior) != n_sites - 1:
        raise StructureError(f"expected {n_sites - 1} interior ranks, got {len(interior)}")
    ranks = [1, *interior, 1]
    cores = []
    for n, m in enumerate(modes):
        shape = (ranks[n], m, ranks[n + 1]) if in_modes is None else (
            ranks[n], m, in_modes[n], ranks[n + 1]
        )
        core = rng.standard_normal(shape)
        if not real:
            core = core + 1j * rng.standard_normal(shape)
        cores.append(core)
    if in_modes is None:
        return TTVector(cores)
    return TTOperator(cores)


def check_same_modes(a: TensorTrain, b: TensorTrain) -> None:
    """Raise ModeMismatchError unless a and b have the same kind and modes."""
    if type(a) is not type(b):
        raise ModeMismatchError(
            f"cannot combine {type(a).__name__} with {type(b).__name__}"
        )
    if a.n_sites != b.n_sites:
        raise ModeMismatchError(f"site counts differ: {a.n_sites} vs {b.n_sites}")
    if [c.shape[1:-1] for c in a.cores] != [c.shape[1:-1] for c in b.cores]:
        raise ModeMismatchError("mode sizes differ")
