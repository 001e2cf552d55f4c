"""Single-site spin-1/2 operators and Liouville-space localization.

Spin operators carry the factor 1/2: sz = diag(1/2, -1/2). Density matrices
are vectorized row-major per site, so for a 2x2 matrix rho with entries
rho[a, b] the local Liouville index is 2 * a + b. Left multiplication
h @ rho is then kron(h, 1) and right multiplication rho @ h is kron(1, h.T).
"""

import numpy as np
from pydantic import Field, field_validator, model_validator

from ttspin.schemas.base import ArraySchema
from ttspin.schemas.enums import LocalOperatorKind

IDENTITY = np.eye(2, dtype=np.complex128)
SX = np.array([[0, 0.5], [0.5, 0]], dtype=np.complex128)
SY = np.array([[0, -0.5j], [0.5j, 0]], dtype=np.complex128)
SZ = np.array([[0.5, 0], [0, -0.5]], dtype=np.complex128)
SPLUS = SX + 1j * SY
SMINUS = SX - 1j * SY

SPIN_MATRICES: dict[LocalOperatorKind, np.ndarray] = {
    LocalOperatorKind.IDENTITY: IDENTITY,
    LocalOperatorKind.SX: SX,
    LocalOperatorKind.SY: SY,
    LocalOperatorKind.SZ: SZ,
    LocalOperatorKind.SPLUS: SPLUS,
    LocalOperatorKind.SMINUS: SMINUS,
}

for _matrix in SPIN_MATRICES.values():
    _matrix.flags.writeable = False


class LocalOperator(ArraySchema):
    """A tagged single-site matrix (2x2 in Hilbert space, 4x4 in Liouville space)."""

    kind: LocalOperatorKind = LocalOperatorKind.CUSTOM
    matrix: np.ndarray = Field(..., description="Square complex matrix")

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_complex(cls, v: object) -> np.ndarray:
        matrix = np.array(v, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"local operator must be a square matrix, got {matrix.shape}")
        matrix.flags.writeable = False
        return matrix

    @model_validator(mode="after")
    def _check_tag(self) -> "LocalOperator":
        if self.kind != LocalOperatorKind.CUSTOM:
            expected = SPIN_MATRICES[LocalOperatorKind(self.kind)]
            if self.matrix.shape != expected.shape or not np.allclose(self.matrix, expected):
                raise ValueError(f"matrix does not match the {self.kind} convention")
        return self

    @classmethod
    def of(cls, kind: LocalOperatorKind | str) -> "LocalOperator":
        """Tagged spin-1/2 operator."""
        kind = LocalOperatorKind(kind)
        return cls(kind=kind, matrix=SPIN_MATRICES[kind])

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(self.dim)))


def left_superoperator(h: np.ndarray) -> np.ndarray:
    """Local superoperator of rho -> h @ rho under row-major vectorization."""
    return np.kron(h, np.eye(h.shape[0]))


def right_superoperator(h: np.ndarray) -> np.ndarray:
    """Local superoperator of rho -> rho @ h under row-major vectorization."""
    return np.kron(np.eye(h.shape[0]), h.T)


def vectorize_local(op: np.ndarray) -> np.ndarray:
    """Row-major vectorization of a single-site matrix."""
    return np.asarray(op, dtype=np.complex128).reshape(-1)
