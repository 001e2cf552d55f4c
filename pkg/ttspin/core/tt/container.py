"""TTSPIN1 binary container for tensor trains.

Layout: 8-byte magic b"TTSPIN1\\0", little-endian uint32 header length, a
UTF-8 JSON header (ContainerHeader), then every core as little-endian
complex128 in C order.
"""

import json
import math
import struct
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from ttspin.core.exceptions import ContainerFormatError, StructureError
from ttspin.core.tt.tensor import TensorTrain, TTOperator, TTVector

MAGIC = b"TTSPIN1\x00"
_LENGTH = struct.Struct("<I")
_SCALAR = np.dtype("<c16")


class ContainerHeader(BaseModel):
    """Self-describing header of a TTSPIN1 file."""

    kind: Literal["vector", "operator"]
    modes: list[int] = Field(..., min_length=1)
    in_modes: list[int] | None = None
    ranks: list[int] = Field(..., min_length=2)
    scalar_type: Literal["complex128"] = "complex128"
    byte_order: Literal["little"] = "little"
    layout: str = "left-rank, mode[, in-mode], right-rank; C order"
    metadata: dict[str, str | int | float | bool] = Field(default_factory=dict)

    def core_shapes(self) -> list[tuple[int, ...]]:
        shapes = []
        for n, m in enumerate(self.modes):
            if self.kind == "vector":
                shapes.append((self.ranks[n], m, self.ranks[n + 1]))
            else:
                shapes.append((self.ranks[n], m, self.in_modes[n], self.ranks[n + 1]))
        return shapes


def save_tt(
    t: TensorTrain,
    path: str | Path,
    metadata: dict[str, str | int | float | bool] | None = None,
) -> Path:
    """Write t to a TTSPIN1 container.

    Args:
        t: Tensor train to store.
        path: Destination file.
        metadata: Free-form scalar metadata stored in the header.

    Returns:
        Path: The written file.
    """
    path = Path(path)
    header = ContainerHeader(
        kind="vector" if isinstance(t, TTVector) else "operator",
        modes=t.modes,
        in_modes=None if isinstance(t, TTVector) else t.in_modes,
        ranks=t.ranks,
        metadata=metadata or {},
    )
    header_bytes = header.model_dump_json().encode("utf-8")
    with path.open("wb") as fh:
        fh.write(MAGIC)
        fh.write(_LENGTH.pack(len(header_bytes)))
        fh.write(header_bytes)
        for core in t.cores:
            fh.write(np.ascontiguousarray(core, dtype=_SCALAR).tobytes(order="C"))
    return path


def _read_header(buf: bytes) -> tuple[ContainerHeader, int]:
    if buf[: len(MAGIC)] != MAGIC:
        raise ContainerFormatError("not a TTSPIN1 container (bad magic)")
    start = len(MAGIC) + _LENGTH.size
    if len(buf) < start:
        raise ContainerFormatError("truncated TTSPIN1 header")
    (length,) = _LENGTH.unpack_from(buf, len(MAGIC))
    try:
        header = ContainerHeader.model_validate(json.loads(buf[start : start + length]))
    except (ValueError, ValidationError) as e:
        raise ContainerFormatError(f"invalid TTSPIN1 header: {e}") from e
    if len(header.ranks) != len(header.modes) + 1:
        raise ContainerFormatError("header ranks do not match modes")
    if header.kind == "operator" and (
        header.in_modes is None or len(header.in_modes) != len(header.modes)
    ):
        raise ContainerFormatError("operator header needs in_modes for every site")
    return header, start + length


def read_header(path: str | Path) -> ContainerHeader:
    """Read only the header of a container (used for cache checks)."""
    with Path(path).open("rb") as fh:
        prefix = fh.read(len(MAGIC) + _LENGTH.size)
        if len(prefix) < len(MAGIC) + _LENGTH.size:
            raise ContainerFormatError("truncated TTSPIN1 header")
        (length,) = _LENGTH.unpack_from(prefix, len(MAGIC))
        header, _ = _read_header(prefix + fh.read(length))
    return header


def load_tt(path: str | Path) -> TensorTrain:
    """Read a tensor train from a TTSPIN1 container.

    Raises:
        ContainerFormatError: If the file is malformed or truncated.
    """
    buf = Path(path).read_bytes()
    header, offset = _read_header(buf)
    cores = []
    for shape in header.core_shapes():
        count = math.prod(shape)
        end = offset + count * _SCALAR.itemsize
        if end > len(buf):
            raise ContainerFormatError("truncated TTSPIN1 core data")
        cores.append(np.frombuffer(buf, dtype=_SCALAR, count=count, offset=offset).reshape(shape))
        offset = end
    if offset != len(buf):
        raise ContainerFormatError("trailing bytes after TTSPIN1 core data")
    try:
        if header.kind == "vector":
            return TTVector(cores)
        return TTOperator(cores)
    except StructureError as e:
        raise ContainerFormatError(f"container cores are inconsistent: {e.detail}") from e
