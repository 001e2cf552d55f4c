"""Core numerical library.

Exports:
    - Exceptions with error and exit codes
"""

from ttspin.core.exceptions import (
    ContainerFormatError,
    DenseCapError,
    ErrorResponse,
    LocalSolveError,
    ModeMismatchError,
    NonConvergenceError,
    OracleMismatchError,
    SpectrumIncompleteError,
    SpinSystemError,
    StructureError,
    TTSpinException,
)

__all__ = [
    "TTSpinException",
    "ErrorResponse",
    "StructureError",
    "ModeMismatchError",
    "DenseCapError",
    "SpinSystemError",
    "LocalSolveError",
    "NonConvergenceError",
    "SpectrumIncompleteError",
    "OracleMismatchError",
    "ContainerFormatError",
]
