"""Custom exception classes for ttspin.

This module defines structured exceptions with error codes and the process
exit code the CLI maps each of them to.
"""

from datetime import datetime

from pydantic import BaseModel


class ErrorResponse(BaseModel):
    """Structured error record written into a failed run's manifest.

    Attributes:
        error_code: Application-specific error code (e.g., "TT_001").
        detail: Human-readable error description.
        timestamp: UTC timestamp of when the error occurred.
    """

    error_code: str
    detail: str
    timestamp: datetime


class TTSpinException(Exception):
    """Base exception for all ttspin errors.

    Attributes:
        detail: Human-readable error message.
        error_code: Application-specific error code.
        exit_code: Process exit code used by the CLI.
    """

    def __init__(
        self,
        detail: str,
        error_code: str = "INTERNAL_001",
        exit_code: int = 1,
    ) -> None:
        """Initialize the exception.

        Args:
            detail: Human-readable error message.
            error_code: Application error code (default: "INTERNAL_001").
            exit_code: CLI exit code (default: 1).
        """
        self.detail = detail
        self.error_code = error_code
        self.exit_code = exit_code
        super().__init__(detail)


class StructureError(TTSpinException):
    """A tensor train violates a structural invariant."""

    def __init__(
        self,
        detail: str = "Invalid tensor train structure",
        site: int | None = None,
        error_code: str = "TT_001",
    ) -> None:
        self.site = site
        super().__init__(detail=detail, error_code=error_code, exit_code=1)


class ModeMismatchError(TTSpinException):
    """Operands disagree on mode sizes or length."""

    def __init__(
        self,
        detail: str = "Mode sizes do not match",
        error_code: str = "TT_002",
    ) -> None:
        super().__init__(detail=detail, error_code=error_code, exit_code=1)


class DenseCapError(TTSpinException):
    """A dense expansion would exceed the configured size cap."""

    def __init__(
        self,
        detail: str = "oracle cap exceeded",
        error_code: str = "ORACLE_001",
    ) -> None:
        super().__init__(detail=detail, error_code=error_code, exit_code=6)


class SpinSystemError(TTSpinException):
    """Spin-system input failed schema or semantic validation."""

    def __init__(
        self,
        detail: str = "Invalid spin system",
        error_code: str = "SPIN_001",
    ) -> None:
        super().__init__(detail=detail, error_code=error_code, exit_code=2)


class LocalSolveError(TTSpinException):
    """A local system could not be factorized.

    Signals that the global operator is not Hermitian positive definite.
    """

    def __init__(
        self,
        detail: str = "Local system is numerically singular",
        site: int | None = None,
        error_code: str = "SOLVER_001",
    ) -> None:
        self.site = site
        super().__init__(detail=detail, error_code=error_code, exit_code=1)


class NonConvergenceError(TTSpinException):
    """An iterative procedure stopped at max_sweeps without converging."""

    def __init__(
        self,
        detail: str = "Iteration did not converge",
        error_code: str = "SOLVER_002",
    ) -> None:
        super().__init__(detail=detail, error_code=error_code, exit_code=3)


class SpectrumIncompleteError(TTSpinException):
    """Too many spectrum grid points failed to converge."""

    def __init__(
        self,
        detail: str = "Too few spectrum points converged",
        error_code: str = "SPECTRUM_001",
    ) -> None:
        super().__init__(detail=detail, error_code=error_code, exit_code=4)


class OracleMismatchError(TTSpinException):
    """A tensor-train result deviates from the dense oracle beyond tolerance."""

    def __init__(
        self,
        detail: str = "Oracle comparison failed",
        error_code: str = "ORACLE_002",
    ) -> None:
        super().__init__(detail=detail, error_code=error_code, exit_code=5)


class ContainerFormatError(TTSpinException):
    """A TTSPIN1 container file is malformed."""

    def __init__(
        self,
        detail: str = "Malformed TTSPIN1 container",
        error_code: str = "IO_001",
    ) -> None:
        super().__init__(detail=detail, error_code=error_code, exit_code=1)
