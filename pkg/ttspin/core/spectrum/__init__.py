"""Frequency-domain spectrum engine."""

from ttspin.core.spectrum.engine import (
    DeviationReport,
    SpectrumPoint,
    SpectrumRequest,
    SpectrumResult,
    assemble_shifted,
    auto_window_hz,
    build_liouvillian,
    compare_to_reference,
    hz_to_omega,
    omega_grid_from_hz,
    omega_to_hz,
    spectrum,
)

__all__ = [
    "SpectrumRequest",
    "SpectrumPoint",
    "SpectrumResult",
    "DeviationReport",
    "build_liouvillian",
    "assemble_shifted",
    "spectrum",
    "compare_to_reference",
    "hz_to_omega",
    "omega_to_hz",
    "omega_grid_from_hz",
    "auto_window_hz",
]
