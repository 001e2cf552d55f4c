"""Compression of CP operator sums into tensor trains."""

from ttspin.core.summation.amen import AmenSummation, amen_sum
from ttspin.core.summation.binary import binary_sum
from ttspin.core.summation.schemas import SummationConfig, SummationReport

__all__ = [
    "AmenSummation",
    "amen_sum",
    "binary_sum",
    "SummationConfig",
    "SummationReport",
]
