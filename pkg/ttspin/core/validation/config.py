"""Externalized oracle tolerances.

Tolerances scale with the accuracy parameter eps of the run under test and
never drop below a floor set by double-precision round-off.
"""

from functools import lru_cache

from pydantic import BaseModel, Field


class OperatorTolerances(BaseModel):
    """Relative Frobenius tolerances for TT operators against dense ones."""

    rel_factor: float = Field(default=10.0, gt=0)
    floor: float = Field(default=1e-10, gt=0)
    hermiticity_max: float = Field(default=1e-12, gt=0)
    square_factor: float = Field(default=100.0, gt=0)

    def threshold(self, eps: float) -> float:
        return max(self.floor, self.rel_factor * eps)

    def square_threshold(self, eps: float) -> float:
        return max(self.floor, self.square_factor * eps)


class SpectrumTolerances(BaseModel):
    """Spectrum deviation tolerances.

    The TT spectrum is compared as max |O_tt - O_dense| / max |O_dense|.
    """

    rel_factor: float = Field(default=100.0, gt=0)
    floor: float = Field(default=1e-8, gt=0)
    self_consistency_max: float = Field(default=1e-10, gt=0)
    grid_points: int = Field(default=64, ge=1)
    commutator_max: float = Field(default=1e-12, gt=0)

    def threshold(self, eps: float) -> float:
        return max(self.floor, self.rel_factor * eps)


class ValidationConfig(BaseModel):
    """Complete oracle validation configuration."""

    hamiltonian: OperatorTolerances = Field(default_factory=OperatorTolerances)
    liouvillian: OperatorTolerances = Field(default_factory=OperatorTolerances)
    spectrum: SpectrumTolerances = Field(default_factory=SpectrumTolerances)


@lru_cache
def get_validation_config() -> ValidationConfig:
    """Get cached validation configuration.

    Returns:
        ValidationConfig: Default tolerances.
    """
    return ValidationConfig()
