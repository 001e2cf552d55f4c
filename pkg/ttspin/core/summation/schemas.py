"""Configuration and report models for CP-sum compression."""

from pydantic import BaseModel, Field

from ttspin.core.tt.schemas import RankProfile
from ttspin.core.tt.tensor import TensorTrain
from ttspin.schemas.base import ArraySchema
from ttspin.schemas.enums import SummationMethod


class SummationConfig(ArraySchema):
    """Knobs of the alternating summation.

    Attributes:
        rel_tolerance: Relative Frobenius accuracy target.
        enrichment_rank: Rank of the residual approximation added per step.
        max_sweeps: Sweep budget; a sweep is one forward and one backward pass.
        max_rank: Optional cap on the truncated ranks before enrichment.
        initial_guess: Starting tensor (default: the first nonzero term).
        seed: Seed of the random residual frame (default: Settings.TTSPIN_SEED).
    """

    rel_tolerance: float = Field(default=1e-12, gt=0)
    enrichment_rank: int = Field(default=4, ge=1)
    max_sweeps: int = Field(default=20, ge=1)
    max_rank: int | None = Field(default=None, ge=1)
    initial_guess: TensorTrain | None = None
    seed: int | None = None


class SummationReport(BaseModel):
    """Diagnostics of one compression run.

    error_history[s] is the best residual estimate after sweep s, so it is
    non-increasing. For binary summation rank_history holds the profile of
    every intermediate sum before its rounding.
    """

    method: SummationMethod
    n_terms: int = Field(..., ge=0)
    sweeps_used: int = Field(default=0, ge=0)
    converged: bool = True
    final_rel_error_estimate: float = Field(default=0.0, ge=0)
    error_history: list[float] = Field(default_factory=list)
    update_history: list[float] = Field(default_factory=list)
    rank_history: list[RankProfile] = Field(..., min_length=1)
    final_rank_profile: RankProfile
    cap_limited: bool = False
    wall_time_ms: dict[str, float] = Field(default_factory=dict)

    @property
    def max_intermediate_rank(self) -> RankProfile:
        """Profile with the largest effective rank seen during the run."""
        return max(self.rank_history, key=lambda p: p.effective_rank)
