"""Configuration and report models for alternating linear solvers."""

from pydantic import BaseModel, Field, model_validator

from ttspin.core.tt.schemas import RankProfile
from ttspin.core.tt.tensor import TTVector
from ttspin.schemas.base import ArraySchema
from ttspin.schemas.enums import LocalSolver, SolverMethod


class SolverConfig(ArraySchema):
    """Knobs of the AMEn and one-site DMRG solvers.

    Attributes:
        rel_tolerance: Target relative residual ||b - Ax|| / ||b||.
        enrichment_rank: Rank of the residual frame used for enrichment.
        max_sweeps: Sweep budget; a sweep is one forward and one backward pass.
        local_solver: Force direct or iterative local solves. None picks
            direct when the local dimension is at most direct_threshold.
        direct_threshold: Largest local dimension r * m * r' solved directly.
        local_max_iterations: CG iteration cap for iterative local solves.
        max_rank: Optional cap on solution ranks.
        initial_guess: Starting iterate (default: rank-1 truncation of b).
        seed: Seed of the random residual frame (default: Settings.TTSPIN_SEED).
    """

    rel_tolerance: float = Field(default=1e-6, gt=0)
    enrichment_rank: int = Field(default=3, ge=1)
    max_sweeps: int = Field(default=50, ge=1)
    local_solver: LocalSolver | None = None
    direct_threshold: int = Field(default=2500, ge=1)
    local_max_iterations: int = Field(default=1000, ge=1)
    max_rank: int | None = Field(default=None, ge=1)
    initial_guess: TTVector | None = None
    seed: int | None = None


class SolveReport(BaseModel):
    """Diagnostics of one linear solve.

    residual_history[s] is the true relative residual after sweep s.
    energy_history records J = x*Ax - 2 Re(x*b) after every local solve.
    """

    method: SolverMethod
    sweeps_used: int = Field(default=0, ge=0)
    converged: bool = False
    residual_history: list[float] = Field(default_factory=list)
    rank_history: list[RankProfile] = Field(default_factory=list)
    energy_history: list[float] = Field(default_factory=list)
    direct_solves: int = 0
    iterative_solves: int = 0
    wall_time_ms: float = 0.0

    @model_validator(mode="after")
    def _history_matches_sweeps(self) -> "SolveReport":
        if len(self.residual_history) != self.sweeps_used:
            raise ValueError("residual_history must have one entry per sweep")
        return self

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else float("nan")

    @property
    def final_rank_profile(self) -> RankProfile | None:
        return self.rank_history[-1] if self.rank_history else None
