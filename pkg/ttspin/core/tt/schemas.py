"""Value schemas for tensor-train structure, rank bookkeeping and truncation.

- StructureReport: outcome of a structural check
- RankProfile: bond ranks plus the effective rank summary
- TruncationPolicy: how an error budget is split across bonds
"""

import math
from enum import StrEnum

from pydantic import BaseModel, Field, model_validator


class StructureReport(BaseModel):
    """Outcome of validating a tensor train.

    Attributes:
        ok: True if every structural invariant holds.
        site: Core or bond index of the first violation, if any.
        message: Description of the first violation.
    """

    ok: bool = True
    site: int | None = None
    message: str | None = None


class RankProfile(BaseModel):
    """Bond ranks (r_0, ..., r_N) and the effective rank k.

    k is defined by N * k**2 = sum_{n=1..N} r_{n-1} * r_n.
    """

    ranks: list[int] = Field(..., min_length=2)
    effective_rank: float = Field(..., ge=0)

    @classmethod
    def from_ranks(cls, ranks: list[int]) -> "RankProfile":
        """Build a profile, deriving the effective rank.

        Args:
            ranks: Full rank chain including the boundary ones.

        Returns:
            RankProfile for the chain.
        """
        n_sites = len(ranks) - 1
        blocks = sum(ranks[n] * ranks[n + 1] for n in range(n_sites))
        return cls(ranks=list(ranks), effective_rank=math.sqrt(blocks / n_sites))

    @model_validator(mode="after")
    def _check_effective_rank(self) -> "RankProfile":
        n_sites = len(self.ranks) - 1
        blocks = sum(self.ranks[n] * self.ranks[n + 1] for n in range(n_sites))
        if not math.isclose(self.effective_rank**2 * n_sites, blocks, rel_tol=1e-9):
            raise ValueError("effective_rank does not match the rank chain")
        return self

    @property
    def n_sites(self) -> int:
        return len(self.ranks) - 1

    @property
    def max_rank(self) -> int:
        return max(self.ranks)


class BudgetRule(StrEnum):
    """Rule distributing a total relative error budget over bonds."""

    SQRT_BONDS = "sqrt_bonds"  # eps / sqrt(N - 1) per bond, total bound eps
    PER_BOND = "per_bond"  # eps at every bond, no total guarantee


class TruncationPolicy(BaseModel):
    """Truncation policy for rounding and TT-SVD.

    Attributes:
        rel_tolerance: Relative Frobenius error budget for one full pass.
        max_rank: Optional hard cap on every bond rank. Wins over the error
            budget; the result is then flagged cap-limited.
        per_site_budget: Rule distributing rel_tolerance over the bonds.
    """

    rel_tolerance: float = Field(default=1e-12, ge=0)
    max_rank: int | None = Field(default=None, ge=1)
    per_site_budget: BudgetRule = BudgetRule.SQRT_BONDS

    def site_tolerance(self, n_sites: int) -> float:
        """Relative tolerance applied at each truncated bond.

        Args:
            n_sites: Number of cores in the chain.

        Returns:
            float: Per-bond relative tolerance.
        """
        if n_sites <= 1 or self.per_site_budget == BudgetRule.PER_BOND:
            return self.rel_tolerance
        return self.rel_tolerance / math.sqrt(n_sites - 1)
