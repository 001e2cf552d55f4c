"""Tensor-train core: containers, gauge moves, rounding and arithmetic.

Key components:
- TTVector / TTOperator: immutable core chains
- orthogonalize: QR gauge moves
- round_tt: SVD recompression under a TruncationPolicy
- add, scale, apply, compose, inner, norm: exact arithmetic
- to_dense / from_dense: dense conversion and TT-SVD
- save_tt / load_tt: TTSPIN1 container
"""

from ttspin.core.tt.arithmetic import add, apply, compose, inner, norm, scale
from ttspin.core.tt.container import ContainerHeader, load_tt, read_header, save_tt
from ttspin.core.tt.dense import from_dense, to_dense
from ttspin.core.tt.gauge import orthogonalize
from ttspin.core.tt.rounding import round_tt, truncation_rank
from ttspin.core.tt.schemas import BudgetRule, RankProfile, StructureReport, TruncationPolicy
from ttspin.core.tt.tensor import (
    TensorTrain,
    TTOperator,
    TTVector,
    check_orthonormality,
    identity,
    random_tt,
    rank_one,
    validate,
    zeros,
)


def rank_profile(t: TensorTrain) -> RankProfile:
    """Exact bond ranks and effective rank of t."""
    return t.rank_profile()


def local_block_count(t: TensorTrain) -> int:
    """Stored single-site block count, sum of r_{n-1} * r_n."""
    return t.local_block_count()


__all__ = [
    "TensorTrain",
    "TTVector",
    "TTOperator",
    "RankProfile",
    "TruncationPolicy",
    "BudgetRule",
    "StructureReport",
    "ContainerHeader",
    "validate",
    "check_orthonormality",
    "orthogonalize",
    "round_tt",
    "truncation_rank",
    "add",
    "scale",
    "apply",
    "compose",
    "inner",
    "norm",
    "rank_profile",
    "local_block_count",
    "to_dense",
    "from_dense",
    "zeros",
    "identity",
    "rank_one",
    "random_tt",
    "save_tt",
    "load_tt",
    "read_header",
]
