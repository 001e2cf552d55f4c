"""Alternating TT linear solvers (AMEn with enrichment, one-site DMRG)."""

from ttspin.core.solver.amen import (
    AlternatingSolver,
    amen_solve,
    dmrg_solve_one_site,
    residual_norm,
)
from ttspin.core.solver.local import LocalProblem
from ttspin.core.solver.schemas import SolveReport, SolverConfig

__all__ = [
    "AlternatingSolver",
    "LocalProblem",
    "amen_solve",
    "dmrg_solve_one_site",
    "residual_norm",
    "SolverConfig",
    "SolveReport",
]
