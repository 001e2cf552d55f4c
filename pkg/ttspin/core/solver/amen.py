"""AMEn and one-site DMRG solvers for Hermitian positive definite TT systems.

Both solvers sweep one core at a time, solving the projected local system
with the iterate in canonical form around the active site. AMEn then
truncates by local residual and enriches the core with an approximation of
the global residual, so ranks adapt. One-site DMRG keeps the ranks of the
initial guess.
"""

import logging
import math
import time
from collections.abc import Callable

import numpy as np
import scipy.linalg

from ttspin.config import get_settings
from ttspin.core.exceptions import ModeMismatchError
from ttspin.core.solver.local import (
    LocalProblem,
    apply_local,
    env_backward_op,
    env_backward_vec,
    env_forward_op,
    env_forward_vec,
    project_vec,
)
from ttspin.core.solver.schemas import SolveReport, SolverConfig
from ttspin.core.tt.arithmetic import add, apply, norm, scale
from ttspin.core.tt.gauge import orthogonalize
from ttspin.core.tt.rounding import round_tt, svd
from ttspin.core.tt.schemas import RankProfile, TruncationPolicy
from ttspin.core.tt.tensor import TTOperator, TTVector, random_tt, zeros
from ttspin.schemas.enums import LocalSolver, SolverMethod

logger = logging.getLogger(__name__)


def residual_norm(a: TTOperator, x: TTVector, b: TTVector, tol: float) -> float:
    """||b - A x|| computed in TT, rounding the difference at tol."""
    diff = add(b, scale(apply(a, x), -1.0))
    return norm(round_tt(diff, TruncationPolicy(rel_tolerance=tol)))


class AlternatingSolver:
    """Shared sweep machinery of AMEn (enrich=True) and one-site DMRG."""

    def __init__(self, a: TTOperator, b: TTVector, cfg: SolverConfig, enrich: bool) -> None:
        if not a.is_square or a.in_modes != b.modes:
            raise ModeMismatchError(
                f"operator modes {a.out_modes} x {a.in_modes} do not match vector modes {b.modes}"
            )
        self.a = list(a.cores)
        self.b = list(b.cores)
        self.a_tt, self.b_tt = a, b
        self.cfg = cfg
        self.enrich = enrich
        self.n_sites = b.n_sites
        self.modes = b.modes
        self.local_tol = cfg.rel_tolerance / (2.0 * math.sqrt(self.n_sites))
        seed = cfg.seed if cfg.seed is not None else get_settings().TTSPIN_SEED
        self.rng = np.random.default_rng(seed)
        self.energy_history: list[float] = []
        self.direct_solves = 0
        self.iterative_solves = 0

    def _initial_guess(self) -> TTVector:
        guess = self.cfg.initial_guess
        if guess is not None:
            if guess.modes != self.modes:
                raise ModeMismatchError(
                    f"initial guess modes {guess.modes} do not match {self.modes}"
                )
            return guess
        return round_tt(self.b_tt, TruncationPolicy(rel_tolerance=0.0, max_rank=1))

    def _setup(self) -> None:
        n_sites = self.n_sites
        self.x = orthogonalize(self._initial_guess(), 0).flat_cores()
        one3 = np.ones((1, 1, 1), dtype=np.complex128)
        one2 = np.ones((1, 1), dtype=np.complex128)
        self.phi_a = [one3] + [None] * (n_sites - 1) + [one3]
        self.phi_b = [one2] + [None] * (n_sites - 1) + [one2]
        if self.enrich:
            z = random_tt(self.modes, self.cfg.enrichment_rank, self.rng)
            self.z = orthogonalize(z, 0).flat_cores()
            self.phiz_a = [one3] + [None] * (n_sites - 1) + [one3]
            self.phiz_b = [one2] + [None] * (n_sites - 1) + [one2]
        for n in range(n_sites - 1, 0, -1):
            self._update_right(n)

    def _update_left(self, n: int) -> None:
        self.phi_a[n + 1] = env_forward_op(self.phi_a[n], self.x[n], self.a[n], self.x[n])
        self.phi_b[n + 1] = env_forward_vec(self.phi_b[n], self.x[n], self.b[n])
        if self.enrich:
            self.phiz_a[n + 1] = env_forward_op(self.phiz_a[n], self.z[n], self.a[n], self.x[n])
            self.phiz_b[n + 1] = env_forward_vec(self.phiz_b[n], self.z[n], self.b[n])

    def _update_right(self, n: int) -> None:
        self.phi_a[n] = env_backward_op(self.phi_a[n + 1], self.x[n], self.a[n], self.x[n])
        self.phi_b[n] = env_backward_vec(self.phi_b[n + 1], self.x[n], self.b[n])
        if self.enrich:
            self.phiz_a[n] = env_backward_op(self.phiz_a[n + 1], self.z[n], self.a[n], self.x[n])
            self.phiz_b[n] = env_backward_vec(self.phiz_b[n + 1], self.z[n], self.b[n])

    def _local_solve(self, n: int) -> tuple[LocalProblem, np.ndarray]:
        rhs = project_vec(self.phi_b[n], self.b[n], self.phi_b[n + 1])
        problem = LocalProblem(self.phi_a[n], self.a[n], self.phi_a[n + 1], rhs, site=n)
        sol, used = problem.solve(
            self.x[n],
            self.cfg.local_solver,
            self.cfg.direct_threshold,
            self.cfg.rel_tolerance / 10.0,
            self.cfg.local_max_iterations,
        )
        if used == LocalSolver.DIRECT:
            self.direct_solves += 1
        else:
            self.iterative_solves += 1
        self.energy_history.append(problem.energy(sol))
        logger.debug(
            "Local solve at site %d: size %d, residual %.3e",
            n,
            problem.size,
            problem.residual(sol),
        )
        return problem, sol

    def _truncate(
        self, problem: LocalProblem, sol: np.ndarray, forward: bool
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Smallest SVD rank whose local residual stays within tolerance (bisection)."""
        r, m, rr = sol.shape
        u, s, vh = svd(sol.reshape(r * m, rr) if forward else sol.reshape(r, m * rr))
        target = max(self.local_tol, problem.residual(sol))

        def local_residual(k: int) -> float:
            return problem.residual(((u[:, :k] * s[:k]) @ vh[:k]).reshape(sol.shape))

        lo, hi = 1, len(s)
        while lo < hi:
            mid = (lo + hi) // 2
            if local_residual(mid) <= target:
                hi = mid
            else:
                lo = mid + 1
        rank = lo
        if self.cfg.max_rank is not None:
            rank = min(rank, self.cfg.max_rank)
        return u[:, :rank], s[:rank], vh[:rank]

    def _forward_step(self, n: int) -> None:
        problem, sol = self._local_solve(n)
        if n == self.n_sites - 1:
            self.x[n] = sol
            return
        r, m, rr = sol.shape
        if not self.enrich:
            q, rmat = scipy.linalg.qr(sol.reshape(r * m, rr), mode="economic")
            self.x[n] = q.reshape(r, m, q.shape[1])
            self.x[n + 1] = np.einsum("ab,bjc->ajc", rmat, self.x[n + 1])
            self._update_left(n)
            return

        u, s, vh = self._truncate(problem, sol, forward=True)
        xt = ((u * s) @ vh).reshape(r, m, rr)

        zc = project_vec(self.phiz_b[n], self.b[n], self.phiz_b[n + 1])
        zc = zc - apply_local(self.phiz_a[n], self.a[n], self.phiz_a[n + 1], xt)
        rz, _, rzr = zc.shape
        uz, _, _ = svd(zc.reshape(rz * m, rzr))
        qz, _ = scipy.linalg.qr(uz[:, : self.cfg.enrichment_rank], mode="economic")
        self.z[n] = qz.reshape(rz, m, qz.shape[1])

        uk = project_vec(self.phi_b[n], self.b[n], self.phiz_b[n + 1])
        uk = uk - apply_local(self.phi_a[n], self.a[n], self.phiz_a[n + 1], xt)
        q, rmat = scipy.linalg.qr(np.hstack([u, uk.reshape(r * m, -1)]), mode="economic")
        v = np.vstack([s[:, None] * vh, np.zeros((uk.shape[2], rr), dtype=np.complex128)])
        self.x[n] = q.reshape(r, m, q.shape[1])
        self.x[n + 1] = np.einsum("ab,bjc->ajc", rmat @ v, self.x[n + 1])
        self._update_left(n)

    def _backward_step(self, n: int) -> None:
        problem, sol = self._local_solve(n)
        if n == 0:
            self.x[n] = sol
            return
        r, m, rr = sol.shape
        if not self.enrich:
            q, rmat = scipy.linalg.qr(sol.reshape(r, m * rr).T, mode="economic")
            self.x[n] = q.T.reshape(q.shape[1], m, rr)
            self.x[n - 1] = np.einsum("ajb,cb->ajc", self.x[n - 1], rmat)
            self._update_right(n)
            return

        u, s, vh = self._truncate(problem, sol, forward=False)
        xt = ((u * s) @ vh).reshape(r, m, rr)

        zc = project_vec(self.phiz_b[n], self.b[n], self.phiz_b[n + 1])
        zc = zc - apply_local(self.phiz_a[n], self.a[n], self.phiz_a[n + 1], xt)
        rz, _, rzr = zc.shape
        _, _, vzh = svd(zc.reshape(rz, m * rzr))
        qz, _ = scipy.linalg.qr(vzh[: self.cfg.enrichment_rank].T, mode="economic")
        self.z[n] = qz.T.reshape(qz.shape[1], m, rzr)

        uk = project_vec(self.phiz_b[n], self.b[n], self.phi_b[n + 1])
        uk = uk - apply_local(self.phiz_a[n], self.a[n], self.phi_a[n + 1], xt)
        stacked = np.vstack([vh, uk.reshape(uk.shape[0], m * rr)])
        q, rmat = scipy.linalg.qr(stacked.T, mode="economic")
        left = np.hstack([u * s, np.zeros((r, uk.shape[0]), dtype=np.complex128)])
        self.x[n] = q.T.reshape(q.shape[1], m, rr)
        self.x[n - 1] = np.einsum("ajb,bc->ajc", self.x[n - 1], left @ rmat.T)
        self._update_right(n)

    def run(
        self, observer: Callable[[TTVector], None] | None = None
    ) -> tuple[TTVector, SolveReport]:
        """Sweep until the true residual reaches the tolerance.

        Args:
            observer: Called with the iterate after every sweep.
        """
        cfg = self.cfg
        method = SolverMethod.AMEN if self.enrich else SolverMethod.DMRG
        started = time.perf_counter()

        b_norm = norm(self.b_tt)
        if b_norm == 0.0:
            x = zeros(self.modes)
            return x, SolveReport(
                method=method,
                sweeps_used=1,
                converged=True,
                residual_history=[0.0],
                rank_history=[x.rank_profile()],
                wall_time_ms=(time.perf_counter() - started) * 1e3,
            )

        self._setup()
        residual_history: list[float] = []
        rank_history: list[RankProfile] = []
        converged = False
        x = TTVector(self.x, ortho_center=0)
        for sweep in range(1, cfg.max_sweeps + 1):
            for n in range(self.n_sites):
                self._forward_step(n)
            for n in range(self.n_sites - 1, -1, -1):
                self._backward_step(n)
            x = TTVector(self.x, ortho_center=0)
            residual = residual_norm(self.a_tt, x, self.b_tt, cfg.rel_tolerance / 10.0) / b_norm
            residual_history.append(residual)
            rank_history.append(x.rank_profile())
            if observer is not None:
                observer(x)
            logger.info(
                "%s sweep %d: residual %.3e, max rank %d",
                method.value,
                sweep,
                residual,
                max(x.ranks),
                extra={"sweep": sweep, "residual": residual, "method": method.value},
            )
            if residual <= cfg.rel_tolerance:
                converged = True
                break

        if not converged:
            logger.warning(
                "%s did not reach residual %.1e in %d sweeps (final %.3e)",
                method.value,
                cfg.rel_tolerance,
                cfg.max_sweeps,
                residual_history[-1],
                extra={"method": method.value, "max_sweeps": cfg.max_sweeps},
            )
        report = SolveReport(
            method=method,
            sweeps_used=len(residual_history),
            converged=converged,
            residual_history=residual_history,
            rank_history=rank_history,
            energy_history=self.energy_history,
            direct_solves=self.direct_solves,
            iterative_solves=self.iterative_solves,
            wall_time_ms=(time.perf_counter() - started) * 1e3,
        )
        return x, report


def amen_solve(
    a: TTOperator,
    b: TTVector,
    cfg: SolverConfig | None = None,
    observer: Callable[[TTVector], None] | None = None,
) -> tuple[TTVector, SolveReport]:
    """Solve A x = b for Hermitian positive definite A by AMEn.

    Args:
        a: Square TT operator, Hermitian positive definite by contract.
        b: Right-hand side.
        cfg: Solver config.
        observer: Called with the iterate after every sweep.

    Returns:
        (solution, SolveReport). A run that hits max_sweeps returns the last
        iterate with converged=False.

    Raises:
        ModeMismatchError: If A and b disagree on modes.
        LocalSolveError: If a direct local solve finds a non positive
            definite local matrix.
    """
    return AlternatingSolver(a, b, cfg or SolverConfig(), enrich=True).run(observer)


def dmrg_solve_one_site(
    a: TTOperator,
    b: TTVector,
    cfg: SolverConfig | None = None,
    observer: Callable[[TTVector], None] | None = None,
) -> tuple[TTVector, SolveReport]:
    """One-site dynamical DMRG: same sweeps without enrichment, ranks frozen."""
    return AlternatingSolver(a, b, cfg or SolverConfig(), enrich=False).run(observer)
