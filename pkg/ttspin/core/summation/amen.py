"""Alternating compression of CP sums (AMEn with a trivial matrix).

The target b = sum_k c_k kron_n F_n[k] is never formed. Each term is
contracted against the left and right parts of the current iterate x and of
an auxiliary residual frame z; those per-term interfaces are cached and
updated once per site move, so a sweep costs O(K) in the number of terms.

At site n with x in canonical form around n, the best core is the frame
projection of b. It is truncated, then enriched with the residual b - x
projected onto the z frame, and the gauge moves on by QR.
"""

import logging
import math
import time

import numpy as np
import scipy.linalg

from ttspin.config import get_settings
from ttspin.core.exceptions import ModeMismatchError, StructureError
from ttspin.core.spin.terms import CPOperatorSum
from ttspin.core.summation.schemas import SummationConfig, SummationReport
from ttspin.core.tt.arithmetic import norm
from ttspin.core.tt.gauge import orthogonalize
from ttspin.core.tt.rounding import round_tt, svd, truncation_rank
from ttspin.core.tt.schemas import RankProfile, TruncationPolicy
from ttspin.core.tt.tensor import TTOperator, TTVector, random_tt, zeros
from ttspin.schemas.enums import SummationMethod

logger = logging.getLogger(__name__)

_TINY = np.finfo(np.float64).tiny


def _project(c: np.ndarray, left: np.ndarray, f: np.ndarray, right: np.ndarray) -> np.ndarray:
    return np.einsum("k,ka,ki,kb->aib", c, left, f, right, optimize=True)


def _left_term(env: np.ndarray, core: np.ndarray, f: np.ndarray) -> np.ndarray:
    return np.einsum("ka,aib,ki->kb", env, core.conj(), f, optimize=True)


def _right_term(env: np.ndarray, core: np.ndarray, f: np.ndarray) -> np.ndarray:
    return np.einsum("kb,aib,ki->ka", env, core.conj(), f, optimize=True)


def _left_cross(env: np.ndarray, z_core: np.ndarray, x_core: np.ndarray) -> np.ndarray:
    return np.einsum("pa,piq,aib->qb", env, z_core.conj(), x_core, optimize=True)


def _right_cross(env: np.ndarray, z_core: np.ndarray, x_core: np.ndarray) -> np.ndarray:
    return np.einsum("qb,piq,aib->pa", env, z_core.conj(), x_core, optimize=True)


class AmenSummation:
    """One compression run over flat per-site factor stacks.

    Args:
        coeffs: Term coefficients, shape (K,).
        factors: Per site an array (K, M_n) of flattened local factors.
        cfg: Summation config.
    """

    def __init__(
        self, coeffs: np.ndarray, factors: list[np.ndarray], cfg: SummationConfig
    ) -> None:
        self.c = np.asarray(coeffs, dtype=np.complex128)
        self.f = [np.asarray(f, dtype=np.complex128) for f in factors]
        self.cfg = cfg
        self.n_sites = len(self.f)
        self.modes = [f.shape[1] for f in self.f]
        if any(f.shape[0] != self.c.shape[0] for f in self.f):
            raise ModeMismatchError("every site needs one factor per term")
        self.site_tol = cfg.rel_tolerance / math.sqrt(max(self.n_sites - 1, 1))
        seed = cfg.seed if cfg.seed is not None else get_settings().TTSPIN_SEED
        self.rng = np.random.default_rng(seed)
        self.cap_limited = False

    def initial_cores(self) -> list[np.ndarray]:
        """Cores of the starting iterate: the configured guess, else the first nonzero term."""
        guess = self.cfg.initial_guess
        if guess is not None:
            if guess.flat_modes != self.modes:
                raise ModeMismatchError(
                    f"initial guess modes {guess.flat_modes} do not match {self.modes}"
                )
            return guess.flat_cores()
        nonzero = (self.c != 0) & np.all([np.any(f != 0, axis=1) for f in self.f], axis=0)
        k = int(np.argmax(nonzero))
        cores = [f[k].reshape(1, -1, 1) for f in self.f]
        cores[0] = cores[0] * self.c[k]
        return cores

    def _setup(self) -> None:
        n_sites, n_terms = self.n_sites, self.c.shape[0]
        self.x = orthogonalize(TTVector(self.initial_cores()), 0).flat_cores()
        z = random_tt(self.modes, self.cfg.enrichment_rank, self.rng)
        self.z = orthogonalize(z, 0).flat_cores()

        ones_k = np.ones((n_terms, 1), dtype=np.complex128)
        ones_1 = np.ones((1, 1), dtype=np.complex128)
        self.lb = [ones_k] + [None] * n_sites
        self.lzb = [ones_k] + [None] * n_sites
        self.lzx = [ones_1] + [None] * n_sites
        self.rb = [None] * n_sites + [ones_k]
        self.rzb = [None] * n_sites + [ones_k]
        self.rzx = [None] * n_sites + [ones_1]
        for n in range(n_sites - 1, 0, -1):
            self._update_right(n)

    def _update_left(self, n: int) -> None:
        self.lb[n + 1] = _left_term(self.lb[n], self.x[n], self.f[n])
        self.lzb[n + 1] = _left_term(self.lzb[n], self.z[n], self.f[n])
        self.lzx[n + 1] = _left_cross(self.lzx[n], self.z[n], self.x[n])

    def _update_right(self, n: int) -> None:
        self.rb[n] = _right_term(self.rb[n + 1], self.x[n], self.f[n])
        self.rzb[n] = _right_term(self.rzb[n + 1], self.z[n], self.f[n])
        self.rzx[n] = _right_cross(self.rzx[n + 1], self.z[n], self.x[n])

    def _truncate(self, mat: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        u, s, vh = svd(mat)
        delta = self.site_tol * float(np.linalg.norm(s))
        rank, _, capped = truncation_rank(s, delta, self.cfg.max_rank)
        self.cap_limited = self.cap_limited or capped
        return u[:, :rank], s[:rank], vh[:rank]

    def _residual_in_z(self, n: int, xt: np.ndarray) -> np.ndarray:
        zb = _project(self.c, self.lzb[n], self.f[n], self.rzb[n + 1])
        zx = np.einsum("pa,aib,qb->piq", self.lzx[n], xt, self.rzx[n + 1], optimize=True)
        return zb - zx

    @staticmethod
    def _relative(zc: np.ndarray, xt: np.ndarray) -> float:
        return float(np.linalg.norm(zc) / max(np.linalg.norm(xt), _TINY))

    def _forward_step(self, n: int) -> float:
        bloc = _project(self.c, self.lb[n], self.f[n], self.rb[n + 1])
        if n == self.n_sites - 1:
            self.x[n] = bloc
            return self._relative(self._residual_in_z(n, bloc), bloc)

        r, m, rr = bloc.shape
        u, s, vh = self._truncate(bloc.reshape(r * m, rr))
        xt = ((u * s) @ vh).reshape(r, m, rr)

        zc = self._residual_in_z(n, xt)
        estimate = self._relative(zc, xt)
        rz, _, rzr = zc.shape
        uz, _, _ = svd(zc.reshape(rz * m, rzr))
        qz, _ = scipy.linalg.qr(uz[:, : self.cfg.enrichment_rank], mode="economic")
        self.z[n] = qz.reshape(rz, m, qz.shape[1])

        uk = _project(self.c, self.lb[n], self.f[n], self.rzb[n + 1])
        uk = uk - np.einsum("aib,qb->aiq", xt, self.rzx[n + 1], optimize=True)
        q, rmat = scipy.linalg.qr(np.hstack([u, uk.reshape(r * m, -1)]), mode="economic")
        v = np.vstack([s[:, None] * vh, np.zeros((uk.shape[2], rr), dtype=np.complex128)])
        self.x[n] = q.reshape(r, m, q.shape[1])
        self.x[n + 1] = np.einsum("ab,bjc->ajc", rmat @ v, self.x[n + 1])
        self._update_left(n)
        return estimate

    def _backward_step(self, n: int) -> float:
        bloc = _project(self.c, self.lb[n], self.f[n], self.rb[n + 1])
        if n == 0:
            self.x[n] = bloc
            return self._relative(self._residual_in_z(n, bloc), bloc)

        r, m, rr = bloc.shape
        u, s, vh = self._truncate(bloc.reshape(r, m * rr))
        xt = ((u * s) @ vh).reshape(r, m, rr)

        zc = self._residual_in_z(n, xt)
        estimate = self._relative(zc, xt)
        rz, _, rzr = zc.shape
        _, _, vzh = svd(zc.reshape(rz, m * rzr))
        qz, _ = scipy.linalg.qr(vzh[: self.cfg.enrichment_rank].T, mode="economic")
        self.z[n] = qz.T.reshape(qz.shape[1], m, rzr)

        uk = _project(self.c, self.lzb[n], self.f[n], self.rb[n + 1])
        uk = uk - np.einsum("pa,aib->pib", self.lzx[n], xt, optimize=True)
        stacked = np.vstack([vh, uk.reshape(uk.shape[0], m * rr)])
        q, rmat = scipy.linalg.qr(stacked.T, mode="economic")
        left = np.hstack([u * s, np.zeros((r, uk.shape[0]), dtype=np.complex128)])
        self.x[n] = q.T.reshape(q.shape[1], m, rr)
        self.x[n - 1] = np.einsum("ajb,bc->ajc", self.x[n - 1], left @ rmat.T)
        self._update_right(n)
        return estimate

    def run(self) -> tuple[TTVector, SummationReport]:
        """Sweep until the relative update drops below the tolerance.

        Returns:
            (rounded best iterate, report).
        """
        cfg = self.cfg
        n_terms = int(self.c.shape[0])
        timings: dict[str, float] = {}
        started = time.perf_counter()

        if self.n_sites == 1:
            core = _project(self.c, np.ones((n_terms, 1)), self.f[0], np.ones((n_terms, 1)))
            x = TTVector([core], ortho_center=0)
            profile = x.rank_profile()
            return x, SummationReport(
                method=SummationMethod.AMEN,
                n_terms=n_terms,
                sweeps_used=1,
                error_history=[0.0],
                update_history=[0.0],
                rank_history=[profile],
                final_rank_profile=profile,
                wall_time_ms={"total": (time.perf_counter() - started) * 1e3},
            )

        self._setup()
        timings["setup"] = (time.perf_counter() - started) * 1e3

        sweep_start = time.perf_counter()
        x_prev = TTVector(self.x, ortho_center=0)
        best, best_estimate = x_prev, math.inf
        error_history: list[float] = []
        update_history: list[float] = []
        rank_history: list[RankProfile] = []
        converged = False
        sweeps_used = 0

        for sweep in range(1, cfg.max_sweeps + 1):
            sweeps_used = sweep
            estimates = [self._forward_step(n) for n in range(self.n_sites)]
            estimates += [self._backward_step(n) for n in range(self.n_sites - 1, -1, -1)]
            estimate = max(estimates)

            x = TTVector(self.x, ortho_center=0)
            x_norm = norm(x)
            if x_norm == 0.0:
                best, best_estimate = x, 0.0
                error_history.append(0.0)
                update_history.append(0.0)
                rank_history.append(x.rank_profile())
                converged = True
                break

            update = norm(x - x_prev) / x_norm
            if estimate <= best_estimate:
                best, best_estimate = x, estimate
            error_history.append(best_estimate)
            update_history.append(update)
            rank_history.append(x.rank_profile())
            logger.info(
                "Summation sweep %d: update %.3e, residual estimate %.3e, max rank %d",
                sweep,
                update,
                estimate,
                max(x.ranks),
                extra={"sweep": sweep, "update": update, "estimate": estimate},
            )
            x_prev = x
            if update <= cfg.rel_tolerance:
                converged = True
                break
        timings["sweeps"] = (time.perf_counter() - sweep_start) * 1e3

        round_start = time.perf_counter()
        result = round_tt(best, TruncationPolicy(rel_tolerance=cfg.rel_tolerance, max_rank=cfg.max_rank))
        result_norm = norm(result)
        if result_norm == 0.0:
            result = zeros(self.modes)
            final_estimate = 0.0
        else:
            final_estimate = best_estimate + result.truncation_error / result_norm
        timings["rounding"] = (time.perf_counter() - round_start) * 1e3
        timings["total"] = (time.perf_counter() - started) * 1e3

        cap_limited = self.cap_limited or result.cap_limited
        if not converged:
            logger.warning(
                "Summation did not converge in %d sweeps (last update %.3e)",
                cfg.max_sweeps,
                update_history[-1],
                extra={"max_sweeps": cfg.max_sweeps},
            )
        if cap_limited:
            logger.warning("Summation ranks were limited by max_rank=%s", cfg.max_rank)

        report = SummationReport(
            method=SummationMethod.AMEN,
            n_terms=n_terms,
            sweeps_used=sweeps_used,
            converged=converged,
            final_rel_error_estimate=final_estimate,
            error_history=error_history,
            update_history=update_history,
            rank_history=rank_history,
            final_rank_profile=result.rank_profile(),
            cap_limited=cap_limited,
            wall_time_ms=timings,
        )
        return result, report


def amen_sum(
    terms: CPOperatorSum, cfg: SummationConfig | None = None
) -> tuple[TTOperator, SummationReport]:
    """Compress a CP operator sum into a TT operator.

    Non-convergence after max_sweeps is reported through
    report.converged, never raised; the best iterate is returned.

    Args:
        terms: CP sum in Hilbert or Liouville space.
        cfg: Summation config.

    Returns:
        (TT operator, SummationReport).

    Raises:
        StructureError: If the sum has no terms.
    """
    cfg = cfg or SummationConfig()
    if terms.n_terms == 0:
        raise StructureError("cannot compress an empty CP sum")
    if isinstance(cfg.initial_guess, TTOperator):
        cfg = cfg.model_copy(update={"initial_guess": cfg.initial_guess.as_vector()})
    coeffs, factors = terms.factor_arrays()
    x, report = AmenSummation(coeffs, factors, cfg).run()
    dim = terms.local_dim
    op = x.as_operator([dim] * terms.n_sites, [dim] * terms.n_sites)
    return (
        TTOperator(op.cores, op.ortho_center, cap_limited=x.cap_limited, truncation_error=x.truncation_error),
        report,
    )
