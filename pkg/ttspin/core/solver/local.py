"""Local problems of one-site alternating solvers.

With the iterate in canonical form around site n, the local matrix is
A_n = X*_{!=n} A X_{!=n}, assembled from the cached left environment
(l, s, r), the operator core (s, m, n, S) and the right environment
(L, S, R). Rows are indexed (l, m, L), columns (r, n, R).
"""

import logging

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from ttspin.core.exceptions import LocalSolveError
from ttspin.schemas.enums import LocalSolver

logger = logging.getLogger(__name__)


def env_forward_op(env: np.ndarray, bra: np.ndarray, a_core: np.ndarray, ket: np.ndarray) -> np.ndarray:
    return np.einsum("lsr,lML,sMNS,rNR->LSR", env, bra.conj(), a_core, ket, optimize=True)


def env_backward_op(env: np.ndarray, bra: np.ndarray, a_core: np.ndarray, ket: np.ndarray) -> np.ndarray:
    return np.einsum("LSR,lML,sMNS,rNR->lsr", env, bra.conj(), a_core, ket, optimize=True)


def env_forward_vec(env: np.ndarray, bra: np.ndarray, b_core: np.ndarray) -> np.ndarray:
    return np.einsum("xb,xiy,bic->yc", env, bra.conj(), b_core, optimize=True)


def env_backward_vec(env: np.ndarray, bra: np.ndarray, b_core: np.ndarray) -> np.ndarray:
    return np.einsum("yc,xiy,bic->xb", env, bra.conj(), b_core, optimize=True)


def project_vec(left: np.ndarray, b_core: np.ndarray, right: np.ndarray) -> np.ndarray:
    return np.einsum("xb,bic,yc->xiy", left, b_core, right, optimize=True)


def apply_local(left: np.ndarray, a_core: np.ndarray, right: np.ndarray, core: np.ndarray) -> np.ndarray:
    return np.einsum("lsr,sMNS,LSR,rNR->lML", left, a_core, right, core, optimize=True)


class LocalProblem:
    """A_n y = b_n at one site.

    Args:
        left: Left operator environment (l, s, r).
        a_core: Operator core (s, m, n, S).
        right: Right operator environment (L, S, R).
        rhs: Projected right-hand side (l, m, L).
        site: Site index, used in diagnostics.
    """

    def __init__(
        self,
        left: np.ndarray,
        a_core: np.ndarray,
        right: np.ndarray,
        rhs: np.ndarray,
        site: int,
    ) -> None:
        self.left = left
        self.a_core = a_core
        self.right = right
        self.rhs = rhs
        self.site = site
        self.shape = rhs.shape
        self.size = int(rhs.size)
        self._dense: np.ndarray | None = None

    def matvec(self, core: np.ndarray) -> np.ndarray:
        return apply_local(self.left, self.a_core, self.right, core.reshape(self.shape))

    def dense(self) -> np.ndarray:
        """Explicit Hermitian local matrix."""
        if self._dense is None:
            mat = np.einsum("lsr,sMNS,LSR->lMLrNR", self.left, self.a_core, self.right, optimize=True)
            mat = mat.reshape(self.size, self.size)
            self._dense = 0.5 * (mat + mat.conj().T)
        return self._dense

    def residual(self, core: np.ndarray) -> float:
        """Relative local residual ||A_n y - b_n|| / ||b_n||."""
        rhs_norm = float(np.linalg.norm(self.rhs))
        if rhs_norm == 0.0:
            return float(np.linalg.norm(core))
        return float(np.linalg.norm(self.matvec(core) - self.rhs)) / rhs_norm

    def energy(self, core: np.ndarray) -> float:
        """J = y* A_n y - 2 Re(y* b_n), equal to the global energy under the gauge."""
        y = core.reshape(-1)
        return float(np.real(np.vdot(y, self.matvec(core).reshape(-1)))) - 2.0 * float(
            np.real(np.vdot(y, self.rhs.reshape(-1)))
        )

    def solve_direct(self) -> np.ndarray:
        """Cholesky solve of the Hermitized local matrix.

        Raises:
            LocalSolveError: If the local matrix is not positive definite.
        """
        try:
            factor = scipy.linalg.cho_factor(self.dense(), lower=False, check_finite=True)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise LocalSolveError(
                f"local system at site {self.site} is not positive definite", site=self.site
            ) from e
        return scipy.linalg.cho_solve(factor, self.rhs.reshape(-1)).reshape(self.shape)

    def solve_iterative(self, x0: np.ndarray, rtol: float, maxiter: int) -> np.ndarray:
        """Unpreconditioned conjugate gradients started from x0."""
        op = scipy.sparse.linalg.LinearOperator(
            (self.size, self.size),
            matvec=lambda v: self.matvec(v).reshape(-1),
            dtype=np.complex128,
        )
        sol, info = scipy.sparse.linalg.cg(
            op,
            self.rhs.reshape(-1),
            x0=x0.reshape(-1),
            rtol=rtol,
            atol=0.0,
            maxiter=maxiter,
        )
        if info < 0:
            raise LocalSolveError(f"CG breakdown at site {self.site}", site=self.site)
        if info > 0:
            logger.debug("CG stopped after %d iterations at site %d", info, self.site)
        return sol.reshape(self.shape)

    def solve(
        self,
        x0: np.ndarray,
        mode: LocalSolver | None,
        threshold: int,
        rtol: float,
        maxiter: int,
    ) -> tuple[np.ndarray, LocalSolver]:
        """Solve with the requested or size-selected local solver."""
        if mode is None:
            mode = LocalSolver.DIRECT if self.size <= threshold else LocalSolver.ITERATIVE
        if mode == LocalSolver.DIRECT:
            return self.solve_direct(), LocalSolver.DIRECT
        return self.solve_iterative(x0, rtol, maxiter), LocalSolver.ITERATIVE
