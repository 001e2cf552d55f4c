"""Hamiltonian and Liouvillian oracle checks."""

import numpy as np

from ttspin.config import get_settings
from ttspin.core.oracle import vectorize
from ttspin.core.validation.base import BaseValidator, OracleContext, relative_error
from ttspin.core.validation.schemas import Finding, RuleEvaluation, ValidationResult


class HamiltonianValidator(BaseValidator):
    """Compressed Hilbert-space Hamiltonian against its Kronecker expansion."""

    @property
    def check_type(self) -> str:
        return "hamiltonian"

    def validate(self, ctx: OracleContext) -> ValidationResult:
        findings: list[Finding] = []
        rules: list[RuleEvaluation] = []
        tol = self.config.hamiltonian
        exact = ctx.dense_hamiltonian
        approx = ctx.densify(ctx.tt_hamiltonian)

        self.check(
            findings, rules, "HAM-001", "hamiltonian",
            relative_error(approx, exact), tol.threshold(ctx.eps),
        )
        self.check(
            findings, rules, "HAM-002", "hamiltonian hermiticity",
            relative_error(approx, approx.conj().T),
            max(tol.hermiticity_max, tol.threshold(ctx.eps)),
        )
        return self.create_result(findings, rules)


class LiouvillianValidator(BaseValidator):
    """Commutation superoperator, its square and the commutator identity."""

    @property
    def check_type(self) -> str:
        return "liouvillian"

    def validate(self, ctx: OracleContext) -> ValidationResult:
        findings: list[Finding] = []
        rules: list[RuleEvaluation] = []
        tol = self.config.liouvillian
        exact = ctx.dense_liouvillian
        hcomm, hcomm_sq = ctx.tt_liouvillian

        self.check(
            findings, rules, "LIOU-001", "liouvillian",
            relative_error(ctx.densify(hcomm), exact), tol.threshold(ctx.eps),
        )
        self.check(
            findings, rules, "LIOU-002", "liouvillian square",
            relative_error(ctx.densify(hcomm_sq), exact @ exact),
            tol.square_threshold(ctx.eps),
        )

        n_spins = ctx.system.n_spins
        rng = np.random.default_rng(get_settings().TTSPIN_SEED)
        dim = 2**n_spins
        rho = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        h = ctx.dense_hamiltonian
        self.check(
            findings, rules, "LIOU-003", "commutator identity",
            relative_error(exact @ vectorize(rho, n_spins), vectorize(h @ rho - rho @ h, n_spins)),
            self.config.spectrum.commutator_max,
        )
        return self.create_result(findings, rules)
