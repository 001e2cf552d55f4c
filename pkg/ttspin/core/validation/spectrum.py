"""Spectrum oracle checks."""

import logging

import numpy as np

from ttspin.core.oracle import dense_resolvent_spectrum, dense_spectrum
from ttspin.core.solver import SolverConfig
from ttspin.core.validation.base import BaseValidator, OracleContext
from ttspin.core.validation.schemas import (
    Finding,
    RuleEvaluation,
    ValidationResult,
    ValidationSeverity,
)
from ttspin.core.spectrum import (
    SpectrumRequest,
    auto_window_hz,
    omega_grid_from_hz,
    spectrum,
)

logger = logging.getLogger(__name__)


def max_relative_deviation(values: np.ndarray, reference: np.ndarray) -> float:
    """max |values - reference| / max |reference|; NaN anywhere gives NaN."""
    scale = float(np.max(np.abs(reference))) or 1.0
    return float(np.max(np.abs(values - reference))) / scale


class SpectrumValidator(BaseValidator):
    """TT spectrum against the dense solve, and the dense solve against the resolvent."""

    @property
    def check_type(self) -> str:
        return "spectrum"

    def validate(self, ctx: OracleContext) -> ValidationResult:
        findings: list[Finding] = []
        rules: list[RuleEvaluation] = []
        tol = self.config.spectrum
        low, high = auto_window_hz(ctx.system, ctx.isotope)
        grid = omega_grid_from_hz(low, high, tol.grid_points)

        reference = dense_spectrum(ctx.system, grid, ctx.isotope, ctx.limits)
        result = spectrum(
            SpectrumRequest(
                system=ctx.system,
                isotope=ctx.isotope,
                omega_grid=grid,
                solver_cfg=SolverConfig(rel_tolerance=ctx.eps),
                threads=1,
            )
        )
        if result.converged_fraction < 1.0:
            logger.warning(
                "Validation spectrum has unconverged points",
                extra={"converged_fraction": result.converged_fraction},
            )
            findings.append(
                Finding(
                    rule_id="SPEC-003",
                    severity=ValidationSeverity.MAJOR,
                    message=(
                        f"{100.0 * (1.0 - result.converged_fraction):.1f}% of grid points "
                        "did not reach the solver tolerance"
                    ),
                    quantity="spectrum convergence",
                    measured=1.0 - result.converged_fraction,
                    threshold=0.0,
                )
            )
        self.check(
            findings, rules, "SPEC-001", "spectrum",
            max_relative_deviation(result.amplitudes, reference), tol.threshold(ctx.eps),
        )

        resolvent = dense_resolvent_spectrum(ctx.system, grid, ctx.isotope, ctx.limits)
        self.check(
            findings, rules, "SPEC-002", "resolvent self-consistency",
            max_relative_deviation(reference, resolvent), tol.self_consistency_max,
        )
        return self.create_result(findings, rules)
