"""Validation orchestrator.

Coordinates the oracle check families into one report.
"""

import logging

from pydantic import BaseModel

from ttspin.core.oracle import DenseLimits
from ttspin.core.spin import SpinSystem
from ttspin.core.validation.base import OracleContext
from ttspin.core.validation.config import ValidationConfig, get_validation_config
from ttspin.core.validation.operators import HamiltonianValidator, LiouvillianValidator
from ttspin.core.validation.schemas import Finding, ValidationResult, ValidationSeverity
from ttspin.core.validation.spectrum import SpectrumValidator

logger = logging.getLogger(__name__)


class OracleReport(BaseModel):
    """Results of every check family for one system."""

    eps: float
    isotope: str
    results: list[ValidationResult]

    @property
    def is_valid(self) -> bool:
        return all(r.is_valid for r in self.results)

    @property
    def findings(self) -> list[Finding]:
        return [f for r in self.results for f in r.findings]

    @property
    def max_deviation(self) -> float:
        return max((r.max_deviation for r in self.results), default=0.0)

    def table(self) -> str:
        """Plain-text pass/fail table, one row per rule."""
        header = f"{'rule':<10} {'check':<28} {'deviation':>11} {'tolerance':>10}  result"
        rows = [header, "-" * len(header)]
        verdicts = {
            ValidationSeverity.CRITICAL: "FAIL",
            ValidationSeverity.MAJOR: "WARN",
            ValidationSeverity.INFO: "PASS",
        }
        for f in self.findings:
            verdict = verdicts[ValidationSeverity(f.severity)]
            rows.append(
                f"{f.rule_id:<10} {f.quantity:<28} {f.measured:>11.3e} {f.threshold:>10.1e}  {verdict}"
            )
        return "\n".join(rows)


class ValidationOrchestrator:
    """Runs the Hamiltonian, Liouvillian and spectrum checks in order.

    Attributes:
        config: Validation configuration with tolerances.
    """

    def __init__(self, config: ValidationConfig | None = None) -> None:
        self.config = config or get_validation_config()
        self.validators = [
            HamiltonianValidator(self.config),
            LiouvillianValidator(self.config),
            SpectrumValidator(self.config),
        ]

    def validate(
        self,
        system: SpinSystem,
        eps: float,
        isotope: str | None = None,
        limits: DenseLimits | None = None,
    ) -> OracleReport:
        """Run every check family.

        Raises:
            DenseCapError: If the system exceeds the oracle caps.
        """
        ctx = OracleContext(system, eps, isotope, limits)
        ctx.check_caps()
        results = []
        for validator in self.validators:
            result = validator.validate(ctx)
            logger.info(
                "Oracle check %s: %s (max deviation %.3e)",
                validator.check_type,
                "pass" if result.is_valid else "FAIL",
                result.max_deviation,
                extra={"check_type": validator.check_type, "is_valid": result.is_valid},
            )
            results.append(result)
        return OracleReport(eps=eps, isotope=ctx.isotope, results=results)


def validate_system(system: SpinSystem, eps: float, isotope: str | None = None) -> OracleReport:
    """Convenience function running the full oracle suite with default tolerances."""
    return ValidationOrchestrator().validate(system, eps, isotope)
