"""Base validator class and the shared oracle context.

Validators compare TT results with the dense oracle. They are deterministic:
the same system, eps and seeds always produce the same findings.
"""

from abc import ABC, abstractmethod
from functools import cached_property

import numpy as np

from ttspin.core.oracle import DenseLimits, dense_hamiltonian, dense_liouvillian
from ttspin.core.spin import SpinSystem, hamiltonian_terms
from ttspin.core.summation import SummationConfig, amen_sum
from ttspin.core.tt import TTOperator, to_dense
from ttspin.core.validation.config import ValidationConfig, get_validation_config
from ttspin.core.validation.schemas import (
    Finding,
    RuleEvaluation,
    ValidationResult,
    ValidationSeverity,
)
from ttspin.core.spectrum import build_liouvillian


def relative_error(approx: np.ndarray, exact: np.ndarray) -> float:
    """||approx - exact||_F / ||exact||_F, or the absolute error when exact is zero."""
    ref = float(np.linalg.norm(exact))
    err = float(np.linalg.norm(approx - exact))
    return err / ref if ref > 0 else err


class OracleContext:
    """System under test plus lazily built TT and dense operators.

    Every validator of one run shares a context, so each operator is built
    once.

    Raises:
        DenseCapError: From check_caps() when the system exceeds the oracle caps.
    """

    def __init__(
        self,
        system: SpinSystem,
        eps: float,
        isotope: str | None = None,
        limits: DenseLimits | None = None,
    ) -> None:
        self.system = system
        self.eps = eps
        self.isotope = isotope or system.spins[0].isotope
        self.limits = limits or DenseLimits()

    def check_caps(self) -> None:
        self.limits.check_hilbert(self.system.n_spins)
        self.limits.check_liouville(self.system.n_spins)

    @property
    def liouville_entries(self) -> int:
        return 16**self.system.n_spins

    @cached_property
    def tt_hamiltonian(self) -> TTOperator:
        op, _ = amen_sum(hamiltonian_terms(self.system), SummationConfig(rel_tolerance=self.eps))
        return op

    @cached_property
    def tt_liouvillian(self) -> tuple[TTOperator, TTOperator]:
        hcomm, hcomm_sq, _ = build_liouvillian(self.system, self.eps)
        return hcomm, hcomm_sq

    @cached_property
    def dense_hamiltonian(self) -> np.ndarray:
        return dense_hamiltonian(self.system, self.limits)

    @cached_property
    def dense_liouvillian(self) -> np.ndarray:
        return dense_liouvillian(self.system, self.limits)

    def densify(self, op: TTOperator) -> np.ndarray:
        return to_dense(op, max_entries=self.liouville_entries)


class BaseValidator(ABC):
    """Abstract base class for oracle check families.

    Attributes:
        config: Validation configuration with tolerances.
    """

    def __init__(self, config: ValidationConfig | None = None) -> None:
        self.config = config or get_validation_config()

    @property
    @abstractmethod
    def check_type(self) -> str:
        """Return the check family name."""

    @abstractmethod
    def validate(self, ctx: OracleContext) -> ValidationResult:
        """Run every rule of this family against the context."""

    def check(
        self,
        findings: list[Finding],
        rules: list[RuleEvaluation],
        rule_id: str,
        quantity: str,
        measured: float,
        threshold: float,
    ) -> bool:
        """Compare one deviation against its threshold and record the outcome.

        NaN deviations fail.
        """
        passed = bool(measured <= threshold)
        verdict = "within" if passed else "exceeds"
        findings.append(
            Finding(
                rule_id=rule_id,
                severity=ValidationSeverity.INFO if passed else ValidationSeverity.CRITICAL,
                message=f"{quantity}: deviation {measured:.3e} {verdict} tolerance {threshold:.1e}",
                quantity=quantity,
                measured=measured,
                threshold=threshold,
            )
        )
        rules.append(
            RuleEvaluation(
                rule_id=rule_id,
                passed=passed,
                details={"threshold": threshold, "measured": measured},
            )
        )
        return passed

    def create_result(
        self, findings: list[Finding], rules_evaluated: list[RuleEvaluation]
    ) -> ValidationResult:
        return ValidationResult(
            check_type=self.check_type,
            findings=findings,
            rules_evaluated=rules_evaluated,
        )
