"""Oracle check result and finding schemas.

This module defines the core schemas for oracle cross-checks:
- ValidationSeverity: Severity levels for findings
- Finding: One rule outcome with the measured deviation
- RuleEvaluation: Pass/fail record of one rule
- ValidationResult: All findings of one check family with summary counts
"""

from enum import StrEnum
from typing import Any

from pydantic import BaseModel, Field


class ValidationSeverity(StrEnum):
    """Severity levels for findings."""

    CRITICAL = "critical"  # deviation above tolerance
    MAJOR = "major"  # degraded but within tolerance (e.g. solver not converged)
    INFO = "info"  # passed


class Finding(BaseModel):
    """Single rule outcome with evidence.

    Attributes:
        rule_id: Unique rule identifier (e.g., "HAM-001").
        severity: Finding severity level.
        message: Human-readable description.
        quantity: What was compared (e.g., "hamiltonian").
        measured: Measured relative deviation.
        threshold: Tolerance the deviation was compared against.
    """

    rule_id: str
    severity: ValidationSeverity
    message: str
    quantity: str
    measured: float
    threshold: float


class RuleEvaluation(BaseModel):
    """Record of a single rule evaluation (passed or failed)."""

    rule_id: str
    passed: bool
    details: dict[str, Any] | None = None


class ValidationResult(BaseModel):
    """Complete result of one check family.

    Attributes:
        check_type: hamiltonian, liouvillian or spectrum.
        findings: One finding per rule.
        rules_evaluated: Pass/fail record per rule.
        is_valid: True if no CRITICAL findings.
        max_deviation: Largest measured deviation over the findings.
    """

    check_type: str
    findings: list[Finding] = Field(default_factory=list)
    rules_evaluated: list[RuleEvaluation] = Field(default_factory=list)

    # Derived summary (calculated in model_post_init)
    is_valid: bool = True
    critical_count: int = 0
    major_count: int = 0
    info_count: int = 0
    max_deviation: float = 0.0

    def model_post_init(self, __context: Any) -> None:
        """Calculate summary counts from findings."""
        self.critical_count = 0
        self.major_count = 0
        self.info_count = 0
        self.is_valid = True
        self.max_deviation = max((f.measured for f in self.findings), default=0.0)

        for finding in self.findings:
            if finding.severity == ValidationSeverity.CRITICAL:
                self.critical_count += 1
                self.is_valid = False
            elif finding.severity == ValidationSeverity.MAJOR:
                self.major_count += 1
            else:
                self.info_count += 1
