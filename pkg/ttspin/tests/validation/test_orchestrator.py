"""Tests for the oracle validation framework."""

import ast
import math
from pathlib import Path

import numpy as np
import pytest

import ttspin.core
from ttspin.core.exceptions import DenseCapError
from ttspin.core.oracle import DenseLimits
from ttspin.core.validation import (
    BaseValidator,
    Finding,
    OperatorTolerances,
    OracleContext,
    OracleReport,
    SpectrumTolerances,
    ValidationOrchestrator,
    ValidationResult,
    ValidationSeverity,
    get_validation_config,
    max_relative_deviation,
    validate_system,
)


class StubValidator(BaseValidator):
    """Validator exposing check() without running any oracle."""

    @property
    def check_type(self) -> str:
        return "stub"

    def validate(self, ctx):
        return self.create_result([], [])


@pytest.fixture
def report(hn_pair) -> OracleReport:
    """Oracle report of the 1H-15N pair at eps 1e-6."""
    return ValidationOrchestrator().validate(hn_pair, 1e-6)


class TestValidationOrchestrator:
    """Tests for ValidationOrchestrator."""

    def test_pair_passes(self, report):
        """A well-resolved system passes every family."""
        assert report.is_valid
        assert [r.check_type for r in report.results] == ["hamiltonian", "liouvillian", "spectrum"]
        assert report.isotope == "1H"

    def test_every_rule_reported(self, report):
        """Each rule appears once in the findings."""
        ids = [f.rule_id for f in report.findings]
        assert ids == ["HAM-001", "HAM-002", "LIOU-001", "LIOU-002", "LIOU-003", "SPEC-001", "SPEC-002"]
        assert all(f.measured <= f.threshold for f in report.findings)

    def test_table(self, report):
        """The table has a header, a separator and one PASS row per finding."""
        lines = report.table().splitlines()
        assert lines[0].startswith("rule")
        assert len(lines) == 2 + len(report.findings)
        assert all(line.endswith("PASS") for line in lines[2:])

    def test_cap_exceeded(self, hn_pair):
        """Systems above the Liouville cap are rejected before any work."""
        with pytest.raises(DenseCapError) as exc_info:
            ValidationOrchestrator().validate(hn_pair, 1e-6, limits=DenseLimits(max_liouville_spins=1))
        assert exc_info.value.exit_code == 6

    def test_convenience_function(self, single_spin):
        """validate_system runs with the default tolerances."""
        result = validate_system(single_spin, 1e-8)
        assert result.is_valid
        assert result.max_deviation <= 1e-6


class TestOracleContext:
    """Tests for OracleContext."""

    def test_default_isotope(self, hn_pair):
        """The first spin's isotope is detected by default."""
        assert OracleContext(hn_pair, 1e-6).isotope == "1H"
        assert OracleContext(hn_pair, 1e-6, "15N").isotope == "15N"

    def test_operators_cached(self, hn_pair):
        """TT operators are built once per context."""
        ctx = OracleContext(hn_pair, 1e-8)
        assert ctx.tt_liouvillian is ctx.tt_liouvillian
        assert ctx.dense_hamiltonian.shape == (4, 4)


class TestBaseValidatorCheck:
    """Tests for BaseValidator.check."""

    def test_pass_and_fail(self):
        """Deviations above the threshold are critical findings."""
        validator = StubValidator()
        findings, rules = [], []
        assert validator.check(findings, rules, "X-1", "a", 1e-12, 1e-10)
        assert not validator.check(findings, rules, "X-2", "b", 1e-3, 1e-10)
        assert [f.severity for f in findings] == [ValidationSeverity.INFO, ValidationSeverity.CRITICAL]
        assert [r.passed for r in rules] == [True, False]

    def test_nan_fails(self):
        """A NaN deviation never passes."""
        findings, rules = [], []
        assert not StubValidator().check(findings, rules, "X-1", "a", math.nan, 1.0)
        assert findings[0].severity == ValidationSeverity.CRITICAL


class TestValidationResult:
    """Tests for ValidationResult summary counts."""

    def test_counts(self):
        """Counts follow severities; only critical findings invalidate."""
        findings = [
            Finding(rule_id="A", severity="info", message="", quantity="a", measured=1e-12, threshold=1e-10),
            Finding(rule_id="B", severity="major", message="", quantity="b", measured=0.05, threshold=0.0),
        ]
        result = ValidationResult(check_type="spectrum", findings=findings)
        assert result.is_valid
        assert (result.critical_count, result.major_count, result.info_count) == (0, 1, 1)
        assert result.max_deviation == 0.05

        findings.append(
            Finding(rule_id="C", severity="critical", message="", quantity="c", measured=1.0, threshold=0.1)
        )
        result = ValidationResult(check_type="spectrum", findings=findings)
        assert not result.is_valid
        assert result.critical_count == 1

    def test_table_verdicts(self):
        """Major findings show as WARN and critical ones as FAIL."""
        findings = [
            Finding(rule_id="A", severity="major", message="", quantity="a", measured=0.1, threshold=0.0),
            Finding(rule_id="B", severity="critical", message="", quantity="b", measured=1.0, threshold=0.1),
        ]
        report = OracleReport(
            eps=1e-6, isotope="1H", results=[ValidationResult(check_type="spectrum", findings=findings)]
        )
        rows = report.table().splitlines()[2:]
        assert rows[0].endswith("WARN")
        assert rows[1].endswith("FAIL")
        assert not report.is_valid


class TestTolerances:
    """Tests for the tolerance configuration."""

    def test_operator_thresholds(self):
        """Operator tolerances are max(floor, factor * eps)."""
        tol = OperatorTolerances()
        assert tol.threshold(1e-14) == 1e-10
        assert tol.threshold(1e-6) == pytest.approx(1e-5)
        assert tol.square_threshold(1e-6) == pytest.approx(1e-4)

    def test_spectrum_threshold(self):
        """Spectrum tolerance is max(1e-8, 100 eps)."""
        tol = SpectrumTolerances()
        assert tol.threshold(1e-12) == 1e-8
        assert tol.threshold(1e-6) == pytest.approx(1e-4)

    def test_cached(self):
        """The default configuration is shared."""
        assert get_validation_config() is get_validation_config()


class TestMaxRelativeDeviation:
    """Tests for max_relative_deviation."""

    def test_scaled_by_reference_peak(self):
        """The deviation is scaled by the reference maximum."""
        ref = np.array([1.0, 4.0, 2.0])
        assert max_relative_deviation(ref + np.array([0.0, 0.0, 0.4]), ref) == pytest.approx(0.1)
        assert math.isnan(max_relative_deviation(np.array([np.nan, 4.0, 2.0]), ref))


class TestLayering:
    """Tests for the dependency direction between packages."""

    def test_core_does_not_import_services(self):
        """Validators and engines depend on core modules only."""
        core_root = Path(ttspin.core.__file__).parent
        offenders = []
        for path in core_root.rglob("*.py"):
            for node in ast.walk(ast.parse(path.read_text())):
                if isinstance(node, ast.ImportFrom) and (node.module or "").startswith(
                    "ttspin.services"
                ):
                    offenders.append(path.name)
                elif isinstance(node, ast.Import) and any(
                    alias.name.startswith("ttspin.services") for alias in node.names
                ):
                    offenders.append(path.name)
        assert offenders == []
