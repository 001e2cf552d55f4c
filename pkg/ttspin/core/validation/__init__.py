"""Oracle cross-check framework.

Key components:
- BaseValidator: Abstract base class for check families
- OracleContext: Shared system, TT operators and dense oracle matrices
- ValidationResult / Finding / ValidationSeverity: outcomes
- ValidationConfig: Externalized tolerances
- ValidationOrchestrator: Runs every family
- validate_system: Convenience function
"""

from ttspin.core.validation.base import BaseValidator, OracleContext, relative_error
from ttspin.core.validation.config import (
    OperatorTolerances,
    SpectrumTolerances,
    ValidationConfig,
    get_validation_config,
)
from ttspin.core.validation.operators import HamiltonianValidator, LiouvillianValidator
from ttspin.core.validation.orchestrator import (
    OracleReport,
    ValidationOrchestrator,
    validate_system,
)
from ttspin.core.validation.schemas import (
    Finding,
    RuleEvaluation,
    ValidationResult,
    ValidationSeverity,
)
from ttspin.core.validation.spectrum import SpectrumValidator, max_relative_deviation

__all__ = [
    "BaseValidator",
    "OracleContext",
    "relative_error",
    "OperatorTolerances",
    "SpectrumTolerances",
    "ValidationConfig",
    "get_validation_config",
    "HamiltonianValidator",
    "LiouvillianValidator",
    "SpectrumValidator",
    "max_relative_deviation",
    "OracleReport",
    "ValidationOrchestrator",
    "validate_system",
    "Finding",
    "RuleEvaluation",
    "ValidationResult",
    "ValidationSeverity",
]
