"""Shared pydantic base schemas and enumerations."""

from ttspin.schemas.base import ArraySchema, BaseSchema
from ttspin.schemas.enums import (
    BackboneSelection,
    CouplingKind,
    LocalOperatorKind,
    LocalSolver,
    SolverMethod,
    SpaceTag,
    SummationMethod,
)

__all__ = [
    "BaseSchema",
    "ArraySchema",
    "SpaceTag",
    "LocalOperatorKind",
    "CouplingKind",
    "SummationMethod",
    "SolverMethod",
    "LocalSolver",
    "BackboneSelection",
]
