"""Base Pydantic schemas."""

from pydantic import BaseModel, ConfigDict


class BaseSchema(BaseModel):
    """Base schema for input documents: unknown fields are rejected."""

    model_config = ConfigDict(
        validate_assignment=True,
        use_enum_values=True,
        extra="forbid",
    )


class ArraySchema(BaseModel):
    """Base schema for configs and reports that may carry tensors or arrays."""

    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        extra="forbid",
    )
