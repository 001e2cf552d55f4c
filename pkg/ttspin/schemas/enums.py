"""Enumerations for ttspin domain models."""

from enum import StrEnum


class SpaceTag(StrEnum):
    """Space a CP operator sum acts on."""

    HILBERT = "hilbert"
    LIOUVILLE = "liouville"


class LocalOperatorKind(StrEnum):
    """Tag of a single-site operator."""

    IDENTITY = "identity"
    SX = "sx"
    SY = "sy"
    SZ = "sz"
    SPLUS = "s+"
    SMINUS = "s-"
    CUSTOM = "custom"


class CouplingKind(StrEnum):
    """Scalar coupling flavour."""

    STRONG = "strong"  # same isotope: full scalar product
    WEAK = "weak"  # different isotopes: zz only


class SummationMethod(StrEnum):
    """Strategy for compressing a CP sum into a tensor train."""

    AMEN = "amen"
    BINARY = "binary"


class SolverMethod(StrEnum):
    """Alternating linear solver flavour."""

    AMEN = "amen"
    DMRG = "dmrg"


class LocalSolver(StrEnum):
    """How local systems are solved."""

    DIRECT = "direct"
    ITERATIVE = "iterative"


class BackboneSelection(StrEnum):
    """Which nuclei of a residue the fixture generator keeps."""

    BACKBONE = "backbone"  # H, N, CA, HA, C
    EXTENDED = "extended"  # adds CB, HB
