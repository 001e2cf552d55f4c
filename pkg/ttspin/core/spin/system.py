"""Spin-system input model.

A SpinSystem is read from JSON:

    {"spins": [{"label": "N1", "isotope": "15N", "offset_hz": -2450.0}, ...],
     "couplings": [{"i": 0, "j": 1, "j_hz": 92.0}, ...],
     "damping_mu": 15.0}

Unknown fields are rejected and indices are zero-based.
"""

import json
import logging
import math
from pathlib import Path

from pydantic import Field, ValidationError, field_validator, model_validator

from ttspin.core.exceptions import SpinSystemError
from ttspin.schemas.base import BaseSchema
from ttspin.schemas.enums import CouplingKind

logger = logging.getLogger(__name__)

# gamma / 2pi in MHz/T for spin-1/2 nuclei
GYROMAGNETIC_MHZ_PER_T: dict[str, float] = {
    "1H": 42.577478,
    "3He": -32.434,
    "13C": 10.7084,
    "15N": -4.3163,
    "19F": 40.078,
    "29Si": -8.465,
    "31P": 17.235,
    "57Fe": 1.382,
    "77Se": 8.157,
    "89Y": -2.093,
    "103Rh": -1.348,
    "107Ag": -1.7330,
    "109Ag": -1.9924,
    "111Cd": -9.069,
    "113Cd": -9.487,
    "117Sn": -15.261,
    "119Sn": -15.966,
    "125Te": -13.545,
    "129Xe": -11.777,
    "169Tm": -3.531,
    "171Yb": 7.526,
    "183W": 1.7957,
    "187Os": 0.9856,
    "195Pt": 9.2920,
    "199Hg": 7.6901,
    "203Tl": 24.7316,
    "205Tl": 24.9736,
    "207Pb": 9.0340,
}

# Common nuclei that are not spin-1/2
HIGHER_SPIN_ISOTOPES = {"2H": 1.0, "6Li": 1.0, "7Li": 1.5, "10B": 3.0, "11B": 1.5,
                        "14N": 1.0, "17O": 2.5, "23Na": 1.5, "27Al": 2.5, "35Cl": 1.5}


class Spin(BaseSchema):
    """One spin-1/2 nucleus."""

    label: str = Field(..., min_length=1)
    isotope: str
    offset_hz: float

    @field_validator("isotope")
    @classmethod
    def _known_spin_half(cls, v: str) -> str:
        if v in HIGHER_SPIN_ISOTOPES:
            raise ValueError(
                f"isotope {v} has spin {HIGHER_SPIN_ISOTOPES[v]}; only spin-1/2 nuclei are supported"
            )
        if v not in GYROMAGNETIC_MHZ_PER_T:
            raise ValueError(f"unknown isotope {v!r}")
        return v

    @field_validator("offset_hz")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("offset_hz must be finite")
        return v


class Coupling(BaseSchema):
    """Scalar J coupling between spins i and j."""

    i: int = Field(..., ge=0)
    j: int = Field(..., ge=0)
    j_hz: float

    @model_validator(mode="after")
    def _distinct(self) -> "Coupling":
        if self.i == self.j:
            raise ValueError(f"coupling connects spin {self.i} to itself")
        if not math.isfinite(self.j_hz):
            raise ValueError("j_hz must be finite")
        return self

    @property
    def pair(self) -> tuple[int, int]:
        return (min(self.i, self.j), max(self.i, self.j))


class SpinSystem(BaseSchema):
    """Isotopes, offsets, scalar couplings and the uniform damping rate.

    Attributes:
        spins: Nuclei in chain order; the order fixes the TT site order.
        couplings: Scalar couplings, each unordered pair at most once.
        damping_mu: Uniform relaxation rate in rad/s, positive.
        larmor_mhz: Optional proton frequency used to derive a ppm axis.
    """

    spins: list[Spin] = Field(..., min_length=1)
    couplings: list[Coupling] = Field(default_factory=list)
    damping_mu: float = Field(..., gt=0)
    larmor_mhz: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _check_couplings(self) -> "SpinSystem":
        n_spins = len(self.spins)
        seen: set[tuple[int, int]] = set()
        for k, coupling in enumerate(self.couplings):
            if coupling.i >= n_spins or coupling.j >= n_spins:
                raise ValueError(
                    f"couplings[{k}] references spin {max(coupling.i, coupling.j)}, "
                    f"but only {n_spins} spins exist"
                )
            if coupling.pair in seen:
                raise ValueError(f"couplings[{k}] repeats the pair {coupling.pair}")
            seen.add(coupling.pair)
        return self

    @property
    def n_spins(self) -> int:
        return len(self.spins)

    @property
    def isotopes(self) -> list[str]:
        return [spin.isotope for spin in self.spins]

    def sites_of(self, isotope: str) -> list[int]:
        return [n for n, spin in enumerate(self.spins) if spin.isotope == isotope]

    def larmor_frequency_mhz(self, isotope: str) -> float:
        """Larmor frequency of isotope at the field implied by larmor_mhz.

        Raises:
            SpinSystemError: If larmor_mhz is not set.
        """
        if self.larmor_mhz is None:
            raise SpinSystemError("larmor_mhz is required for a ppm axis")
        ratio = GYROMAGNETIC_MHZ_PER_T[isotope] / GYROMAGNETIC_MHZ_PER_T["1H"]
        return abs(self.larmor_mhz * ratio)


def coupling_kind(system: SpinSystem, coupling: Coupling) -> CouplingKind:
    """strong for homonuclear pairs (full scalar product), weak otherwise (zz only)."""
    same = system.spins[coupling.i].isotope == system.spins[coupling.j].isotope
    return CouplingKind.STRONG if same else CouplingKind.WEAK


def _format_validation_error(e: ValidationError) -> str:
    first = e.errors()[0]
    field = ".".join(str(part) for part in first["loc"]) or "<root>"
    return f"field {field}: {first['msg']}"


def parse_spin_system(text: str) -> SpinSystem:
    """Parse and validate a SpinSystem JSON document.

    Raises:
        SpinSystemError: With a line/column diagnostic for malformed JSON or
            a field diagnostic for schema violations.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpinSystemError(f"line {e.lineno} column {e.colno}: {e.msg}") from e
    try:
        return SpinSystem.model_validate(data)
    except ValidationError as e:
        raise SpinSystemError(_format_validation_error(e)) from e


def load_spin_system(path: str | Path) -> SpinSystem:
    """Read a SpinSystem from a JSON file.

    Raises:
        SpinSystemError: If the file cannot be read or fails validation.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SpinSystemError(f"cannot read {path}: {e.strerror}") from e
    system = parse_spin_system(text)
    logger.debug(
        "Loaded spin system",
        extra={"path": str(path), "n_spins": system.n_spins, "n_couplings": len(system.couplings)},
    )
    return system
