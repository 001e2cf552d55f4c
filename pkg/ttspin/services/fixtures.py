"""Synthetic protein-backbone spin chains.

Residues are laid out in chain order, which keeps couplings short-ranged in
the TT site order. Offsets come from typical chemical shifts at the given
proton frequency with a seeded jitter; couplings are one-bond values.
"""

import logging
import math

import numpy as np

from ttspin.config import get_settings
from ttspin.core.exceptions import SpinSystemError
from ttspin.core.spin import GYROMAGNETIC_MHZ_PER_T, Coupling, Spin, SpinSystem
from ttspin.schemas.enums import BackboneSelection

logger = logging.getLogger(__name__)

# atom -> (isotope, typical shift ppm, jitter ppm)
ATOMS: dict[str, tuple[str, float, float]] = {
    "H": ("1H", 8.3, 0.6),
    "N": ("15N", 120.0, 5.0),
    "CA": ("13C", 56.0, 3.0),
    "HA": ("1H", 4.4, 0.4),
    "C": ("13C", 176.0, 2.0),
    "CB": ("13C", 35.0, 5.0),
    "HB": ("1H", 2.2, 0.5),
}

# Carrier position per isotope in ppm
CARRIER_PPM: dict[str, float] = {"1H": 4.7, "13C": 100.0, "15N": 118.0}

RESIDUE_ATOMS: dict[BackboneSelection, list[str]] = {
    BackboneSelection.BACKBONE: ["H", "N", "CA", "HA", "C"],
    BackboneSelection.EXTENDED: ["H", "N", "CA", "HA", "CB", "HB", "C"],
}

# One-bond couplings in Hz within a residue
INTRA_J_HZ: dict[tuple[str, str], float] = {
    ("H", "N"): -92.0,
    ("N", "CA"): -11.0,
    ("CA", "HA"): 140.0,
    ("CA", "C"): 55.0,
    ("CA", "CB"): 35.0,
    ("CB", "HB"): 125.0,
}

# C of residue k to N of residue k + 1
PEPTIDE_J_HZ = -15.0


def backbone_chain(
    n_spins: int,
    selection: BackboneSelection | str = BackboneSelection.BACKBONE,
    seed: int | None = None,
    damping_hz: float = 5.0,
    larmor_mhz: float = 600.0,
) -> SpinSystem:
    """Generate a backbone-like chain with exactly n_spins nuclei.

    The last residue is cut short when n_spins is not a multiple of the
    residue size; couplings to missing atoms are dropped.

    Args:
        n_spins: Number of nuclei.
        selection: backbone (H, N, CA, HA, C) or extended (adds CB, HB).
        seed: Jitter seed (default: Settings.TTSPIN_SEED).
        damping_hz: Line half-width; damping_mu = 2 pi damping_hz.
        larmor_mhz: Proton frequency used for the ppm -> Hz conversion.

    Raises:
        SpinSystemError: If n_spins < 1.
    """
    if n_spins < 1:
        raise SpinSystemError("fixture needs at least one spin")
    selection = BackboneSelection(selection)
    rng = np.random.default_rng(get_settings().TTSPIN_SEED if seed is None else seed)
    atoms = RESIDUE_ATOMS[selection]
    proton_gamma = GYROMAGNETIC_MHZ_PER_T["1H"]

    spins: list[Spin] = []
    index: dict[tuple[int, str], int] = {}
    residue = 0
    while len(spins) < n_spins:
        for atom in atoms:
            if len(spins) == n_spins:
                break
            isotope, shift, jitter = ATOMS[atom]
            ppm = shift + jitter * rng.uniform(-1.0, 1.0)
            mhz = larmor_mhz * abs(GYROMAGNETIC_MHZ_PER_T[isotope] / proton_gamma)
            index[(residue, atom)] = len(spins)
            spins.append(
                Spin(
                    label=f"{atom}{residue + 1}",
                    isotope=isotope,
                    offset_hz=round((ppm - CARRIER_PPM[isotope]) * mhz, 3),
                )
            )
        residue += 1

    couplings: list[Coupling] = []
    for k in range(residue):
        for (a, b), j_hz in INTRA_J_HZ.items():
            if (k, a) in index and (k, b) in index:
                couplings.append(Coupling(i=index[(k, a)], j=index[(k, b)], j_hz=j_hz))
        if (k, "C") in index and (k + 1, "N") in index:
            couplings.append(
                Coupling(i=index[(k, "C")], j=index[(k + 1, "N")], j_hz=PEPTIDE_J_HZ)
            )

    logger.info(
        "Generated %s chain: %d spins, %d couplings",
        selection.value,
        len(spins),
        len(couplings),
        extra={"residues": residue, "seed": seed},
    )
    return SpinSystem(
        spins=spins,
        couplings=couplings,
        damping_mu=2.0 * math.pi * damping_hz,
        larmor_mhz=larmor_mhz,
    )
