"""Shared fixtures: small spin systems and a seeded random-system factory."""

import math

import numpy as np
import pytest

from ttspin.core.spin import Coupling, Spin, SpinSystem

ISOTOPES = ["1H", "13C", "15N"]


def random_system(seed: int, n_spins: int, coupling_probability: float = 0.5) -> SpinSystem:
    """Random heteronuclear system with offsets within +-200 Hz and |J| <= 60 Hz."""
    rng = np.random.default_rng(seed)
    spins = [
        Spin(
            label=f"S{n}",
            isotope=ISOTOPES[int(rng.integers(len(ISOTOPES)))],
            offset_hz=float(rng.uniform(-200.0, 200.0)),
        )
        for n in range(n_spins)
    ]
    couplings = [
        Coupling(i=i, j=j, j_hz=float(rng.uniform(-60.0, 60.0)))
        for i in range(n_spins)
        for j in range(i + 1, n_spins)
        if rng.uniform() < coupling_probability
    ]
    return SpinSystem(spins=spins, couplings=couplings, damping_mu=2 * math.pi * 5.0)


@pytest.fixture
def make_system():
    """Factory for seeded random spin systems."""
    return random_system


@pytest.fixture
def single_spin() -> SpinSystem:
    """One uncoupled 15N spin, offset 25 Hz, half-width 2 Hz."""
    return SpinSystem(
        spins=[Spin(label="N1", isotope="15N", offset_hz=25.0)],
        damping_mu=2 * math.pi * 2.0,
    )


@pytest.fixture
def hn_pair() -> SpinSystem:
    """Weakly coupled 1H-15N pair, J = -90 Hz, half-width 3 Hz."""
    return SpinSystem(
        spins=[
            Spin(label="H1", isotope="1H", offset_hz=120.0),
            Spin(label="N1", isotope="15N", offset_hz=10.0),
        ],
        couplings=[Coupling(i=0, j=1, j_hz=-90.0)],
        damping_mu=2 * math.pi * 3.0,
    )


@pytest.fixture
def hetero_chain() -> SpinSystem:
    """Eight alternating 1H / 15N spins with nearest-neighbour couplings."""
    spins = [
        Spin(label=f"S{n}", isotope="1H" if n % 2 == 0 else "15N", offset_hz=30.0 * n - 100.0)
        for n in range(8)
    ]
    couplings = [Coupling(i=n, j=n + 1, j_hz=-90.0 + 5.0 * n) for n in range(7)]
    return SpinSystem(spins=spins, couplings=couplings, damping_mu=2 * math.pi * 4.0)
