"""Frequency-domain spectrum engine.

For every grid frequency omega the engine solves the symmetrized damped
system

    (H*H + 2 omega H + (omega^2 + mu^2) 1) y = rho0

in TT format, where H is the commutation superoperator, and reports
O(omega) = Re <det | mu y>. With this sign convention an isolated spin with
offset nu peaks at omega = -2 pi nu.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ttspin.config import get_settings
from ttspin.core.exceptions import LocalSolveError, SpinSystemError
from ttspin.core.solver import SolveReport, SolverConfig, amen_solve, dmrg_solve_one_site
from ttspin.core.spin import (
    SpinSystem,
    commutation_superoperator,
    detection_state,
    hamiltonian_terms,
)
from ttspin.core.summation import SummationConfig, SummationReport, amen_sum
from ttspin.core.tt import (
    RankProfile,
    TruncationPolicy,
    TTOperator,
    TTVector,
    add,
    compose,
    identity,
    inner,
    norm,
    round_tt,
    scale,
)
from ttspin.schemas.base import ArraySchema
from ttspin.schemas.enums import SolverMethod

logger = logging.getLogger(__name__)


class SpectrumRequest(ArraySchema):
    """One spectrum run.

    Attributes:
        system: Spin system.
        isotope: Detected isotope (initial state and observable).
        omega_grid: Strictly increasing angular frequencies in rad/s.
        solver_cfg: Per-point solver config.
        solver_method: AMEn or one-site DMRG.
        op_round_tol: Operator assembly tolerance (default: solver eps / 10).
        warm_start: Seed each point with the previous point's solution.
        threads: Worker count (default: Settings.resolved_threads()).
    """

    system: SpinSystem
    isotope: str
    omega_grid: list[float] = Field(..., min_length=1)
    solver_cfg: SolverConfig = Field(default_factory=SolverConfig)
    solver_method: SolverMethod = SolverMethod.AMEN
    op_round_tol: float | None = Field(default=None, gt=0)
    warm_start: bool = True
    threads: int | None = Field(default=None, ge=1)

    @field_validator("omega_grid")
    @classmethod
    def _strictly_increasing(cls, v: list[float]) -> list[float]:
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("omega_grid must be strictly increasing")
        if not all(math.isfinite(w) for w in v):
            raise ValueError("omega_grid must be finite")
        return v

    @model_validator(mode="after")
    def _isotope_present(self) -> "SpectrumRequest":
        if not self.system.sites_of(self.isotope):
            raise ValueError(f"no spin of isotope {self.isotope} in the system")
        return self

    @property
    def assembly_tolerance(self) -> float:
        if self.op_round_tol is not None:
            return self.op_round_tol
        return self.solver_cfg.rel_tolerance / 10.0


class SpectrumPoint(BaseModel):
    """Amplitude and diagnostics of one grid point.

    amplitude is NaN when the local solver failed at that point.
    """

    omega: float
    amplitude: float
    converged: bool
    sweeps: int = 0
    residual: float = float("nan")
    eff_rank: float = float("nan")
    imag_residue: float = 0.0
    observable_history: list[float] = Field(default_factory=list)
    report: SolveReport | None = None
    error: str | None = None


class SpectrumResult(BaseModel):
    """Per-point results ordered by omega plus assembly diagnostics."""

    points: list[SpectrumPoint]
    hcomm_profile: RankProfile
    hcomm_sq_profile: RankProfile
    summation_report: SummationReport | None = None
    solver_method: SolverMethod
    wall_time_ms: dict[str, float] = Field(default_factory=dict)

    @property
    def omegas(self) -> np.ndarray:
        return np.array([p.omega for p in self.points])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([p.amplitude for p in self.points])

    @property
    def converged_fraction(self) -> float:
        return sum(p.converged for p in self.points) / len(self.points)


class DeviationReport(BaseModel):
    """Signed deviations of a spectrum from a reference spectrum."""

    deviations: list[float]
    max_abs_deviation: float
    max_rel_deviation: float
    peak_indices: list[int]
    fraction_below_at_peaks: float


def build_liouvillian(
    system: SpinSystem,
    op_round_tol: float = 1e-10,
    summation_cfg: SummationConfig | None = None,
) -> tuple[TTOperator, TTOperator, SummationReport]:
    """Commutation superoperator H and its square, both rounded at op_round_tol.

    Returns:
        (H, H @ H, summation report of H).
    """
    cfg = summation_cfg or SummationConfig(rel_tolerance=op_round_tol)
    liouville_terms = commutation_superoperator(hamiltonian_terms(system))
    hcomm, report = amen_sum(liouville_terms, cfg)
    hcomm_sq = round_tt(compose(hcomm, hcomm), TruncationPolicy(rel_tolerance=op_round_tol))
    logger.info(
        "Assembled Liouvillian: %d terms, max rank %d, squared max rank %d",
        liouville_terms.n_terms,
        max(hcomm.ranks),
        max(hcomm_sq.ranks),
        extra={
            "n_spins": system.n_spins,
            "eff_rank": hcomm.rank_profile().effective_rank,
            "eff_rank_sq": hcomm_sq.rank_profile().effective_rank,
        },
    )
    return hcomm, hcomm_sq, report


def assemble_shifted(
    hcomm: TTOperator,
    hcomm_sq: TTOperator,
    omega: float,
    mu: float,
    op_round_tol: float = 1e-10,
) -> TTOperator:
    """round(H*H + 2 omega H + (omega^2 + mu^2) 1), Hermitian positive definite for mu > 0.

    Raises:
        SpinSystemError: If mu is not positive.
    """
    if mu <= 0:
        raise SpinSystemError("damping mu must be positive")
    shift = identity(hcomm.out_modes)
    total = add(add(hcomm_sq, scale(hcomm, 2.0 * omega)), scale(shift, omega**2 + mu**2))
    return round_tt(total, TruncationPolicy(rel_tolerance=op_round_tol))


def hz_to_omega(freq_hz: np.ndarray | float) -> np.ndarray:
    """Offset axis f (Hz) -> angular grid omega = -2 pi f."""
    return -2.0 * math.pi * np.asarray(freq_hz, dtype=float)


def omega_to_hz(omega: np.ndarray | float) -> np.ndarray:
    return -np.asarray(omega, dtype=float) / (2.0 * math.pi)


def omega_grid_from_hz(from_hz: float, to_hz: float, points: int) -> list[float]:
    """Strictly increasing omega grid covering the offset window [from_hz, to_hz]."""
    freqs = np.linspace(from_hz, to_hz, points)
    return sorted(float(w) for w in hz_to_omega(freqs))


def auto_window_hz(system: SpinSystem, isotope: str, margin_widths: float = 10.0) -> tuple[float, float]:
    """Offset window holding every line of the detected isotope.

    Spans the isotope's offsets widened by the total |J| each of its spins
    sees and by margin_widths half-widths.
    """
    sites = system.sites_of(isotope)
    if not sites:
        raise SpinSystemError(f"no spin of isotope {isotope} in the system")
    spread = {n: 0.0 for n in sites}
    for coupling in system.couplings:
        for n in coupling.pair:
            if n in spread:
                spread[n] += abs(coupling.j_hz)
    half_width_hz = system.damping_mu / (2.0 * math.pi)
    pad = margin_widths * half_width_hz
    low = min(system.spins[n].offset_hz - spread[n] for n in sites) - pad
    high = max(system.spins[n].offset_hz + spread[n] for n in sites) + pad
    return low, high


def _chunks(n_points: int, n_chunks: int) -> list[range]:
    n_chunks = max(1, min(n_chunks, n_points))
    bounds = np.linspace(0, n_points, n_chunks + 1).astype(int)
    return [range(bounds[k], bounds[k + 1]) for k in range(n_chunks)]


class _PointRunner:
    """Solves contiguous runs of grid points against shared immutable operators."""

    def __init__(
        self,
        request: SpectrumRequest,
        hcomm: TTOperator,
        hcomm_sq: TTOperator,
        rho0: TTVector,
    ) -> None:
        self.request = request
        self.hcomm = hcomm
        self.hcomm_sq = hcomm_sq
        self.rho0 = rho0
        self.mu = request.system.damping_mu
        self.solve = (
            amen_solve if request.solver_method == SolverMethod.AMEN else dmrg_solve_one_site
        )

    def observable(self, y: TTVector) -> complex:
        return inner(self.rho0, scale(y, self.mu))

    def point(self, omega: float, guess: TTVector | None) -> tuple[SpectrumPoint, TTVector | None]:
        req = self.request
        shifted = assemble_shifted(self.hcomm, self.hcomm_sq, omega, self.mu, req.assembly_tolerance)
        cfg = req.solver_cfg
        if guess is not None:
            cfg = cfg.model_copy(update={"initial_guess": guess})
        history: list[float] = []
        try:
            y, report = self.solve(
                shifted, self.rho0, cfg, observer=lambda x: history.append(self.observable(x).real)
            )
        except LocalSolveError as e:
            logger.warning(
                "Point omega=%.6g failed: %s", omega, e.detail, extra={"omega": omega, "site": e.site}
            )
            return (
                SpectrumPoint(
                    omega=omega, amplitude=float("nan"), converged=False, error=e.detail
                ),
                None,
            )

        value = self.observable(y)
        scale_ref = max(norm(self.rho0) * norm(y) * self.mu, np.finfo(float).tiny)
        imag_residue = abs(value.imag) / scale_ref
        if imag_residue > cfg.rel_tolerance:
            logger.warning(
                "Observable at omega=%.6g has imaginary residue %.3e",
                omega,
                imag_residue,
                extra={"omega": omega, "imag_residue": imag_residue},
            )
        point = SpectrumPoint(
            omega=omega,
            amplitude=float(value.real),
            converged=report.converged,
            sweeps=report.sweeps_used,
            residual=report.final_residual,
            eff_rank=y.rank_profile().effective_rank,
            imag_residue=imag_residue,
            observable_history=history,
            report=report,
        )
        return point, y

    def run_chunk(self, indices: range) -> list[SpectrumPoint]:
        points = []
        guess: TTVector | None = None
        for k in indices:
            point, y = self.point(self.request.omega_grid[k], guess)
            points.append(point)
            if self.request.warm_start and y is not None:
                guess = y
        return points


def spectrum(
    request: SpectrumRequest, hcomm: TTOperator | None = None
) -> SpectrumResult:
    """Evaluate O(omega) on the request's grid.

    Grid points are split into contiguous chunks evaluated concurrently;
    inside a chunk points are solved in order so warm starts apply.
    Non-converged points keep their amplitude and are flagged.

    Args:
        request: Spectrum request.
        hcomm: Prebuilt commutation superoperator; built from the system when None.

    Returns:
        SpectrumResult ordered by omega.
    """
    started = time.perf_counter()
    tol = request.assembly_tolerance
    if hcomm is None:
        hcomm, hcomm_sq, summation_report = build_liouvillian(request.system, tol)
    else:
        hcomm_sq = round_tt(compose(hcomm, hcomm), TruncationPolicy(rel_tolerance=tol))
        summation_report = None
    rho0 = detection_state(request.system, request.isotope)
    assembled = time.perf_counter()

    runner = _PointRunner(request, hcomm, hcomm_sq, rho0)
    threads = request.threads or get_settings().resolved_threads()
    chunks = _chunks(len(request.omega_grid), threads)
    if len(chunks) == 1:
        points = runner.run_chunk(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            points = [p for chunk in pool.map(runner.run_chunk, chunks) for p in chunk]

    result = SpectrumResult(
        points=points,
        hcomm_profile=hcomm.rank_profile(),
        hcomm_sq_profile=hcomm_sq.rank_profile(),
        summation_report=summation_report,
        solver_method=request.solver_method,
        wall_time_ms={
            "assembly": (assembled - started) * 1e3,
            "solves": (time.perf_counter() - assembled) * 1e3,
        },
    )
    logger.info(
        "Spectrum done: %d points, %.1f%% converged",
        len(points),
        100.0 * result.converged_fraction,
        extra={"n_points": len(points), "converged_fraction": result.converged_fraction},
    )
    return result


def compare_to_reference(
    result: SpectrumResult, reference: np.ndarray, peak_fraction: float = 0.5
) -> DeviationReport:
    """Signed deviations from a reference spectrum.

    Peak points are those where the reference reaches peak_fraction of its
    maximum. The fraction of peak points at or below the reference is
    reported for inspection only.
    """
    amplitudes = result.amplitudes
    reference = np.asarray(reference, dtype=float)
    deviations = amplitudes - reference
    scale_ref = float(np.max(np.abs(reference))) or 1.0
    finite = np.isfinite(deviations)
    max_abs = float(np.max(np.abs(deviations[finite]))) if finite.any() else float("nan")
    peaks = [int(k) for k in np.flatnonzero(reference >= peak_fraction * np.max(reference))]
    below = [deviations[k] <= 1e-12 * scale_ref for k in peaks if finite[k]]
    report = DeviationReport(
        deviations=[float(d) for d in deviations],
        max_abs_deviation=max_abs,
        max_rel_deviation=max_abs / scale_ref,
        peak_indices=peaks,
        fraction_below_at_peaks=float(np.mean(below)) if below else 0.0,
    )
    logger.info(
        "Deviation from reference: max relative %.3e, %.0f%% of peak points at or below",
        report.max_rel_deviation,
        100.0 * report.fraction_below_at_peaks,
    )
    return report
