"""Run artifacts: spectrum CSV, diagnostics JSON and the run manifest."""

import csv
import logging
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field

from ttspin import __version__
from ttspin.core.exceptions import ErrorResponse, TTSpinException
from ttspin.core.spin import SpinSystem
from ttspin.core.summation import SummationReport
from ttspin.core.tt import RankProfile
from ttspin.core.spectrum import SpectrumResult, omega_to_hz

logger = logging.getLogger(__name__)

AXIS_CONVENTION = (
    "freq_hz is the offset axis f = -omega_rad_s / (2 pi); an isolated spin with "
    "offset nu peaks at freq_hz = nu. Rows are in ascending freq_hz."
)

CSV_COLUMNS = ["omega_rad_s", "freq_hz", "amplitude", "sweeps", "residual", "eff_rank"]


class RunManifest(BaseModel):
    """Record of one CLI run, written next to its outputs as manifest.json.

    Attributes:
        subcommand: build, spectrum, validate or fixture.
        input_path: Spin-system JSON the run read, if any.
        config: Every resolved option value.
        tool_version: ttspin version.
        started_at: UTC start time.
        wall_time_ms: Named timings.
        outputs: Every file the run wrote, manifest excluded.
        exit_code: Process exit code.
        error: Error record when the run failed.
    """

    subcommand: str
    input_path: str | None = None
    config: dict[str, Any] = Field(default_factory=dict)
    tool_version: str = __version__
    started_at: datetime = Field(default_factory=lambda: datetime.now(UTC))
    wall_time_ms: dict[str, float] = Field(default_factory=dict)
    outputs: list[str] = Field(default_factory=list)
    exit_code: int = 0
    error: ErrorResponse | None = None

    def fail(self, exc: TTSpinException) -> None:
        self.exit_code = exc.exit_code
        self.error = ErrorResponse(
            error_code=exc.error_code, detail=exc.detail, timestamp=datetime.now(UTC)
        )

    def write(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        path.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        return path


class PointDiagnostics(BaseModel):
    omega_rad_s: float
    freq_hz: float
    converged: bool
    sweeps: int
    residual: float
    imag_residue: float
    observable_history: list[float]
    residual_history: list[float]
    error: str | None = None


class SpectrumDiagnostics(BaseModel):
    """JSON sidecar of a spectrum run."""

    axis_convention: str = AXIS_CONVENTION
    isotope: str
    damping_mu: float
    solver_method: str
    rel_tolerance: float
    converged_fraction: float
    hcomm_profile: RankProfile
    hcomm_sq_profile: RankProfile
    summation_report: SummationReport | None = None
    wall_time_ms: dict[str, float]
    points: list[PointDiagnostics]


def _fmt(value: float) -> str:
    return repr(float(value))


def write_spectrum_csv(
    result: SpectrumResult, path: Path, system: SpinSystem, isotope: str
) -> Path:
    """Write one row per grid point in ascending freq_hz.

    A freq_ppm column is added when the system carries larmor_mhz.
    """
    columns = list(CSV_COLUMNS)
    isotope_mhz = None
    if system.larmor_mhz is not None:
        isotope_mhz = system.larmor_frequency_mhz(isotope)
        columns.append("freq_ppm")

    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for point in reversed(result.points):
            freq_hz = float(omega_to_hz(point.omega))
            row = [
                _fmt(point.omega),
                _fmt(freq_hz),
                _fmt(point.amplitude),
                str(point.sweeps),
                _fmt(point.residual),
                _fmt(point.eff_rank),
            ]
            if isotope_mhz is not None:
                row.append(_fmt(freq_hz / isotope_mhz))
            writer.writerow(row)
    logger.info("Wrote spectrum CSV", extra={"path": str(path), "rows": len(result.points)})
    return path


def spectrum_diagnostics(
    result: SpectrumResult, system: SpinSystem, isotope: str, rel_tolerance: float
) -> SpectrumDiagnostics:
    points = [
        PointDiagnostics(
            omega_rad_s=p.omega,
            freq_hz=float(omega_to_hz(p.omega)),
            converged=p.converged,
            sweeps=p.sweeps,
            residual=p.residual,
            imag_residue=p.imag_residue,
            observable_history=p.observable_history,
            residual_history=p.report.residual_history if p.report else [],
            error=p.error,
        )
        for p in reversed(result.points)
    ]
    return SpectrumDiagnostics(
        isotope=isotope,
        damping_mu=system.damping_mu,
        solver_method=str(result.solver_method),
        rel_tolerance=rel_tolerance,
        converged_fraction=result.converged_fraction,
        hcomm_profile=result.hcomm_profile,
        hcomm_sq_profile=result.hcomm_sq_profile,
        summation_report=result.summation_report,
        wall_time_ms=result.wall_time_ms,
        points=points,
    )


def write_json(model: BaseModel, path: Path) -> Path:
    path.write_text(model.model_dump_json(indent=2), encoding="utf-8")
    return path


def rank_history_table(report: SummationReport) -> str:
    """One row per recorded profile: step, max rank, effective rank."""
    label = "sweep" if report.method == "amen" else "add"
    lines = [f"{label:>6} {'max rank':>9} {'eff rank':>9}"]
    for k, profile in enumerate(report.rank_history, start=1):
        lines.append(f"{k:>6} {profile.max_rank:>9d} {profile.effective_rank:>9.2f}")
    final = report.final_rank_profile
    lines.append(f"{'final':>6} {final.max_rank:>9d} {final.effective_rank:>9.2f}")
    return "\n".join(lines)
