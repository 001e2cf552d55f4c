"""Command-line front end.

Subcommands:
    build     compress the Liouvillian of a spin system into a TT container
    spectrum  evaluate the 1D spectrum on an offset grid
    validate  cross-check TT results against the dense oracle
    fixture   write a synthetic backbone chain

Exit codes: 0 success, 1 internal error, 2 input/schema error,
3 summation not converged, 4 fewer than 90 % of spectrum points converged,
5 oracle mismatch, 6 oracle cap exceeded.
"""

import argparse
import hashlib
import logging
import sys
import time
from collections.abc import Sequence
from pathlib import Path

from pydantic import BaseModel, ValidationError

from ttspin import __version__
from ttspin.config import get_settings
from ttspin.core.exceptions import (
    NonConvergenceError,
    OracleMismatchError,
    SpectrumIncompleteError,
    SpinSystemError,
    TTSpinException,
)
from ttspin.core.solver import SolverConfig
from ttspin.core.spin import SpinSystem, commutation_superoperator, hamiltonian_terms, load_spin_system
from ttspin.core.summation import SummationConfig, SummationReport, amen_sum, binary_sum
from ttspin.core.tt import TTOperator, TruncationPolicy, load_tt, norm, read_header, save_tt
from ttspin.core.validation import ValidationOrchestrator
from ttspin.schemas.enums import BackboneSelection, SolverMethod
from ttspin.services.artifacts import (
    RunManifest,
    rank_history_table,
    spectrum_diagnostics,
    write_json,
    write_spectrum_csv,
)
from ttspin.services.fixtures import backbone_chain
from ttspin.core.spectrum import (
    SpectrumRequest,
    auto_window_hz,
    omega_grid_from_hz,
    spectrum,
)

logger = logging.getLogger(__name__)

MIN_CONVERGED_FRACTION = 0.9
LIOUVILLIAN_FILE = "liouvillian.ttspin"


def system_digest(system: SpinSystem) -> str:
    """Content hash of a validated system, the cache key of stored operators."""
    return hashlib.sha256(system.model_dump_json().encode("utf-8")).hexdigest()


def _metadata(system: SpinSystem, eps: float, method: str) -> dict[str, str | int | float | bool]:
    return {
        "input_digest": system_digest(system),
        "eps": eps,
        "method": method,
        "tool_version": __version__,
    }


class SummationComparison(BaseModel):
    """AMEn against binary summation on the same input."""

    amen_final_eff_rank: float
    binary_final_eff_rank: float
    binary_max_intermediate_eff_rank: float
    amen_wall_time_ms: float
    binary_wall_time_ms: float
    rel_difference: float


def _summation_outputs(
    out_dir: Path,
    system: SpinSystem,
    eps: float,
    method: str,
    op: TTOperator,
    report: SummationReport,
    suffix: str,
) -> list[Path]:
    container = save_tt(op, out_dir / f"liouvillian{suffix}.ttspin", _metadata(system, eps, method))
    report_path = write_json(report, out_dir / f"summation{suffix}.json")
    print(f"[{method}] rank history")
    print(rank_history_table(report))
    return [container, report_path]


def cmd_build(args: argparse.Namespace, manifest: RunManifest, out_dir: Path) -> int:
    system = load_spin_system(args.input)
    terms = commutation_superoperator(hamiltonian_terms(system))
    reports: dict[str, SummationReport] = {}
    ops: dict[str, TTOperator] = {}

    if args.method in ("amen", "both"):
        started = time.perf_counter()
        ops["amen"], reports["amen"] = amen_sum(terms, SummationConfig(rel_tolerance=args.eps))
        manifest.wall_time_ms["amen"] = (time.perf_counter() - started) * 1e3
        manifest.outputs += [
            str(p)
            for p in _summation_outputs(out_dir, system, args.eps, "amen", ops["amen"], reports["amen"], "")
        ]
    if args.method in ("binary", "both"):
        started = time.perf_counter()
        ops["binary"], reports["binary"] = binary_sum(terms, TruncationPolicy(rel_tolerance=args.eps))
        manifest.wall_time_ms["binary"] = (time.perf_counter() - started) * 1e3
        suffix = "_binary" if args.method == "both" else ""
        manifest.outputs += [
            str(p)
            for p in _summation_outputs(
                out_dir, system, args.eps, "binary", ops["binary"], reports["binary"], suffix
            )
        ]

    if args.method == "both":
        a, b = ops["amen"], ops["binary"]
        comparison = SummationComparison(
            amen_final_eff_rank=reports["amen"].final_rank_profile.effective_rank,
            binary_final_eff_rank=reports["binary"].final_rank_profile.effective_rank,
            binary_max_intermediate_eff_rank=reports["binary"].max_intermediate_rank.effective_rank,
            amen_wall_time_ms=manifest.wall_time_ms["amen"],
            binary_wall_time_ms=manifest.wall_time_ms["binary"],
            rel_difference=norm(a - b) / max(norm(a), sys.float_info.min),
        )
        manifest.outputs.append(str(write_json(comparison, out_dir / "comparison.json")))

    unconverged = [name for name, report in reports.items() if not report.converged]
    if unconverged:
        raise NonConvergenceError(f"summation did not converge: {', '.join(unconverged)}")
    return 0


def _cached_liouvillian(out_dir: Path, system: SpinSystem, tol: float) -> TTOperator | None:
    """A stored Liouvillian built from the same system at tol or tighter."""
    path = out_dir / LIOUVILLIAN_FILE
    if not path.exists():
        return None
    try:
        meta = read_header(path).metadata
    except TTSpinException:
        return None
    if meta.get("input_digest") != system_digest(system) or float(meta.get("eps", 1.0)) > tol:
        return None
    op = load_tt(path)
    logger.info("Reusing stored Liouvillian", extra={"path": str(path)})
    return op if isinstance(op, TTOperator) else None


def cmd_spectrum(args: argparse.Namespace, manifest: RunManifest, out_dir: Path) -> int:
    system = load_spin_system(args.input)
    isotope = args.isotope or system.spins[0].isotope
    low, high = auto_window_hz(system, isotope)
    from_hz = low if args.from_hz is None else args.from_hz
    to_hz = high if args.to_hz is None else args.to_hz
    manifest.config.update({"isotope": isotope, "from_hz": from_hz, "to_hz": to_hz})
    try:
        request = SpectrumRequest(
            system=system,
            isotope=isotope,
            omega_grid=omega_grid_from_hz(from_hz, to_hz, args.points),
            solver_cfg=SolverConfig(rel_tolerance=args.eps),
            solver_method=SolverMethod(args.solver),
        )
    except ValidationError as e:
        first = e.errors()[0]
        raise SpinSystemError(f"spectrum request: {first['msg']}") from e

    hcomm = _cached_liouvillian(out_dir, system, request.assembly_tolerance)
    result = spectrum(request, hcomm=hcomm)
    manifest.wall_time_ms.update(result.wall_time_ms)

    csv_path = write_spectrum_csv(result, out_dir / "spectrum.csv", system, isotope)
    diag = spectrum_diagnostics(result, system, isotope, args.eps)
    diag_path = write_json(diag, out_dir / "diagnostics.json")
    manifest.outputs += [str(csv_path), str(diag_path)]
    print(
        f"{len(result.points)} points, {100.0 * result.converged_fraction:.1f}% converged, "
        f"Liouvillian max rank {result.hcomm_profile.max_rank}"
    )
    if result.converged_fraction < MIN_CONVERGED_FRACTION:
        raise SpectrumIncompleteError(
            f"only {100.0 * result.converged_fraction:.1f}% of spectrum points converged"
        )
    return 0


def cmd_validate(args: argparse.Namespace, manifest: RunManifest, out_dir: Path) -> int:
    system = load_spin_system(args.input)
    report = ValidationOrchestrator().validate(system, args.eps, args.isotope)
    print(report.table())
    print(f"max deviation {report.max_deviation:.3e}")
    manifest.outputs.append(str(write_json(report, out_dir / "validation.json")))
    if not report.is_valid:
        failed = [f.rule_id for f in report.findings if f.severity == "critical"]
        raise OracleMismatchError(f"oracle mismatch in {', '.join(failed)}")
    return 0


def cmd_fixture(args: argparse.Namespace, manifest: RunManifest, out_dir: Path) -> int:
    system = backbone_chain(args.spins, args.selection, args.seed)
    path = Path(args.out)
    path.write_text(system.model_dump_json(indent=2), encoding="utf-8")
    manifest.outputs.append(str(path))
    print(f"wrote {system.n_spins} spins, {len(system.couplings)} couplings to {path}")
    return 0


COMMANDS = {
    "build": cmd_build,
    "spectrum": cmd_spectrum,
    "validate": cmd_validate,
    "fixture": cmd_fixture,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttspin", description="Tensor-train NMR spectrum simulation."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="compress the Liouvillian into a TT container")
    build.add_argument("input", help="spin-system JSON")
    build.add_argument("--eps", type=float, default=1e-12, help="relative accuracy")
    build.add_argument("--method", choices=["amen", "binary", "both"], default="amen")
    build.add_argument("--out", default="ttspin_out", help="output directory")

    spectrum_cmd = sub.add_parser("spectrum", help="evaluate the 1D spectrum")
    spectrum_cmd.add_argument("input", help="spin-system JSON")
    spectrum_cmd.add_argument("--isotope", default=None, help="detected isotope (default: first spin's)")
    spectrum_cmd.add_argument("--from-hz", type=float, default=None, help="lowest offset in Hz")
    spectrum_cmd.add_argument("--to-hz", type=float, default=None, help="highest offset in Hz")
    spectrum_cmd.add_argument("--points", type=int, default=200)
    spectrum_cmd.add_argument("--eps", type=float, default=1e-6, help="solver relative residual")
    spectrum_cmd.add_argument("--solver", choices=[m.value for m in SolverMethod], default="amen")
    spectrum_cmd.add_argument("--out", default="ttspin_out", help="output directory")

    val = sub.add_parser("validate", help="cross-check against the dense oracle")
    val.add_argument("input", help="spin-system JSON")
    val.add_argument("--eps", type=float, default=1e-6, help="accuracy of the runs under test")
    val.add_argument("--isotope", default=None)
    val.add_argument("--out", default="ttspin_out", help="output directory")

    fix = sub.add_parser("fixture", help="write a synthetic backbone chain")
    fix.add_argument("--spins", type=int, required=True)
    fix.add_argument(
        "--selection", choices=[s.value for s in BackboneSelection], default="backbone"
    )
    fix.add_argument("--seed", type=int, default=None)
    fix.add_argument("--out", required=True, help="output JSON file")
    return parser


def _check_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if getattr(args, "eps", 1.0) <= 0:
        parser.error("--eps must be positive")
    if getattr(args, "points", 1) < 1:
        parser.error("--points must be at least 1")
    if getattr(args, "spins", 1) < 1:
        parser.error("--spins must be at least 1")


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one subcommand and write its manifest.

    Returns:
        int: Process exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_args(parser, args)

    settings = get_settings()
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    out_dir = Path(args.out).parent if args.command == "fixture" else Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = {k: v for k, v in vars(args).items() if k not in ("command", "verbose")}
    config["threads"] = settings.resolved_threads()
    manifest = RunManifest(
        subcommand=args.command,
        input_path=getattr(args, "input", None),
        config=config,
    )

    started = time.perf_counter()
    try:
        exit_code = COMMANDS[args.command](args, manifest, out_dir)
    except TTSpinException as e:
        logger.error("%s failed: %s", args.command, e.detail, extra={"error_code": e.error_code})
        print(f"error: {e.detail}", file=sys.stderr)
        manifest.fail(e)
        exit_code = e.exit_code
    manifest.exit_code = exit_code
    manifest.wall_time_ms["total"] = (time.perf_counter() - started) * 1e3
    manifest.write(out_dir)
    return exit_code


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
