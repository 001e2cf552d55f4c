"""Tests for the command-line front end."""

import csv
import json
from pathlib import Path

import pytest

from ttspin.cli import LIOUVILLIAN_FILE, build_parser, main, system_digest
from ttspin.core.spin import load_spin_system
from ttspin.core.tt import TTOperator, load_tt, read_header
from ttspin.services.artifacts import CSV_COLUMNS
from ttspin.services.fixtures import backbone_chain


@pytest.fixture
def pair_json(tmp_path, hn_pair) -> Path:
    """The 1H-15N pair written as a spin-system file."""
    path = tmp_path / "pair.json"
    path.write_text(hn_pair.model_dump_json(), encoding="utf-8")
    return path


def read_manifest(out_dir: Path) -> dict:
    return json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))


def read_rows(path: Path) -> list[dict[str, str]]:
    with path.open(encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


class TestFixtureCommand:
    """Tests for `ttspin fixture`."""

    def test_writes_loadable_system(self, tmp_path):
        """The fixture file parses back into the generated chain."""
        path = tmp_path / "chain.json"
        assert main(["fixture", "--spins", "9", "--seed", "3", "--out", str(path)]) == 0
        system = load_spin_system(path)
        assert system == backbone_chain(9, seed=3)
        assert read_manifest(tmp_path)["outputs"] == [str(path)]


class TestBuildCommand:
    """Tests for `ttspin build`."""

    def test_amen(self, tmp_path, pair_json, hn_pair):
        """An AMEn build writes the container and the summation report."""
        out = tmp_path / "out"
        assert main(["build", str(pair_json), "--out", str(out)]) == 0
        op = load_tt(out / LIOUVILLIAN_FILE)
        assert isinstance(op, TTOperator)
        assert op.out_modes == [4, 4]
        meta = read_header(out / LIOUVILLIAN_FILE).metadata
        assert meta["input_digest"] == system_digest(hn_pair)
        assert meta["method"] == "amen"
        report = json.loads((out / "summation.json").read_text(encoding="utf-8"))
        assert report["method"] == "amen"
        assert report["converged"]
        manifest = read_manifest(out)
        assert manifest["exit_code"] == 0
        assert manifest["config"]["eps"] == 1e-12

    def test_binary(self, tmp_path, pair_json):
        """A binary build writes under the same names."""
        out = tmp_path / "out"
        assert main(["build", str(pair_json), "--method", "binary", "--out", str(out)]) == 0
        report = json.loads((out / "summation.json").read_text(encoding="utf-8"))
        assert report["method"] == "binary"
        assert read_header(out / LIOUVILLIAN_FILE).metadata["method"] == "binary"

    def test_both(self, tmp_path, pair_json):
        """Building with both methods adds the comparison record."""
        out = tmp_path / "out"
        assert main(["build", str(pair_json), "--method", "both", "--eps", "1e-10", "--out", str(out)]) == 0
        for name in (
            "liouvillian.ttspin",
            "liouvillian_binary.ttspin",
            "summation.json",
            "summation_binary.json",
            "comparison.json",
        ):
            assert (out / name).exists()
        comparison = json.loads((out / "comparison.json").read_text(encoding="utf-8"))
        assert comparison["rel_difference"] <= 1e-8
        assert len(read_manifest(out)["outputs"]) == 5

    def test_malformed_json(self, tmp_path):
        """Unparseable input exits with 2 and records the error."""
        path = tmp_path / "bad.json"
        path.write_text('{"spins": [', encoding="utf-8")
        out = tmp_path / "out"
        assert main(["build", str(path), "--out", str(out)]) == 2
        manifest = read_manifest(out)
        assert manifest["exit_code"] == 2
        assert manifest["error"]["error_code"] == "SPIN_001"

    def test_zero_damping(self, tmp_path, hn_pair):
        """A schema violation exits with 2."""
        data = json.loads(hn_pair.model_dump_json())
        data["damping_mu"] = 0.0
        path = tmp_path / "undamped.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        assert main(["build", str(path), "--out", str(tmp_path / "out")]) == 2


class TestSpectrumCommand:
    """Tests for `ttspin spectrum`."""

    def run(self, pair_json: Path, out: Path, *extra: str) -> int:
        return main(
            [
                "spectrum", str(pair_json),
                "--from-hz", "0", "--to-hz", "240",
                "--points", "25", "--eps", "1e-8",
                "--out", str(out),
                *extra,
            ]
        )

    def test_csv(self, tmp_path, pair_json):
        """The CSV has the documented columns in ascending freq_hz."""
        out = tmp_path / "out"
        assert self.run(pair_json, out) == 0
        rows = read_rows(out / "spectrum.csv")
        assert list(rows[0]) == CSV_COLUMNS
        assert len(rows) == 25
        freqs = [float(r["freq_hz"]) for r in rows]
        assert freqs == sorted(freqs)
        assert all(float(r["amplitude"]) > 0 for r in rows)
        diagnostics = json.loads((out / "diagnostics.json").read_text(encoding="utf-8"))
        assert diagnostics["converged_fraction"] == 1.0
        assert read_manifest(out)["config"]["isotope"] == "1H"

    def test_single_point(self, tmp_path, pair_json):
        """One grid point is a valid request."""
        out = tmp_path / "out"
        assert self.run(pair_json, out, "--points", "1") == 0
        assert len(read_rows(out / "spectrum.csv")) == 1

    def test_auto_window(self, tmp_path, pair_json):
        """Without bounds the window covers the coupled 1H lines."""
        out = tmp_path / "out"
        assert main(["spectrum", str(pair_json), "--points", "5", "--out", str(out)]) == 0
        config = read_manifest(out)["config"]
        assert config["from_hz"] == pytest.approx(0.0)
        assert config["to_hz"] == pytest.approx(240.0)

    def test_reuses_stored_liouvillian(self, tmp_path, pair_json):
        """A tight enough build of the same system skips the assembly."""
        out = tmp_path / "out"
        assert main(["build", str(pair_json), "--out", str(out)]) == 0
        assert self.run(pair_json, out) == 0
        diagnostics = json.loads((out / "diagnostics.json").read_text(encoding="utf-8"))
        assert diagnostics["summation_report"] is None

    def test_stale_liouvillian_ignored(self, tmp_path, pair_json):
        """A loose build is rebuilt instead of reused."""
        out = tmp_path / "out"
        assert main(["build", str(pair_json), "--eps", "1e-4", "--out", str(out)]) == 0
        assert self.run(pair_json, out) == 0
        diagnostics = json.loads((out / "diagnostics.json").read_text(encoding="utf-8"))
        assert diagnostics["summation_report"] is not None

    def test_deterministic(self, tmp_path, pair_json):
        """Repeated runs give byte-identical CSVs."""
        assert self.run(pair_json, tmp_path / "a") == 0
        assert self.run(pair_json, tmp_path / "b") == 0
        assert (tmp_path / "a" / "spectrum.csv").read_bytes() == (tmp_path / "b" / "spectrum.csv").read_bytes()

    def test_missing_isotope(self, tmp_path, pair_json):
        """Asking for an absent isotope is an input error."""
        assert self.run(pair_json, tmp_path / "out", "--isotope", "13C") == 2


class TestValidateCommand:
    """Tests for `ttspin validate`."""

    def test_passes(self, tmp_path, pair_json):
        """A small system agrees with the dense oracle."""
        out = tmp_path / "out"
        assert main(["validate", str(pair_json), "--out", str(out)]) == 0
        report = json.loads((out / "validation.json").read_text(encoding="utf-8"))
        assert report["isotope"] == "1H"
        assert all(r["is_valid"] for r in report["results"])

    def test_cap_exceeded(self, tmp_path):
        """Eight spins exceed the Liouville-space cap."""
        path = tmp_path / "chain.json"
        path.write_text(backbone_chain(8, seed=0).model_dump_json(), encoding="utf-8")
        out = tmp_path / "out"
        assert main(["validate", str(path), "--out", str(out)]) == 6
        assert read_manifest(out)["error"]["error_code"] == "ORACLE_001"


class TestParser:
    """Tests for argument checking."""

    @pytest.mark.parametrize(
        "argv",
        [
            ["spectrum", "x.json", "--eps", "0"],
            ["spectrum", "x.json", "--points", "0"],
            ["fixture", "--spins", "0", "--out", "x.json"],
            ["build", "x.json", "--method", "cp"],
        ],
    )
    def test_rejected(self, argv):
        """Invalid options exit with the argparse usage code."""
        with pytest.raises(SystemExit) as exc_info:
            main(argv)
        assert exc_info.value.code == 2

    def test_defaults(self):
        """Output defaults to ttspin_out."""
        args = build_parser().parse_args(["build", "x.json"])
        assert args.out == "ttspin_out"
        assert args.method == "amen"
