"""
Unit tests for CSV tables and run manifests.
"""

import json

import pytest

from trilin.reporting import ResultWriter, RunManifest, hash_inputs
from trilin.scenarios import Table
from trilin.shared import OutputError, PhysicsError, calculate_file_hash


@pytest.mark.unit
class TestResultWriter:
    """Test result files and manifests."""

    def test_csv_uses_round_trip_floats(self, tmp_path):
        """Test floats are written with repr so they read back exactly."""
        with ResultWriter(tmp_path) as writer:
            writer.write_rows("values", ["n", "x"], [[0, 0.1], [1, 1.0], [2, 1e-20]])
        text = (tmp_path / "values.csv").read_text(encoding="utf-8")
        assert text == "n,x\n0,0.1\n1,1.0\n2,1e-20\n"

    def test_identical_tables_identical_bytes(self, tmp_path):
        """Test the same table always produces the same bytes."""
        table = Table("exchange", ["time_s", "mean_a"])
        table.add_row([1e-4, 0.123456789012345678])
        table.add_row([2e-4, 1 / 3])
        for name in ("first", "second"):
            with ResultWriter(tmp_path / name) as writer:
                writer.write_table(table)
        first = (tmp_path / "first" / "exchange.csv").read_bytes()
        assert first == (tmp_path / "second" / "exchange.csv").read_bytes()

    def test_manifest_lists_outputs(self, tmp_path):
        """Test the manifest records every file with rows and hashes."""
        with ResultWriter(tmp_path, "manifest.json") as writer:
            writer.write_rows("a", ["x"], [[1.5], [2.5]])
            writer.write_json("diagnostics.json", {"residual": 0.0})
            writer.write_manifest(RunManifest(version="0.4.0", command="run", scenario="jc"))

        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["tool"] == "trilin"
        assert manifest["seedless"] is True
        outputs = {entry["path"]: entry for entry in manifest["outputs"]}
        assert set(outputs) == {"a.csv", "diagnostics.json"}
        assert outputs["a.csv"]["rows"] == 2
        assert outputs["a.csv"]["sha256"] == calculate_file_hash(tmp_path / "a.csv")

    def test_failure_removes_partial_files(self, tmp_path):
        """A failing run leaves no half-written results behind."""
        with pytest.raises(PhysicsError):
            with ResultWriter(tmp_path) as writer:
                writer.write_rows("partial", ["x"], [[1.0]])
                raise PhysicsError("blew up")
        assert not (tmp_path / "partial.csv").exists()
        assert writer.outputs == []

    def test_os_error_becomes_output_error(self, tmp_path, mocker):
        """Test OSError while writing maps to OutputError with exit code 5."""
        mocker.patch("pathlib.Path.write_text", side_effect=OSError("disk full"))
        with pytest.raises(OutputError) as excinfo:
            with ResultWriter(tmp_path) as writer:
                writer.write_rows("kept", ["x"], [[1.0]])
                writer.write_json("diagnostics.json", {})
        assert excinfo.value.exit_code == 5
        assert not (tmp_path / "kept.csv").exists()

    def test_unwritable_directory(self, tmp_path):
        """Test an output directory under a regular file."""
        blocker = tmp_path / "file"
        blocker.write_text("")
        with pytest.raises(OutputError):
            with ResultWriter(blocker / "sub"):
                pass

    def test_hash_inputs_skips_missing(self, tmp_path):
        """Test input hashing ignores absent paths and None."""
        present = tmp_path / "config.json"
        present.write_text("{}")
        hashes = hash_inputs([present, tmp_path / "absent.json", None])
        assert list(hashes) == [str(present)]
