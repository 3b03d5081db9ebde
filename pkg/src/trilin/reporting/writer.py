"""
Result writers: one CSV per table plus a JSON run manifest.

CSV floats use the shortest round-trip representation and columns keep
their table order, so identical runs give byte-identical CSVs. The
manifest lists every output with its SHA-256 hash.
"""

import csv
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

from pydantic import BaseModel, Field

from ..shared import JSONData, OutputError, calculate_file_hash, ensure_directory, format_float

logger = logging.getLogger(__name__)


class OutputFile(BaseModel):
    """One written file and its content hash."""

    path: str = Field(..., description="Path relative to the output directory")
    sha256: str
    rows: Optional[int] = None


class RunManifest(BaseModel):
    """Provenance of one CLI invocation."""

    tool: str = "trilin"
    version: str
    command: str
    scenario: Optional[str] = None
    config: JSONData = Field(default_factory=dict)
    inputs: Dict[str, str] = Field(default_factory=dict, description="Input path -> SHA-256")
    outputs: list[OutputFile] = Field(default_factory=list)
    leakage: Dict[str, Any] = Field(default_factory=dict)
    metrics: Dict[str, Any] = Field(default_factory=dict)
    seedless: bool = True
    duration_s: float = 0.0
    created_at: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )


class ResultWriter:
    """
    Writes tables into an output directory and tracks every file it creates.

    Use as a context manager: if the block raises, files written so far are
    removed and the error resurfaces as OutputError (TrilinErrors pass through
    unchanged).
    """

    def __init__(self, directory: Union[str, Path], manifest_name: str = "manifest.json"):
        self.directory = Path(directory)
        self.manifest_name = manifest_name
        self.outputs: list[OutputFile] = []
        self._written: list[Path] = []

    def __enter__(self) -> "ResultWriter":
        try:
            ensure_directory(self.directory)
        except OSError as e:
            raise OutputError(f"Cannot create output directory: {e}", path=str(self.directory))
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        if exc is None:
            return False
        self.cleanup()
        if isinstance(exc, OSError):
            raise OutputError(f"Failed to write results: {exc}", path=str(self.directory)) from exc
        return False

    def cleanup(self) -> None:
        """Remove partial files of this run."""
        for path in reversed(self._written):
            try:
                path.unlink()
                logger.info(f"Removed partial output {path}")
            except FileNotFoundError:
                pass
            except OSError as e:
                logger.warning(f"Could not remove partial output {path}: {e}")
        self._written.clear()
        self.outputs.clear()

    def _track(self, path: Path, rows: Optional[int] = None) -> Path:
        self._written.append(path)
        self.outputs.append(
            OutputFile(
                path=path.relative_to(self.directory).as_posix(),
                sha256=calculate_file_hash(path),
                rows=rows,
            )
        )
        logger.info(f"Wrote {path}")
        return path

    def write_rows(
        self, name: str, columns: list[str], rows: Iterable[Iterable[Any]]
    ) -> Path:
        """Write one CSV; floats are formatted with repr, other values with str."""
        path = self.directory / f"{name}.csv"
        self._written.append(path)
        count = 0
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow(
                    [format_float(v) if isinstance(v, float) else str(v) for v in row]
                )
                count += 1
        self._written.pop()
        return self._track(path, count)

    def write_table(self, table) -> Path:
        """Write a scenarios Table."""
        return self.write_rows(table.name, table.columns, table.rows)

    def write_json(self, name: str, payload: JSONData) -> Path:
        path = self.directory / name
        self._written.append(path)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        self._written.pop()
        return self._track(path)

    def write_manifest(self, manifest: RunManifest) -> Path:
        """Write the manifest last; it references every output written before it."""
        manifest.outputs = list(self.outputs)
        path = self.directory / self.manifest_name
        self._written.append(path)
        path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info(f"Wrote manifest {path}")
        return path


def hash_inputs(paths: Iterable[Union[str, Path, None]]) -> Dict[str, str]:
    """SHA-256 of each existing input file."""
    hashes: Dict[str, str] = {}
    for path in paths:
        if path is not None and Path(path).is_file():
            hashes[str(path)] = calculate_file_hash(path)
    return hashes
