"""CSV and JSON result files and the run manifest written next to them."""

from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Sequence
import csv
import hashlib
import json
import logging
import math

from .custom_data_types import JsonType
from .exceptions import ConfigError

logger = logging.getLogger("zrt.cli")

MANIFEST_NAME = "manifest.json"


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _cell(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(destination: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    """Write rows in order; floats are written with `repr` so that they round-trip exactly."""
    with open(destination, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    logger.debug("Wrote %s", destination)
    return destination


def _json_safe(value: JsonType) -> JsonType:
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def write_json(destination: Path, payload: JsonType) -> Path:
    """Write sorted, indented JSON; non-finite floats become strings."""
    with open(destination, "w", encoding="utf-8") as f:
        json.dump(_json_safe(payload), f, indent=2, sort_keys=True, allow_nan=False)
        f.write("\n")
    logger.debug("Wrote %s", destination)
    return destination


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class RunManifest:
    """Reproducibility record of one CLI run.

    Two runs whose manifests agree in everything but the timestamps produce identical outputs.
    """

    tool_version: str
    command: str
    model_spec_hash: str
    config: dict[str, JsonType]
    seed: Optional[int]
    tolerances: dict[str, float]
    started_at: str = field(default_factory=_now)
    finished_at: str = ""
    outputs: dict[str, str] = field(default_factory=dict)

    def add_output(self, path: Path) -> None:
        self.outputs[path.name] = file_sha256(path)

    def reproducible_part(self) -> dict[str, JsonType]:
        """The manifest without its timestamps."""
        record = asdict(self)
        record.pop("started_at")
        record.pop("finished_at")
        return record

    def write(self, directory: Path) -> Path:
        self.finished_at = _now()
        return write_json(directory / MANIFEST_NAME, asdict(self))


def prepare_output_directory(directory: Path) -> Path:
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"cannot create output directory {directory}: {e}") from e
    return directory
