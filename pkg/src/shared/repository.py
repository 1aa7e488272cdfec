import hashlib
import json
import logging
from abc import ABC, abstractmethod
from collections.abc import Mapping, Sequence
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..core.config import settings

logger = logging.getLogger(__name__)


class RunManifest(BaseModel):
    tool: str
    version: str
    command: str
    config_sha256: str
    files: dict[str, str]

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "tool": "tavis-cummings-sim",
                "version": "0.1.0",
                "command": "transfer",
                "config_sha256": "3f2a...",
                "files": {"transfer.csv": "9bc1..."},
            }
        }
    )


class IResultRepository(ABC):
    @abstractmethod
    def write_table(self, name: str, header: Sequence[str], columns: Sequence[np.ndarray]) -> Path:
        pass

    @abstractmethod
    def write_blocks(self, name: str, blocks: Mapping[str, np.ndarray]) -> Path:
        pass

    @abstractmethod
    def write_rows(self, name: str, header: Sequence[str], rows: Sequence[Sequence[object]]) -> Path:
        pass

    @abstractmethod
    def write_manifest(self, command: str, config_json: str) -> Path:
        pass


def _cell(value: object) -> str:
    if isinstance(value, (float, np.floating)):
        return settings.CSV_FORMAT % value
    return str(value)


def sha256_of(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class CsvResultRepository(IResultRepository):
    """Writes CSV tables and the run manifest into one output directory."""

    def __init__(self, output_dir: Path | str):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.written: list[Path] = []

    def _register(self, path: Path) -> Path:
        if path not in self.written:
            self.written.append(path)
        logger.info(f"Wrote {path}")
        return path

    def write_table(self, name: str, header: Sequence[str], columns: Sequence[np.ndarray]) -> Path:
        """write equal-length float columns"""
        path = self.output_dir / name
        data = np.column_stack([np.asarray(column, dtype=float) for column in columns])
        np.savetxt(
            path, data, fmt=settings.CSV_FORMAT, delimiter=",",
            header=",".join(header), comments="",
        )
        return self._register(path)

    def write_rows(self, name: str, header: Sequence[str], rows: Sequence[Sequence[object]]) -> Path:
        """write mixed label/float rows"""
        path = self.output_dir / name
        lines = [",".join(header)]
        lines.extend(",".join(_cell(value) for value in row) for row in rows)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return self._register(path)

    def write_blocks(self, name: str, blocks: Mapping[str, np.ndarray]) -> Path:
        """write labelled matrices as (block, row, col, re, im) rows, nonzero entries only"""
        rows: list[list[object]] = []
        for label, matrix in blocks.items():
            matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
            for i, j in zip(*np.nonzero(matrix)):
                value = matrix[i, j]
                rows.append([label, int(i), int(j), float(value.real), float(value.imag)])
        return self.write_rows(name, ["block", "row", "col", "re [1]", "im [1]"], rows)

    def write_manifest(self, command: str, config_json: str) -> Path:
        manifest = RunManifest(
            tool=settings.PROJECT_NAME,
            version=settings.VERSION,
            command=command,
            config_sha256=hashlib.sha256(config_json.encode("utf-8")).hexdigest(),
            files={path.name: sha256_of(path) for path in sorted(self.written)},
        )
        path = self.output_dir / settings.MANIFEST_NAME
        path.write_text(json.dumps(manifest.model_dump(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info(f"Manifest written with {len(manifest.files)} checksums")
        return path
