"""CSV input handling: header validation and manifest-hash extraction."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

MANIFEST_PREFIX = "# manifest_hash="


class FigsInputError(ValueError):
    """An input file is missing, misheaded, or empty."""


@dataclass
class CsvTable:
    path: Path
    manifest_hash: str
    header: list[str]
    data: np.ndarray  # rows x columns, true/false mapped to 1/0

    def column(self, name: str) -> np.ndarray:
        require_columns(self, [name])
        return self.data[:, self.header.index(name)]


def _parse_field(value: str, path: Path) -> float:
    if value == "true":
        return 1.0
    if value == "false":
        return 0.0
    try:
        return float(value)
    except ValueError as exc:
        raise FigsInputError(f"{path}: non-numeric field {value!r}") from exc


def read_table(path: Path) -> CsvTable:
    path = Path(path)
    if not path.is_file():
        raise FigsInputError(f"input file not found: {path}")
    lines = path.read_text().splitlines()
    digest = ""
    if lines and lines[0].startswith(MANIFEST_PREFIX):
        digest = lines[0][len(MANIFEST_PREFIX):].strip()
        lines = lines[1:]
    if not lines:
        raise FigsInputError(f"{path}: no header line")
    header = [name.strip() for name in lines[0].split(",")]
    rows = [line for line in lines[1:] if line.strip()]
    if not rows:
        raise FigsInputError(f"{path}: no data rows")
    data = np.array([[_parse_field(v, path) for v in line.split(",")] for line in rows])
    if data.shape[1] != len(header):
        raise FigsInputError(f"{path}: row width {data.shape[1]} does not match header "
                             f"width {len(header)}")
    return CsvTable(path=path, manifest_hash=digest, header=header, data=data)


def require_columns(table: CsvTable, names: list[str]) -> None:
    for name in names:
        if name not in table.header:
            raise FigsInputError(f"{table.path}: missing required column '{name}'")
