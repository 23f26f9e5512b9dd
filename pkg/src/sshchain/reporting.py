"""Deterministic file output: CSV with 17-significant-digit floats, JSON manifests.

Every run writes a manifest holding the fully resolved configuration and a
hash over it (timestamp excluded), and every CSV carries that hash in a
leading comment line so downstream consumers can tie data to its manifest.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path
from typing import Iterable, Sequence

ARTIFACT_VERSION = "0.1.0"
MANIFEST_COMMENT_PREFIX = "# manifest_hash="


def fmt(value) -> str:
    """Render one CSV field: floats at 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)):
        return str(value)
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=True)


def manifest_hash(command: str, config: dict) -> str:
    body = canonical_json({"artifact_version": ARTIFACT_VERSION,
                           "command": command, "config": config})
    return hashlib.sha256(body.encode()).hexdigest()


def write_manifest(path: Path, command: str, config: dict) -> str:
    """Write the resolved-run manifest; returns its hash."""
    digest = manifest_hash(command, config)
    manifest = {
        "artifact_version": ARTIFACT_VERSION,
        "command": command,
        "config": config,
        "manifest_hash": digest,
        "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return digest


def write_csv(path: Path, digest: str, header: Sequence[str],
              rows: Iterable[Sequence]) -> None:
    lines = [MANIFEST_COMMENT_PREFIX + digest, ",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
