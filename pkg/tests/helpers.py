"""Shared oracles and file readers for the test suite.

The propagator oracle is a plain Taylor expansion of the matrix
exponential, independent of the eigendecomposition route used by the
package.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def series_expm_apply(h: np.ndarray, t: float, psi: np.ndarray, terms: int = 80) -> np.ndarray:
    """Brute-force exp(-i*h*t) @ psi as a truncated power series."""
    result = psi.astype(complex).copy()
    term = psi.astype(complex).copy()
    for k in range(1, terms + 1):
        term = (-1j * t / k) * (h @ term)
        result = result + term
    return result


def j0_series_float64(x: float, terms: int = 64) -> float:
    """Reference power series for the zeroth Bessel function in plain float64."""
    total = 1.0
    term = 1.0
    q = x * x / 4.0
    for k in range(1, terms + 1):
        term *= -q / (k * k)
        total += term
    return total


def _field(value: str) -> float:
    if value == "true":
        return 1.0
    if value == "false":
        return 0.0
    return float(value)


def read_csv(path: Path) -> tuple[str, list[str], np.ndarray]:
    """Read a package CSV: returns (manifest hash, header, float matrix)."""
    lines = Path(path).read_text().splitlines()
    assert lines[0].startswith("# manifest_hash=")
    digest = lines[0].split("=", 1)[1]
    header = lines[1].split(",")
    data = np.array([[_field(v) for v in line.split(",")] for line in lines[2:]])
    return digest, header, data
