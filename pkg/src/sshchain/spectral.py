"""Dense eigendecomposition of chain Hamiltonians and gap-state extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NumericFailure
from .lattice import LatticeSpec, NnnPlacement, build_hamiltonian

# Two in-gap branches closer than this in energy are considered degenerate
# for the purpose of continuity tracking.
ENERGY_TIE_TOL = 1e-6

DEFAULT_THETA_POINTS = 512


def default_theta_grid(n_points: int = DEFAULT_THETA_POINTS) -> np.ndarray:
    """Uniform angle grid over [0, 2*pi], endpoints included."""
    if n_points < 1:
        raise ValueError(f"n_points must be >= 1, got {n_points}")
    if n_points == 1:
        return np.zeros(1)
    return np.linspace(0.0, 2.0 * math.pi, n_points)


@dataclass
class SpectrumResult:
    """Eigendecomposition at one angle; column k of eigenvectors pairs with eigenvalues[k]."""

    theta: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass
class GapState:
    """The in-gap branch: energy, signed amplitudes, and site populations."""

    energy: float
    amplitudes: np.ndarray
    populations: np.ndarray


def diagonalize(h: np.ndarray, theta: float = math.nan) -> SpectrumResult:
    """Eigendecompose a symmetric matrix; eigenvalues ascending."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if not np.array_equal(h, h.T):
        raise ValueError("matrix is not exactly symmetric")
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise NumericFailure(f"symmetric eigensolver failed to converge: {exc}") from exc
    return SpectrumResult(theta=theta, eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def spectrum_sweep(spec: LatticeSpec, nnn: NnnPlacement,
                   thetas: Sequence[float]) -> list[SpectrumResult]:
    """Diagonalize at every grid angle, preserving grid order."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.size == 0:
        raise ValueError("theta grid must be nonempty")
    if not np.all(np.isfinite(thetas)):
        raise ValueError("theta grid contains non-finite values")
    results = []
    for theta in thetas:
        try:
            results.append(diagonalize(build_hamiltonian(spec, theta, nnn), theta=theta))
        except NumericFailure as exc:
            raise NumericFailure(f"diagonalization failed at theta={theta!r}: {exc}") from exc
    return results


def gap_state(result: SpectrumResult, previous: Optional[GapState] = None) -> GapState:
    """Select the in-gap branch of a spectrum.

    The branch is the middle sorted eigenvalue (index N+1 of 2N+1,
    1-based).  When `previous` is given and several branches lie within
    ENERGY_TIE_TOL of the middle one, the branch with maximal overlap
    against the previous amplitudes is taken, so a sweep can follow one
    state through near-degeneracies.
    """
    energies = result.eigenvalues
    n = energies.size
    if n % 2 == 0:
        raise ValueError(f"gap-state selection expects an odd dimension, got {n}")
    mid = (n - 1) // 2
    candidates = np.flatnonzero(np.abs(energies - energies[mid]) <= ENERGY_TIE_TOL)
    pick = mid
    if previous is not None and candidates.size > 1:
        overlaps = np.abs(result.eigenvectors[:, candidates].T @ previous.amplitudes)
        pick = int(candidates[np.argmax(overlaps)])
    amplitudes = result.eigenvectors[:, pick].copy()
    return GapState(energy=float(energies[pick]), amplitudes=amplitudes,
                    populations=amplitudes ** 2)


def localization_sweep(spec: LatticeSpec, nnn: NnnPlacement,
                       thetas: Sequence[float]) -> list[GapState]:
    """Gap state at every grid angle, tracked by continuity along the grid."""
    states: list[GapState] = []
    previous = None
    for result in spectrum_sweep(spec, nnn, thetas):
        previous = gap_state(result, previous)
        states.append(previous)
    return states
