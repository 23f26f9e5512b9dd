"""Single-excitation Hamiltonian of the chain.

The chain has L = 2N + 1 sites: odd sites (1-based) are cavity modes,
even sites are mechanical resonators.  Nearest-neighbor couplings
alternate between intra-cell 1 - cos(theta) and inter-cell 1 + cos(theta)
(energy unit G0 = 1; G0 must stay below half the mechanical frequency on
the physical platform, which is a documentation-level constraint only).
An optional next-nearest-neighbor hopping T can be placed on one
sublattice: odd variant couples cavity pairs (2n-1, 2n+1), even variant
couples resonator pairs (2n, 2n+2).

All couplings are written nonnegative.  The frame in which the intra-cell
coupling carries a minus sign is related to this one by flipping the sign
of whole cells in an alternating pattern, which maps the matrix to minus
a matrix with the same nearest-neighbor couplings and negated T; spectra
therefore agree only for T = 0, but per-site populations of the dynamics
agree always (see tests for both statements).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

G0 = 1.0

_VARIANTS = ("none", "odd", "even")


@dataclass(frozen=True)
class LatticeSpec:
    """Chain geometry: N unit cells, 2N + 1 sites."""

    n_cells: int

    def __post_init__(self):
        if isinstance(self.n_cells, bool) or not isinstance(self.n_cells, (int, np.integer)):
            raise ValueError(f"n_cells must be an integer, got {self.n_cells!r}")
        if self.n_cells < 1:
            raise ValueError(f"n_cells must be >= 1, got {self.n_cells}")

    @property
    def n_sites(self) -> int:
        return 2 * self.n_cells + 1


@dataclass(frozen=True)
class NnnPlacement:
    """Next-nearest-neighbor hopping: which sublattice and how strong."""

    variant: str = "none"
    strength: float = 0.0

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"variant must be one of {_VARIANTS}, got {self.variant!r}")
        if not math.isfinite(self.strength):
            raise ValueError(f"strength must be finite, got {self.strength!r}")
        if self.variant == "none":
            if self.strength != 0.0:
                raise ValueError("variant 'none' forces strength 0")
        elif self.strength < 0.0:
            raise ValueError(f"strength must be >= 0, got {self.strength}")

    @classmethod
    def none(cls) -> "NnnPlacement":
        return cls("none", 0.0)

    @classmethod
    def odd(cls, strength: float) -> "NnnPlacement":
        return cls("odd", strength)

    @classmethod
    def even(cls, strength: float) -> "NnnPlacement":
        return cls("even", strength)


@dataclass(frozen=True)
class CouplingPoint:
    """Alternating coupling pair at a given modulation angle; intra + inter = 2*G0."""

    intra: float
    inter: float
    theta: float


def ssh_couplings(theta: float) -> CouplingPoint:
    """Couplings at angle theta: intra = 1 - cos(theta), inter = 1 + cos(theta)."""
    if not math.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta!r}")
    c = math.cos(theta)
    return CouplingPoint(intra=G0 * (1.0 - c), inter=G0 * (1.0 + c), theta=theta)


def chain_hamiltonian(spec: LatticeSpec, intra: float, inter: float,
                      nnn: NnnPlacement) -> np.ndarray:
    """Assemble the L x L coupling matrix for arbitrary bond values.

    Bond (i, i+1) carries intra for odd i (1-based) and inter for even i;
    the NNN placement adds strength on (i, i+2) pairs of the selected
    parity.  Symmetric with zero diagonal by construction.
    """
    n = spec.n_sites
    h = np.zeros((n, n))
    bonds = np.empty(n - 1)
    bonds[0::2] = intra
    bonds[1::2] = inter
    idx = np.arange(n - 1)
    h[idx, idx + 1] = bonds
    h[idx + 1, idx] = bonds
    if nnn.variant != "none":
        start = 0 if nnn.variant == "odd" else 1
        for i in range(start, n - 2, 2):
            h[i, i + 2] = nnn.strength
            h[i + 2, i] = nnn.strength
    return h


def build_hamiltonian(spec: LatticeSpec, theta: float, nnn: NnnPlacement) -> np.ndarray:
    """Instantaneous single-excitation Hamiltonian at angle theta."""
    point = ssh_couplings(theta)
    return chain_hamiltonian(spec, point.intra, point.inter, nnn)


def sublattice_parity(n_sites: int) -> np.ndarray:
    """Diagonal of the sublattice parity operator: +1 on odd sites, -1 on even."""
    signs = np.ones(n_sites)
    signs[1::2] = -1.0
    return signs
