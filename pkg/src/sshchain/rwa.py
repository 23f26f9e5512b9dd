"""Validation of the reduction from the three-mode bosonic model to the chain.

The pre-reduction model keeps the counter-rotating pair terms with their
modulated phase 2*omega_b*t + 2*lambda*sin(nu*t + phi).  Expanding that
phase in harmonics weights the resonant pair term by J0(2*lambda), so
choosing 2*lambda at a zero of J0 removes it; what survives is the
three-site chain with couplings (G1, G2) and direct hopping T.  The
comparison here evolves both models from a single photon in the first
cavity and scores the occupation difference.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

import numpy as np

from .errors import NumericFailure, ResourceLimit
from .lattice import LatticeSpec, NnnPlacement, chain_hamiltonian

J0_WINDOW = 20.0
_SERIES_TAIL = Fraction(1, 10 ** 25)

DEFAULT_FOCK_DIM_CEILING = 4096
DEFAULT_COMPARE_SAMPLES = 201
# Convention gate for the step size: resolve the fastest modulation phase.
DT_FRACTION_OF_MOD_PERIOD = 0.02
CUTOFF_SHIFT_WARN = 0.20


def bessel_j0(x: float) -> float:
    """Zeroth-order Bessel function on |x| <= 20 via the exact-rational power series.

    Terms are accumulated in rational arithmetic, so the alternating
    cancellation near the top of the window costs no precision; the only
    error is the final rounding to float.
    """
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    if abs(x) > J0_WINDOW:
        raise ValueError(f"|x| must be <= {J0_WINDOW}, got {x}")
    q = Fraction(x) * Fraction(x) / 4
    term = Fraction(1)
    total = Fraction(1)
    k = 0
    while True:
        k += 1
        term *= -q / (k * k)
        total += term
        if abs(term) < _SERIES_TAIL and 2 * k > abs(x):
            return float(total)


@cache
def first_j0_zero() -> float:
    """Smallest positive root of J0, bisected inside [2, 3] to machine precision."""
    lo, hi = 2.0, 3.0
    f_lo = bessel_j0(lo)
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        f_mid = bessel_j0(mid)
        if (f_lo > 0.0) == (f_mid > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DetuningInputs:
    """Bare cavity detunings plus the optomechanical shift sources."""

    delta_a: np.ndarray  # length N+1
    g: np.ndarray  # length N
    beta: np.ndarray  # length N, complex steady amplitudes

    def __post_init__(self):
        delta_a = np.atleast_1d(np.asarray(self.delta_a, dtype=float))
        g = np.atleast_1d(np.asarray(self.g, dtype=float))
        beta = np.atleast_1d(np.asarray(self.beta, dtype=complex))
        if g.shape != beta.shape or delta_a.shape != (g.size + 1,):
            raise ValueError(
                f"inconsistent lengths: delta_a {delta_a.shape}, g {g.shape}, beta {beta.shape}")
        object.__setattr__(self, "delta_a", delta_a)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "beta", beta)


def effective_detunings(inputs: DetuningInputs) -> np.ndarray:
    """Cavity detunings shifted by the mechanical steady amplitudes.

    The first cavity is pulled down by its neighboring resonator, the last
    is pushed up, and the bulk cavities feel both neighbors with opposite
    signs.
    """
    shift = inputs.g * 2.0 * inputs.beta.real
    out = inputs.delta_a.copy()
    out[0] -= shift[0]
    out[-1] += shift[-1]
    out[1:-1] += shift[1:] - shift[:-1]
    return out


@dataclass(frozen=True)
class FockModelSpec:
    """Truncated three-mode model (cavity a1, resonator b1, cavity a2)."""

    omega_b: float
    nu: float
    lambda_mod: float
    G1: float
    G2: float
    T: float = 0.0
    n_max: int = 2
    phi: float = 0.0
    dim_ceiling: int = DEFAULT_FOCK_DIM_CEILING

    def __post_init__(self):
        if not (math.isfinite(self.omega_b) and self.omega_b > 0.0):
            raise ValueError(f"omega_b must be positive, got {self.omega_b!r}")
        if not (math.isfinite(self.nu) and self.nu > 0.0):
            raise ValueError(f"nu must be positive, got {self.nu!r}")
        if self.nu / self.omega_b < 5.0:
            raise ValueError(
                f"nu/omega_b must be >= 5 for the harmonic selection to hold, "
                f"got {self.nu / self.omega_b:.3g}")
        for name in ("lambda_mod", "G1", "G2", "T", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.dim ** 3 > self.dim_ceiling:
            raise ResourceLimit(
                f"Hilbert dimension {self.dim ** 3} exceeds ceiling {self.dim_ceiling}")

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @property
    def kappa(self) -> float:
        return 2.0 * self.lambda_mod

    @classmethod
    def from_kappa(cls, kappa: float, **kwargs) -> "FockModelSpec":
        return cls(lambda_mod=kappa / 2.0, **kwargs)

    def with_n_max(self, n_max: int) -> "FockModelSpec":
        return FockModelSpec(self.omega_b, self.nu, self.lambda_mod, self.G1, self.G2,
                             self.T, n_max, self.phi, self.dim_ceiling)


def _ladder(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def _mode_operators(n_max: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Annihilation operators in the basis n_a1 * dim^2 + n_b1 * dim + n_a2."""
    dim = n_max + 1
    a = _ladder(dim)
    eye = np.eye(dim)
    a1 = np.kron(np.kron(a, eye), eye)
    b1 = np.kron(np.kron(eye, a), eye)
    a2 = np.kron(np.kron(eye, eye), a)
    return a1, b1, a2


def _static_parts(spec: FockModelSpec) -> tuple[np.ndarray, np.ndarray]:
    """Number-conserving part and the bare counter-rotating pair operator."""
    a1, b1, a2 = _mode_operators(spec.n_max)
    hop = -spec.G1 * a1.T @ b1 + spec.G2 * a2.T @ b1 + spec.T * a2.T @ a1
    pair = -spec.G1 * a1.T @ b1.T + spec.G2 * a2.T @ b1.T
    return hop + hop.T, pair


def modulation_phase(spec: FockModelSpec, t: float) -> float:
    return 2.0 * spec.omega_b * t + 2.0 * spec.lambda_mod * math.sin(spec.nu * t + spec.phi)


def build_full_hamiltonian(spec: FockModelSpec, t: float,
                           include_counter_rotating: bool = True) -> np.ndarray:
    """Three-mode Hamiltonian at time t in the truncated occupation basis."""
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    static, pair = _static_parts(spec)
    h = static.astype(complex)
    if include_counter_rotating:
        phase = np.exp(1j * modulation_phase(spec, t))
        h += phase * pair + np.conj(phase) * pair.T
    assert np.max(np.abs(h - h.conj().T)) <= 1e-14
    return h


def _occupation_diagonals(n_max: int) -> np.ndarray:
    a1, b1, a2 = _mode_operators(n_max)
    return np.stack([np.diag(a1.T @ a1), np.diag(b1.T @ b1), np.diag(a2.T @ a2)])


@dataclass
class RwaComparison:
    """Occupation histories of the full and effective models on a shared grid."""

    spec: FockModelSpec
    duration: float
    dt: float
    times: np.ndarray
    full_occupations: np.ndarray  # samples x 3
    effective_populations: np.ndarray  # samples x 3
    rms_deviation: float
    max_deviation: float


def rwa_compare(spec: FockModelSpec, duration: float, dt: float,
                samples: int = DEFAULT_COMPARE_SAMPLES,
                include_counter_rotating: bool = True) -> RwaComparison:
    """Evolve both models from |1, 0, 0> and score the occupation mismatch."""
    if not (math.isfinite(duration) and duration > 0.0):
        raise ValueError(f"duration must be positive, got {duration!r}")
    dt_max = DT_FRACTION_OF_MOD_PERIOD * 2.0 * math.pi / spec.nu
    if not (0.0 < dt <= dt_max):
        raise ValueError(f"dt must lie in (0, {dt_max:.3g}] to resolve the modulation, got {dt}")
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")

    intervals = samples - 1
    per_interval = max(1, math.ceil(duration / dt / intervals))
    n_steps = per_interval * intervals
    dt_actual = duration / n_steps

    static, pair = _static_parts(spec)
    occ_diag = _occupation_diagonals(spec.n_max)
    dim = static.shape[0]
    psi = np.zeros(dim, dtype=complex)
    psi[spec.dim ** 2] = 1.0  # |1, 0, 0>

    occupations = np.empty((samples, 3))
    occupations[0] = (1.0, 0.0, 0.0)
    slot = 1
    for k in range(n_steps):
        if include_counter_rotating:
            phase = np.exp(1j * modulation_phase(spec, (k + 0.5) * dt_actual))
            h = static + phase * pair + np.conj(phase) * pair.T
        else:
            h = static.astype(complex)
        try:
            energies, modes = np.linalg.eigh(h)
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise NumericFailure(f"eigensolver failed at step {k}: {exc}") from exc
        psi = modes @ (np.exp(-1j * energies * dt_actual) * (modes.conj().T @ psi))
        if (k + 1) % per_interval == 0:
            occupations[slot] = occ_diag @ (np.abs(psi) ** 2)
            slot += 1

    times = np.linspace(0.0, duration, samples)
    effective = _effective_populations(spec, times)
    deviation = occupations - effective
    return RwaComparison(
        spec=spec, duration=duration, dt=dt_actual, times=times,
        full_occupations=occupations, effective_populations=effective,
        rms_deviation=float(np.sqrt(np.mean(deviation ** 2))),
        max_deviation=float(np.max(np.abs(deviation))))


def _effective_populations(spec: FockModelSpec, times: np.ndarray) -> np.ndarray:
    """Exact site populations of the three-site chain from e1."""
    h = chain_hamiltonian(LatticeSpec(1), spec.G1, spec.G2, NnnPlacement.none())
    h[0, 2] = h[2, 0] = spec.T
    energies, modes = np.linalg.eigh(h)
    weights = modes.T @ np.array([1.0, 0.0, 0.0])
    out = np.empty((times.size, 3))
    for i, t in enumerate(times):
        psi = modes @ (np.exp(-1j * energies * t) * weights)
        out[i] = np.abs(psi) ** 2
    return out


@dataclass
class RwaValidation:
    """Comparison plus the cutoff-convergence rerun."""

    base: RwaComparison
    rerun: RwaComparison | None
    nmax_convergence_ratio: float

    @property
    def rms_deviation(self) -> float:
        return self.base.rms_deviation

    @property
    def max_deviation(self) -> float:
        return self.base.max_deviation


def run_validation(spec: FockModelSpec, duration: float, dt: float,
                   samples: int = DEFAULT_COMPARE_SAMPLES,
                   cutoff_rerun: bool = True) -> RwaValidation:
    """Compare at n_max and once more at n_max + 1 to expose truncation drift."""
    base = rwa_compare(spec, duration, dt, samples=samples)
    rerun = None
    ratio = 1.0
    if cutoff_rerun:
        rerun = rwa_compare(spec.with_n_max(spec.n_max + 1), duration, dt, samples=samples)
        if base.rms_deviation > 1e-12 or rerun.rms_deviation > 1e-12:
            ratio = rerun.rms_deviation / max(base.rms_deviation, 1e-300)
        if abs(ratio - 1.0) > CUTOFF_SHIFT_WARN:
            warnings.warn(
                f"raising n_max from {spec.n_max} shifts the rms deviation by "
                f"{abs(ratio - 1.0):.0%}; the truncation is not converged",
                stacklevel=2)
    return RwaValidation(base=base, rerun=rerun, nmax_convergence_ratio=float(ratio))
