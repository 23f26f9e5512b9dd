"""Time-dependent Schrodinger evolution under the scheduled Hamiltonians.

The propagator is the exact exponential of the Hamiltonian frozen at each
step midpoint, applied through its eigendecomposition.  This is
unconditionally unitary, so slow ramps can take large steps: the default
step is dt = min(0.5, duration / 1e4), refined so that sample times land
exactly on step boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import NumericFailure, ResourceLimit
from .lattice import LatticeSpec, NnnPlacement, build_hamiltonian, chain_hamiltonian, ssh_couplings

DEFAULT_DT_CAP = 0.5
DEFAULT_MIN_STEPS = 10_000
DEFAULT_STEP_CEILING = 10 ** 8
DEFAULT_SAMPLING = 1000
CONVERGENCE_TOL = 1e-4

_EDGE_SELECTORS = ("L", "R", "Lp", "Rp")


@dataclass(frozen=True)
class ThetaRamp:
    """theta(t) = omega * t swept over [0, pi]; NNN strength held fixed."""

    omega: float
    nnn: NnnPlacement = field(default_factory=NnnPlacement.none)

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0.0):
            raise ValueError(f"omega must be positive and finite, got {self.omega!r}")

    @property
    def duration(self) -> float:
        return math.pi / self.omega

    def hamiltonian(self, spec: LatticeSpec, t: float) -> np.ndarray:
        return build_hamiltonian(spec, self.omega * t, self.nnn)


@dataclass(frozen=True)
class FixedTheta:
    """Static Hamiltonian at a fixed angle for an explicit duration."""

    theta: float
    duration: float
    nnn: NnnPlacement = field(default_factory=NnnPlacement.none)

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta!r}")
        if not (math.isfinite(self.duration) and self.duration > 0.0):
            raise ValueError(f"duration must be positive, got {self.duration!r}")

    def hamiltonian(self, spec: LatticeSpec, t: float) -> np.ndarray:
        return build_hamiltonian(spec, self.theta, self.nnn)


@dataclass(frozen=True)
class NnnRamp:
    """NNN strength ramped as T(t) = omega * t at fixed angle.

    The placement's strength is the ramp target, so the evolution lasts
    nnn.strength / omega.
    """

    theta: float
    omega: float
    nnn: NnnPlacement = field(default_factory=NnnPlacement.none)

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta!r}")
        if not (math.isfinite(self.omega) and self.omega > 0.0):
            raise ValueError(f"omega must be positive and finite, got {self.omega!r}")
        if self.nnn.variant == "none" or self.nnn.strength <= 0.0:
            raise ValueError("NNN ramp needs a placement with a positive target strength")

    @property
    def duration(self) -> float:
        return self.nnn.strength / self.omega

    def hamiltonian(self, spec: LatticeSpec, t: float) -> np.ndarray:
        point = ssh_couplings(self.theta)
        ramped = NnnPlacement(self.nnn.variant, min(self.omega * t, self.nnn.strength))
        return chain_hamiltonian(spec, point.intra, point.inter, ramped)


DriveProtocol = Union[ThetaRamp, FixedTheta, NnnRamp]


@dataclass
class Trajectory:
    """Sampled evolution record."""

    times: np.ndarray
    populations: np.ndarray  # samples x L
    norms: np.ndarray
    fidelity_vs_target: np.ndarray
    final_fidelity: float
    dt: float
    steps: int


def edge_state(spec: LatticeSpec, which: str) -> np.ndarray:
    """Unit basis vector for an edge selector: L -> e1, R -> eL, Lp -> e2, Rp -> e(L-1)."""
    if which not in _EDGE_SELECTORS:
        raise ValueError(f"which must be one of {_EDGE_SELECTORS}, got {which!r}")
    n = spec.n_sites
    site = {"L": 0, "R": n - 1, "Lp": 1, "Rp": n - 2}[which]
    state = np.zeros(n, dtype=complex)
    state[site] = 1.0
    return state


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Squared overlap |<a|b>|^2; insensitive to the global phase of either state."""
    return float(abs(np.vdot(a, b)) ** 2)


def propagate_step(psi: np.ndarray, h_mid: np.ndarray, dt: float) -> np.ndarray:
    """Apply exp(-i * h_mid * dt) through the eigendecomposition of h_mid."""
    if not (math.isfinite(dt) and dt > 0.0):
        raise ValueError(f"dt must be positive, got {dt!r}")
    try:
        energies, modes = np.linalg.eigh(h_mid)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericFailure(f"eigensolver failed during propagation: {exc}") from exc
    return modes @ (np.exp(-1j * energies * dt) * (modes.conj().T @ psi))


def _plan_steps(duration: float, dt: float | None, sampling: int,
                step_ceiling: int) -> tuple[int, int, float]:
    """Choose a step count that is a multiple of the sample intervals."""
    target = min(DEFAULT_DT_CAP, duration / DEFAULT_MIN_STEPS) if dt is None else dt
    if not (math.isfinite(target) and target > 0.0):
        raise ValueError(f"dt must be positive, got {target!r}")
    intervals = sampling - 1
    per_interval = max(1, math.ceil(duration / target / intervals))
    n_steps = per_interval * intervals
    if n_steps > step_ceiling:
        raise ResourceLimit(
            f"evolution needs {n_steps} steps, above the ceiling of {step_ceiling}; "
            f"raise the ceiling or the step size")
    return n_steps, per_interval, duration / n_steps


def integrate_schedule(h_of_t: Callable[[float], np.ndarray], duration: float,
                       initial: np.ndarray, target: np.ndarray,
                       sampling: int = DEFAULT_SAMPLING, dt: float | None = None,
                       step_ceiling: int = DEFAULT_STEP_CEILING,
                       constant: bool = False) -> Trajectory:
    """Midpoint-exponential integration of an arbitrary Hamiltonian schedule.

    `h_of_t` is evaluated at step midpoints.  With `constant=True` the
    schedule is evaluated once and its eigendecomposition reused.
    """
    if sampling < 2:
        raise ValueError(f"sampling must be >= 2, got {sampling}")
    psi = np.asarray(initial, dtype=complex).copy()
    n_steps, per_interval, dt_actual = _plan_steps(duration, dt, sampling, step_ceiling)

    times = np.empty(sampling)
    norms = np.empty(sampling)
    fidelities = np.empty(sampling)
    populations = np.empty((sampling, psi.size))

    def record(slot: int, t: float):
        times[slot] = t
        norms[slot] = float(np.linalg.norm(psi))
        fidelities[slot] = fidelity(target, psi)
        populations[slot] = np.abs(psi) ** 2

    record(0, 0.0)
    if constant:
        try:
            energies, modes = np.linalg.eigh(h_of_t(0.5 * dt_actual))
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise NumericFailure(f"eigensolver failed during propagation: {exc}") from exc
        phase = np.exp(-1j * energies * dt_actual)
        modes_h = modes.conj().T
    slot = 1
    for k in range(n_steps):
        if constant:
            psi = modes @ (phase * (modes_h @ psi))
        else:
            psi = propagate_step(psi, h_of_t((k + 0.5) * dt_actual), dt_actual)
        if (k + 1) % per_interval == 0:
            record(slot, (k + 1) * dt_actual)
            slot += 1
    return Trajectory(times=times, populations=populations, norms=norms,
                      fidelity_vs_target=fidelities, final_fidelity=float(fidelities[-1]),
                      dt=dt_actual, steps=n_steps)


def evolve(spec: LatticeSpec, protocol: DriveProtocol, initial: np.ndarray,
           target: np.ndarray, sampling: int = DEFAULT_SAMPLING,
           dt: float | None = None,
           step_ceiling: int = DEFAULT_STEP_CEILING) -> Trajectory:
    """Evolve `initial` under the protocol, sampling populations and target fidelity."""
    initial = np.asarray(initial, dtype=complex)
    if abs(np.linalg.norm(initial) - 1.0) > 1e-8:
        raise ValueError("initial state must be normalized")
    if initial.size != spec.n_sites:
        raise ValueError(f"state has {initial.size} sites, lattice has {spec.n_sites}")
    return integrate_schedule(
        lambda t: protocol.hamiltonian(spec, t), protocol.duration, initial, target,
        sampling=sampling, dt=dt, step_ceiling=step_ceiling,
        constant=isinstance(protocol, FixedTheta))


def converged_final_fidelity(spec: LatticeSpec, protocol: DriveProtocol,
                             initial: np.ndarray, target: np.ndarray,
                             dt: float | None = None,
                             tol: float = CONVERGENCE_TOL,
                             step_ceiling: int = DEFAULT_STEP_CEILING
                             ) -> tuple[float, bool, int, float]:
    """Final fidelity with a step-halving check.

    Runs the evolution at the working step and again at half the step;
    returns (fidelity of the refined run, |difference| <= tol, steps of
    the refined run, difference).
    """
    coarse = evolve(spec, protocol, initial, target, sampling=2, dt=dt,
                    step_ceiling=step_ceiling)
    fine = evolve(spec, protocol, initial, target, sampling=2, dt=coarse.dt / 2.0,
                  step_ceiling=step_ceiling)
    delta = abs(fine.final_fidelity - coarse.final_fidelity)
    return fine.final_fidelity, delta <= tol, fine.steps, delta
