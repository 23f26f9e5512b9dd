"""Parallel (omega, T) grids of ramp evolutions producing fidelity maps.

Cells are independent; a bounded process pool evaluates them and the
collector reorders results by cell index, so the output is identical for
any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dynamics import (CONVERGENCE_TOL, DEFAULT_DT_CAP, DEFAULT_MIN_STEPS,
                       DEFAULT_STEP_CEILING, ThetaRamp, converged_final_fidelity,
                       edge_state, evolve)
from .errors import ResourceLimit
from .lattice import LatticeSpec, NnnPlacement

WORKERS_ENV_VAR = "SSHCHAIN_WORKERS"


@dataclass(frozen=True)
class SweepPlan:
    """Grid of theta-ramp evolutions: one cell per (omega, T) pair."""

    lattice: LatticeSpec
    placement_variant: str
    omega_grid: tuple[float, ...]
    t_grid: tuple[float, ...]
    initial: str = "L"
    target: str = "R"
    dt: Optional[float] = None
    check_convergence: bool = True
    convergence_tol: float = CONVERGENCE_TOL
    step_ceiling: int = DEFAULT_STEP_CEILING

    def __post_init__(self):
        object.__setattr__(self, "omega_grid", tuple(float(w) for w in self.omega_grid))
        object.__setattr__(self, "t_grid", tuple(float(t) for t in self.t_grid))
        if not self.omega_grid or not self.t_grid:
            raise ValueError("omega and T grids must be nonempty")
        if any(not (math.isfinite(w) and w > 0.0) for w in self.omega_grid):
            raise ValueError("omega grid values must be positive and finite")
        if any(not (math.isfinite(t) and t >= 0.0) for t in self.t_grid):
            raise ValueError("T grid values must be nonnegative and finite")
        for grid, name in ((self.omega_grid, "omega"), (self.t_grid, "T")):
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError(f"{name} grid must be strictly increasing")
        # touch the constructors so a bad variant or selector fails here
        NnnPlacement(self.placement_variant, 0.0 if self.placement_variant == "none" else 1.0)
        edge_state(self.lattice, self.initial)
        edge_state(self.lattice, self.target)

    def cells(self) -> list[tuple[float, float]]:
        """Row-major cell order: omega outer, T inner."""
        return [(w, t) for w in self.omega_grid for t in self.t_grid]

    def estimated_steps(self) -> list[int]:
        """Per-cell step count including the convergence rerun."""
        factor = 3 if self.check_convergence else 1
        out = []
        for w, _t in self.cells():
            duration = math.pi / w
            dt = self.dt if self.dt is not None else min(DEFAULT_DT_CAP,
                                                         duration / DEFAULT_MIN_STEPS)
            out.append(factor * math.ceil(duration / dt))
        return out


@dataclass
class SweepRow:
    omega: float
    t_strength: float
    fidelity: float
    steps: int
    converged: bool
    error: Optional[str] = None


@dataclass
class SweepResult:
    plan: SweepPlan
    rows: list[SweepRow] = field(default_factory=list)


def _run_cell(plan: SweepPlan, omega: float, t_strength: float) -> SweepRow:
    try:
        if plan.placement_variant == "none" or t_strength == 0.0:
            nnn = NnnPlacement.none()
        else:
            nnn = NnnPlacement(plan.placement_variant, t_strength)
        protocol = ThetaRamp(omega=omega, nnn=nnn)
        initial = edge_state(plan.lattice, plan.initial)
        target = edge_state(plan.lattice, plan.target)
        if plan.check_convergence:
            fid, converged, steps, _delta = converged_final_fidelity(
                plan.lattice, protocol, initial, target, dt=plan.dt,
                tol=plan.convergence_tol, step_ceiling=plan.step_ceiling)
        else:
            trajectory = evolve(plan.lattice, protocol, initial, target, sampling=2,
                                dt=plan.dt, step_ceiling=plan.step_ceiling)
            fid, converged, steps = trajectory.final_fidelity, False, trajectory.steps
        return SweepRow(omega, t_strength, fid, steps, converged)
    except Exception as exc:
        return SweepRow(omega, t_strength, math.nan, 0, False, error=str(exc))


def _cell_args(plan):
    return [(plan, w, t) for w, t in plan.cells()]


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        env = os.environ.get(WORKERS_ENV_VAR)
        workers = int(env) if env else (os.cpu_count() or 1)
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return workers


def run_sweep(plan: SweepPlan, workers: Optional[int] = None) -> SweepResult:
    """Evaluate every cell; row order is row-major regardless of scheduling."""
    estimates = plan.estimated_steps()
    total = sum(estimates)
    if total > plan.step_ceiling:
        worst = sorted(zip(estimates, plan.cells()), reverse=True)[:5]
        detail = ", ".join(f"(omega={w:g}, T={t:g}): {n} steps" for n, (w, t) in worst)
        raise ResourceLimit(
            f"plan needs ~{total} steps, above the ceiling of {plan.step_ceiling}; "
            f"most expensive cells: {detail}")
    workers = resolve_workers(workers)
    args = _cell_args(plan)
    if workers == 1 or len(args) == 1:
        rows = [_run_cell(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(args))) as pool:
            rows = list(pool.map(_run_cell, *zip(*args)))
    return SweepResult(plan=plan, rows=rows)
