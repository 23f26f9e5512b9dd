import math

import numpy as np
import pytest

import sshchain.sweep as sweep_mod
from sshchain import LatticeSpec, ResourceLimit, SweepPlan, run_sweep


def small_plan(**overrides):
    params = dict(lattice=LatticeSpec(3), placement_variant="odd",
                  omega_grid=(5e-3, 2e-2), t_grid=(0.0, 0.2),
                  check_convergence=False)
    params.update(overrides)
    return SweepPlan(**params)


def test_plan_validation():
    with pytest.raises(ValueError):
        small_plan(omega_grid=())
    with pytest.raises(ValueError):
        small_plan(omega_grid=(2e-2, 5e-3))  # not increasing
    with pytest.raises(ValueError):
        small_plan(omega_grid=(0.0, 1e-2))
    with pytest.raises(ValueError):
        small_plan(t_grid=(-0.1, 0.2))
    with pytest.raises(ValueError):
        small_plan(placement_variant="diagonal")
    with pytest.raises(ValueError):
        small_plan(initial="Q")


def test_row_accounting_and_ordering():
    plan = small_plan()
    result = run_sweep(plan, workers=1)
    assert len(result.rows) == 4
    cells = [(r.omega, r.t_strength) for r in result.rows]
    assert cells == [(5e-3, 0.0), (5e-3, 0.2), (2e-2, 0.0), (2e-2, 0.2)]
    for row in result.rows:
        assert 0.0 <= row.fidelity <= 1.0 + 1e-12
        assert row.error is None


def test_scheduling_independent_results():
    plan = small_plan()
    serial = run_sweep(plan, workers=1)
    parallel = run_sweep(plan, workers=2)
    for a, b in zip(serial.rows, parallel.rows):
        assert a == b  # bitwise-identical dataclasses


def test_convergence_flag_reported():
    plan = small_plan(check_convergence=True)
    result = run_sweep(plan, workers=1)
    assert all(row.converged for row in result.rows)


def test_monotone_fidelity_without_nnn():
    plan = SweepPlan(lattice=LatticeSpec(10), placement_variant="none",
                     omega_grid=(1e-3, 5e-3, 2e-2), t_grid=(0.0,),
                     check_convergence=False)
    result = run_sweep(plan, workers=1)
    fids = [row.fidelity for row in result.rows]  # ascending omega
    assert fids[1] >= fids[2] - 1e-3
    assert fids[0] >= fids[1] - 1e-3


def test_plan_rejected_above_step_ceiling():
    plan = small_plan(omega_grid=(1e-6, 1e-5), step_ceiling=100_000)
    with pytest.raises(ResourceLimit, match=r"omega=1e-06"):
        run_sweep(plan, workers=1)


def test_partial_failure_recorded_per_row(monkeypatch):
    plan = small_plan()
    real_evolve = sweep_mod.evolve

    def exploding(spec, protocol, initial, target, **kwargs):
        if protocol.omega == 5e-3 and protocol.nnn.strength == 0.2:
            raise RuntimeError("synthetic blow-up")
        return real_evolve(spec, protocol, initial, target, **kwargs)

    monkeypatch.setattr(sweep_mod, "evolve", exploding)
    result = run_sweep(plan, workers=1)
    assert len(result.rows) == 4
    failed = [r for r in result.rows if r.error]
    assert len(failed) == 1
    assert failed[0].omega == 5e-3 and failed[0].t_strength == 0.2
    assert math.isnan(failed[0].fidelity)
    assert all(not math.isnan(r.fidelity) for r in result.rows if r.error is None)


def test_worker_env_override(monkeypatch):
    monkeypatch.setenv(sweep_mod.WORKERS_ENV_VAR, "1")
    assert sweep_mod.resolve_workers(None) == 1
    monkeypatch.setenv(sweep_mod.WORKERS_ENV_VAR, "3")
    assert sweep_mod.resolve_workers(None) == 3
    assert sweep_mod.resolve_workers(2) == 2
    with pytest.raises(ValueError):
        sweep_mod.resolve_workers(0)


def test_estimated_steps_scale_with_convergence():
    base = small_plan().estimated_steps()
    checked = small_plan(check_convergence=True).estimated_steps()
    assert [3 * n for n in base] == checked
