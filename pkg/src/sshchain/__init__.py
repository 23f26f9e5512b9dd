"""Edge-state transfer simulations for a modulated SSH chain.

A chain of cavities and mechanical resonators with alternating couplings
1 -+ cos(theta) hosts a protected mid-gap state; ramping theta drags that
state from one edge to the other.  The package builds the chain
Hamiltonians, diagonalizes them, integrates the time-dependent dynamics,
sweeps (ramp rate, NNN strength) fidelity maps, and checks the
rotating-wave reduction of the underlying three-mode bosonic model.
"""

from .errors import NumericFailure, ResourceLimit
from .lattice import (G0, CouplingPoint, LatticeSpec, NnnPlacement, build_hamiltonian,
                      chain_hamiltonian, ssh_couplings, sublattice_parity)
from .spectral import (GapState, SpectrumResult, default_theta_grid, diagonalize,
                       gap_state, localization_sweep, spectrum_sweep)
from .dynamics import (FixedTheta, NnnRamp, ThetaRamp, Trajectory,
                       converged_final_fidelity, edge_state, evolve, fidelity,
                       integrate_schedule, propagate_step)
from .rwa import (DetuningInputs, FockModelSpec, RwaComparison, RwaValidation,
                  bessel_j0, build_full_hamiltonian, effective_detunings,
                  first_j0_zero, rwa_compare, run_validation)
from .sweep import SweepPlan, SweepResult, SweepRow, run_sweep

__version__ = "0.1.0"

__all__ = [
    "G0", "CouplingPoint", "LatticeSpec", "NnnPlacement", "build_hamiltonian",
    "chain_hamiltonian", "ssh_couplings", "sublattice_parity",
    "GapState", "SpectrumResult", "default_theta_grid", "diagonalize", "gap_state",
    "localization_sweep", "spectrum_sweep",
    "FixedTheta", "NnnRamp", "ThetaRamp", "Trajectory", "converged_final_fidelity",
    "edge_state", "evolve", "fidelity", "integrate_schedule", "propagate_step",
    "DetuningInputs", "FockModelSpec", "RwaComparison", "RwaValidation", "bessel_j0",
    "build_full_hamiltonian", "effective_detunings", "first_j0_zero", "rwa_compare",
    "run_validation",
    "SweepPlan", "SweepResult", "SweepRow", "run_sweep",
    "NumericFailure", "ResourceLimit",
]
