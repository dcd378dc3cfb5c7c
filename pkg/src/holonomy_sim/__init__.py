"""Adiabatic non-Abelian holonomic gate simulation for transmon-cavity devices."""

from .device import (
    DeviceParams,
    DriveProgram,
    TimeDependentHamiltonian,
    TransmonSpec,
    dressed_basis,
    effective_rabi,
    epsilon_of_flux,
    flux_amplitude_for_L,
    g_of_flux,
    h0_matrix,
    h_of_t,
    invert_rabi,
    level_splittings,
)
from .experiments import (
    Scenario,
    ScenarioResult,
    SweepResult,
    presets,
    run_scenario,
    scenario_from_json,
    scenario_to_json,
    sweep_gate_time,
    write_outputs,
)
from .linalg import (
    EigenSystem,
    expm_i_hermitian,
    fidelity,
    hermitian_eig,
    populations,
)
from .propagate import PropagationTrace, propagate, propagate_converged
from .tripod import (
    HolonomyMatrix,
    LoopSchedule,
    angles_schedule,
    dark_states,
    holonomy_from_propagator,
    rabi_from_angles,
    tripod_hamiltonian,
)

__version__ = "0.1.0"

__all__ = [
    "DeviceParams",
    "DriveProgram",
    "EigenSystem",
    "HolonomyMatrix",
    "LoopSchedule",
    "PropagationTrace",
    "Scenario",
    "ScenarioResult",
    "SweepResult",
    "TimeDependentHamiltonian",
    "TransmonSpec",
    "angles_schedule",
    "dark_states",
    "dressed_basis",
    "effective_rabi",
    "epsilon_of_flux",
    "expm_i_hermitian",
    "fidelity",
    "flux_amplitude_for_L",
    "g_of_flux",
    "h0_matrix",
    "h_of_t",
    "hermitian_eig",
    "holonomy_from_propagator",
    "invert_rabi",
    "level_splittings",
    "populations",
    "presets",
    "propagate",
    "propagate_converged",
    "rabi_from_angles",
    "run_scenario",
    "scenario_from_json",
    "scenario_to_json",
    "sweep_gate_time",
    "tripod_hamiltonian",
    "write_outputs",
]
