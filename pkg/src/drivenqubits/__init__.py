"""Steady-state entanglement of two driven, exchange-coupled, decaying qubits."""

__version__ = "0.1.0"

from .closed_form import (asymptotic_rho_max, bloch_dynamics, crossover_coupling,
                          detuned_summary, max_concurrence, optimal_coupling,
                          perturbative_correction, resonant_concurrence_signed,
                          resonant_steady_state, single_qubit_steady)
from .liouville import (ReservoirModel, Superoperator, SystemParams, evolve, liouvillian,
                        single_qubit_liouvillian, steady_state)
from .states import (DensityMatrix, InvalidStateError, PureState, bell_state, concurrence,
                     concurrence_signed, egge_state, fidelity, partial_trace, werner_state,
                     ye_state)
from .transfer import phase_correction, transfer, transmitted_elements

__all__ = [
    "DensityMatrix", "InvalidStateError", "PureState", "ReservoirModel", "Superoperator",
    "SystemParams", "asymptotic_rho_max", "bell_state", "bloch_dynamics", "concurrence",
    "concurrence_signed", "crossover_coupling", "detuned_summary", "egge_state", "evolve",
    "fidelity", "liouvillian", "max_concurrence", "optimal_coupling", "partial_trace",
    "perturbative_correction", "phase_correction", "resonant_concurrence_signed",
    "resonant_steady_state", "single_qubit_liouvillian", "single_qubit_steady",
    "steady_state", "transfer", "transmitted_elements", "werner_state", "ye_state",
]
