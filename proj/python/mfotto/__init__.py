"""Frustrated spin-ring Otto engine: exact diagonalization, entanglement and cycle efficiencies."""

from ._core import (
    ChainParams,
    ContinuationError,
    NoThresholdError,
    NumericError,
    ParameterError,
    chirality_operator,
    density_matrix,
    efficiency_sc,
    efficiency_sweep,
    entropy,
    entropy_sc,
    fidelity,
    free_energy,
    free_energy_sc,
    hamiltonian,
    internal_energy,
    run_cycle,
    spectrum,
    spectrum4,
    susceptibility,
    tangles,
    threshold_temperature,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
