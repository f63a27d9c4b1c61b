"""Classical and quantum reservoirs, ridge readout, open/closed-loop operation."""
from .core import (
    ClassicalReservoir,
    QuantumReservoir,
    TrainedReadout,
    advance,
    closed_loop,
    harvest,
    harvest_states,
    init_classical,
    init_quantum,
    initial_state,
    leaky_update,
    predict_step,
    quantum_activation,
    solve_ridge,
    spectral_radius,
    step_classical,
    step_quantum,
    train_readout,
)
from .estimators import ClassicalESN, QuantumESN, check_series
from .io import load_readout, reservoir_from_dict, save_readout

__all__ = [
    "ClassicalESN",
    "ClassicalReservoir",
    "QuantumESN",
    "QuantumReservoir",
    "TrainedReadout",
    "advance",
    "check_series",
    "closed_loop",
    "harvest",
    "harvest_states",
    "init_classical",
    "init_quantum",
    "initial_state",
    "leaky_update",
    "load_readout",
    "predict_step",
    "quantum_activation",
    "reservoir_from_dict",
    "save_readout",
    "solve_ridge",
    "spectral_radius",
    "step_classical",
    "step_quantum",
    "train_readout",
]
