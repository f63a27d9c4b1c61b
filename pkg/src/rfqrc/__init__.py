"""Classical and recurrence-free quantum reservoir computing for chaotic systems."""
from . import dynamics, harness, metrics, quantum, reservoir
from .exceptions import (
    ConfigError,
    DegenerateRangeError,
    DivergenceError,
    EmptyEnsembleError,
    InitializationError,
    LengthError,
    NumericFailure,
    NumericOverflowError,
    RejectedInputError,
    ReservoirError,
    SolverError,
)
from .harness import ExperimentConfig, grid_search, run_experiment
from .reservoir import ClassicalESN, QuantumESN

__version__ = "0.1.0"

__all__ = [
    "ClassicalESN",
    "QuantumESN",
    "ExperimentConfig",
    "grid_search",
    "run_experiment",
    "dynamics",
    "harness",
    "metrics",
    "quantum",
    "reservoir",
    "ConfigError",
    "DegenerateRangeError",
    "DivergenceError",
    "EmptyEnsembleError",
    "InitializationError",
    "LengthError",
    "NumericFailure",
    "NumericOverflowError",
    "RejectedInputError",
    "ReservoirError",
    "SolverError",
]
