"""Chaotic benchmark systems, RK4 integration and dataset preparation."""
from .data import (
    MFE_EXTREME_THRESHOLD,
    MFE_LAMINAR_THRESHOLD,
    MfeEnsemble,
    RangeScaler,
    generate_mfe_ensemble,
    kinetic_energy,
    lt_to_steps,
    mfe_initial_states,
    rescale_range,
    split_dataset,
)
from .integrate import DIVERGENCE_BOUND, Trajectory, integrate, integrate_ensemble, rk4_step
from .io import load_trajectory, save_trajectory
from .systems import MFE, SYSTEMS, Lorenz63, Lorenz96, system_from_dict, system_rhs

__all__ = [
    "DIVERGENCE_BOUND",
    "MFE",
    "MFE_EXTREME_THRESHOLD",
    "MFE_LAMINAR_THRESHOLD",
    "SYSTEMS",
    "Lorenz63",
    "Lorenz96",
    "MfeEnsemble",
    "RangeScaler",
    "Trajectory",
    "generate_mfe_ensemble",
    "integrate",
    "integrate_ensemble",
    "kinetic_energy",
    "load_trajectory",
    "lt_to_steps",
    "mfe_initial_states",
    "rescale_range",
    "rk4_step",
    "save_trajectory",
    "split_dataset",
    "system_from_dict",
    "system_rhs",
]
