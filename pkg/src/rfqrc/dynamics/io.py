"""Trajectory persistence: CSV samples plus a JSON sidecar."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .integrate import Trajectory

__all__ = ["save_trajectory", "load_trajectory", "sidecar_path"]


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_suffix(".json")


def save_trajectory(traj: Trajectory, path) -> Path:
    """Write ``t,x0,x1,...`` rows with 17 significant digits and a sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"x{i}" for i in range(traj.n_components)])
        for i, row in enumerate(traj.data):
            writer.writerow([f"{i * traj.dt:.17g}"] + [f"{v:.17g}" for v in row])
    meta = {
        "dt": traj.dt,
        "lyapunov_exponent": traj.lyapunov_exponent,
        "system": traj.system,
        "seed": traj.seed,
        "scaling": None
        if traj.scaling is None
        else {"min": traj.scaling[0].tolist(), "max": traj.scaling[1].tolist()},
        "meta": traj.meta,
    }
    sidecar_path(path).write_text(json.dumps(meta, indent=2))
    return path


def load_trajectory(path) -> Trajectory:
    path = Path(path)
    meta = json.loads(sidecar_path(path).read_text())
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)[:, 1:]
    scaling = meta.get("scaling")
    if scaling is not None:
        scaling = (np.asarray(scaling["min"]), np.asarray(scaling["max"]))
    return Trajectory(
        data,
        dt=meta["dt"],
        lyapunov_exponent=meta["lyapunov_exponent"],
        scaling=scaling,
        system=meta.get("system"),
        seed=meta.get("seed"),
        meta=meta.get("meta") or {},
    )
