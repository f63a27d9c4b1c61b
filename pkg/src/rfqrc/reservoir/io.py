"""Persistence of readouts (CSV + JSON) and reservoir definitions (JSON)."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..exceptions import RejectedInputError
from .core import TrainedReadout, init_classical, init_quantum

__all__ = ["save_readout", "load_readout", "reservoir_to_json", "reservoir_from_dict"]


def save_readout(readout: TrainedReadout, path, *, seed=None, scaler=None, extra=None) -> Path:
    """Write ``W_out`` to ``path`` (CSV, 17 significant digits) and a JSON sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, readout.W_out, delimiter=",", fmt="%.17g")
    meta = {
        "beta": readout.beta,
        "n_reservoir": readout.n_reservoir,
        "n_outputs": readout.n_outputs,
        "seed": seed,
        "scaling": None
        if scaler is None
        else {"min": scaler.data_min_.tolist(), "max": scaler.data_max_.tolist()},
    }
    if extra:
        meta.update(extra)
    path.with_suffix(".json").write_text(json.dumps(meta, indent=2))
    return path


def load_readout(path) -> tuple[TrainedReadout, dict]:
    path = Path(path)
    meta = json.loads(path.with_suffix(".json").read_text())
    W_out = np.loadtxt(path, delimiter=",", ndmin=2)
    if W_out.shape[0] != meta["n_reservoir"] + 1:
        raise RejectedInputError(
            f"{path}: W_out has {W_out.shape[0]} rows, metadata says N_r={meta['n_reservoir']}"
        )
    return TrainedReadout(W_out, meta["beta"]), meta


def reservoir_to_json(res) -> str:
    """Seed plus hyperparameters; the matrices are regenerated on load."""
    return json.dumps(res.to_dict(), indent=2)


def reservoir_from_dict(spec: dict):
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind == "classical":
        return init_classical(
            spec["n_reservoir"],
            spec["n_inputs"],
            spec["sigma_in"],
            spec["rho"],
            spec["density"],
            seed=spec["seed"],
            leak_rate=spec["leak_rate"],
        )
    if kind == "quantum":
        return init_quantum(spec["n_qubits"], spec["ansatz"], spec["leak_rate"], seed=spec["seed"])
    raise RejectedInputError(f"unknown reservoir kind {kind!r}")

