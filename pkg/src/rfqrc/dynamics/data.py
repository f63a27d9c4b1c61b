"""Dataset preparation: range scaling, LT-based splits, the MFE ensemble."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ..exceptions import (
    DegenerateRangeError,
    EmptyEnsembleError,
    LengthError,
    RejectedInputError,
)
from .integrate import Trajectory, integrate_ensemble
from .systems import MFE

__all__ = [
    "RangeScaler",
    "rescale_range",
    "kinetic_energy",
    "lt_to_steps",
    "split_dataset",
    "MfeEnsemble",
    "generate_mfe_ensemble",
    "MFE_EXTREME_THRESHOLD",
    "MFE_LAMINAR_THRESHOLD",
]

MFE_EXTREME_THRESHOLD = 0.1
MFE_LAMINAR_THRESHOLD = 0.48


class RangeScaler(TransformerMixin, BaseEstimator):
    """Map every component affinely onto ``[0, 1]`` using its min and max.

    Attributes
    ----------
    data_min_, data_max_ : ndarray of shape (n_features,)
    """

    def fit(self, X, y=None):
        X = check_array(X, ensure_min_samples=1)
        lo, hi = X.min(axis=0), X.max(axis=0)
        flat = np.flatnonzero(~(hi > lo))
        if flat.size:
            raise DegenerateRangeError(f"components {flat.tolist()} have zero range")
        self.data_min_ = lo
        self.data_max_ = hi
        self.n_features_in_ = X.shape[1]
        return self

    @property
    def range_(self):
        return self.data_max_ - self.data_min_

    def transform(self, X):
        check_is_fitted(self)
        X = np.asarray(X, dtype=float)
        return (X - self.data_min_) / self.range_

    def inverse_transform(self, X):
        check_is_fitted(self)
        X = np.asarray(X, dtype=float)
        return X * self.range_ + self.data_min_

    @classmethod
    def from_bounds(cls, data_min, data_max) -> "RangeScaler":
        scaler = cls()
        scaler.data_min_ = np.asarray(data_min, dtype=float)
        scaler.data_max_ = np.asarray(data_max, dtype=float)
        scaler.n_features_in_ = scaler.data_min_.size
        return scaler


def rescale_range(traj: Trajectory, scaler: RangeScaler | None = None):
    """Scale ``traj`` to ``[0, 1]`` per component.

    Returns ``(scaled, scaler)``; ``scaler.inverse_transform`` undoes the map.
    Pass a fitted ``scaler`` to reuse the bounds of another trajectory (the
    output then may leave ``[0, 1]``).
    """
    if scaler is None:
        scaler = RangeScaler().fit(traj.data)
    scaled = traj.with_data(
        scaler.transform(traj.data), scaling=(scaler.data_min_.copy(), scaler.data_max_.copy())
    )
    return scaled, scaler


def kinetic_energy(a) -> np.ndarray | float:
    """``k = 0.5 * sum(a_i**2)`` over the last axis (nine MFE amplitudes)."""
    a = np.asarray(a, dtype=float)
    if a.shape[-1:] != (9,):
        raise RejectedInputError(f"expected 9 mode amplitudes, got shape {a.shape}")
    k = 0.5 * np.sum(a * a, axis=-1)
    return float(k) if k.ndim == 0 else k


def lt_to_steps(lt: float, lyapunov_exponent: float, dt: float) -> int:
    """Number of samples covering ``lt`` Lyapunov times, rounded half up."""
    if lt < 0:
        raise RejectedInputError(f"negative duration {lt} LT")
    return int(math.floor(lt / (lyapunov_exponent * dt) + 0.5))


def split_dataset(traj: Trajectory, washout_lt: float, train_lt: float, test_lt: float):
    """Cut ``traj`` into consecutive washout, train and test segments.

    Each length is ``lt_to_steps(lt, ...)``; leftover samples at the end are
    ignored.
    """
    lengths = [lt_to_steps(lt, traj.lyapunov_exponent, traj.dt) for lt in (washout_lt, train_lt, test_lt)]
    need = sum(lengths)
    if need > len(traj):
        raise LengthError(f"split needs {need} steps but only {len(traj)} are available")
    bounds = np.cumsum([0] + lengths)
    return tuple(traj[bounds[i] : bounds[i + 1]] for i in range(3))


@dataclass
class MfeEnsemble:
    series: list[Trajectory]
    k_e: float
    k_l: float
    retained_count: int
    discarded_count: int

    @property
    def generated_count(self) -> int:
        return self.retained_count + self.discarded_count

    @property
    def discard_fraction(self) -> float:
        return self.discarded_count / self.generated_count

    def split(self, *counts: int):
        """Partition the retained series into consecutive groups of ``counts``."""
        if sum(counts) > len(self.series):
            raise LengthError(
                f"requested {sum(counts)} series but only {len(self.series)} were retained"
            )
        bounds = np.cumsum((0,) + counts)
        return tuple(self.series[bounds[i] : bounds[i + 1]] for i in range(len(counts)))


def mfe_initial_states(count: int, seed: int, amplitude: float = 0.1) -> np.ndarray:
    """Laminar state with modes 2-9 perturbed by ``U(-amplitude, amplitude)``.

    Member ``i`` draws from its own generator spawned from ``seed``, so any
    member can be regenerated alone.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    x0 = np.zeros((count, 9))
    x0[:, 0] = 1.0
    for i, child in enumerate(children):
        x0[i, 1:] = np.random.default_rng(child).uniform(-amplitude, amplitude, size=8)
    return x0


def generate_mfe_ensemble(
    count: int,
    length_lt: float = 65.0,
    k_l: float = MFE_LAMINAR_THRESHOLD,
    seed: int = 0,
    system: MFE | None = None,
    spinup_lt: float = 2.0,
    k_e: float = MFE_EXTREME_THRESHOLD,
    batch_size: int = 500,
) -> MfeEnsemble:
    """Integrate ``count`` MFE series and drop those that laminarize.

    A series is discarded when its kinetic energy reaches ``k_l`` anywhere in
    the recorded window.  The first ``spinup_lt`` after the perturbed laminar
    start are integrated but not recorded: the start itself sits at
    ``k ~ 0.5`` and needs a few hundred steps to leave the laminar basin.
    """
    if count < 1:
        raise RejectedInputError("count must be at least 1")
    if not length_lt > 0:
        raise RejectedInputError("length_lt must be positive")
    system = system or MFE()
    dt, lam = system.dt, system.lyapunov_exponent
    steps = lt_to_steps(length_lt, lam, dt)
    spin = lt_to_steps(spinup_lt, lam, dt)
    x0 = mfe_initial_states(count, seed)

    kept = []
    for start in range(0, count, batch_size):
        block = x0[start : start + batch_size]
        out = integrate_ensemble(system, block, spin + steps - 1, dt)[spin:]
        kmax = kinetic_energy(out).max(axis=0)
        for j in np.flatnonzero(kmax < k_l):
            kept.append(
                Trajectory(
                    out[:, j, :],
                    dt=dt,
                    lyapunov_exponent=lam,
                    system=system.to_dict(),
                    seed=seed,
                    meta={"member": int(start + j)},
                )
            )
    if not kept:
        raise EmptyEnsembleError(f"all {count} MFE series reached k >= {k_l}")
    return MfeEnsemble(kept, k_e=k_e, k_l=k_l, retained_count=len(kept), discarded_count=count - len(kept))
