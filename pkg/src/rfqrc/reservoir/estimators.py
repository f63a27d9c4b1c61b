"""scikit-learn style forecasters wrapping the reservoir core."""
from __future__ import annotations

from numbers import Integral, Real

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils._param_validation import Interval, StrOptions
from sklearn.utils.validation import check_array, check_is_fitted

from ..dynamics import RangeScaler
from ..exceptions import LengthError, RejectedInputError
from ..quantum import ANSATZE
from .core import (
    TrainedReadout,
    closed_loop,
    harvest_states,
    init_classical,
    init_quantum,
    predict_step,
    solve_ridge,
)

__all__ = ["ClassicalESN", "QuantumESN"]


def check_series(X, n_features=None) -> list[np.ndarray]:
    """Normalise ``X`` into a list of ``(T, N_u)`` float arrays.

    Accepts one 2-D array, a 3-D array of equal-length series, or a list of
    2-D arrays (possibly of different lengths).
    """
    if isinstance(X, np.ndarray) and X.ndim == 3:
        items = list(X)
    elif isinstance(X, (list, tuple)) and X and np.ndim(X[0]) == 2:
        items = list(X)
    else:
        items = [X]
    series = [check_array(getattr(x, "data", x), ensure_min_samples=1) for x in items]
    if n_features is not None:
        for s in series:
            if s.shape[1] != n_features:
                raise RejectedInputError(f"expected {n_features} components, got {s.shape[1]}")
    return series


def _as_batch(X, n_features):
    """``(T, B, N_u)`` view of one series or a stack of equal-length series."""
    X = np.asarray(getattr(X, "data", X), dtype=float)
    single = X.ndim == 2
    if single:
        X = X[None]
    if X.ndim != 3 or X.shape[-1] != n_features:
        raise RejectedInputError(
            f"expected (T, {n_features}) or (B, T, {n_features}) input, got shape {X.shape}"
        )
    if not np.all(np.isfinite(X)):
        raise RejectedInputError("input contains non-finite values")
    return np.swapaxes(X, 0, 1), single


class _ReservoirForecaster(BaseEstimator):
    """Shared fit/forecast logic; subclasses only build the reservoir."""

    _parameter_constraints: dict = {
        "leak_rate": [Interval(Real, 0, 1, closed="right")],
        "tikhonov": [Interval(Real, 0, None, closed="left")],
        "washout": [Interval(Integral, 0, None, closed="left")],
        "random_state": [Interval(Integral, 0, None, closed="left")],
    }

    def _build_reservoir(self, n_features):
        raise NotImplementedError

    @property
    def n_reservoir_(self) -> int:
        return self.reservoir_.n_reservoir

    def fit(self, X, y=None):
        """Train the readout for one-step-ahead prediction.

        Parameters
        ----------
        X : array of shape (T, N_u), or a list of such arrays
            Raw (unscaled) training series.  Each series is washed out
            separately; its scaling is fitted on all series jointly.
        y : ignored
        """
        self._validate_params()
        series = check_series(X)
        n_features = series[0].shape[1]
        for s in series:
            if s.shape[1] != n_features:
                raise RejectedInputError("all training series need the same number of components")
            if s.shape[0] < self.washout + 2:
                raise LengthError(
                    f"series of {s.shape[0]} steps is too short for washout {self.washout}"
                )
        self.n_features_in_ = n_features
        self.scaler_ = RangeScaler().fit(np.vstack(series))
        self.reservoir_ = self._build_reservoir(n_features)

        n_aug = self.reservoir_.n_reservoir + 1
        gram = np.zeros((n_aug, n_aug))
        cross = np.zeros((n_aug, n_features))
        n_samples = 0
        by_length: dict[int, list[np.ndarray]] = {}
        for s in series:
            by_length.setdefault(s.shape[0], []).append(self.scaler_.transform(s))
        for group in by_length.values():
            U = np.stack(group, axis=1)  # (T, B, N_u)
            states = harvest_states(self.reservoir_, U[:-1])[self.washout :]
            targets = U[self.washout + 1 :]
            R = states.reshape(-1, states.shape[-1])
            R = np.hstack([R, np.ones((R.shape[0], 1))])
            Y = targets.reshape(-1, n_features)
            gram += R.T @ R
            cross += R.T @ Y
            n_samples += R.shape[0]
        self.gram_ = gram
        self.cross_ = cross
        self.n_train_samples_ = n_samples
        self.readout_ = TrainedReadout(solve_ridge(gram, cross, self.tikhonov), self.tikhonov)
        return self

    def refit_readout(self, tikhonov: float):
        """Re-solve the readout for another ``tikhonov`` without re-harvesting."""
        check_is_fitted(self, "gram_")
        self.tikhonov = tikhonov
        self.readout_ = TrainedReadout(solve_ridge(self.gram_, self.cross_, tikhonov), tikhonov)
        return self

    def transform(self, X):
        """Open-loop reservoir states ``r_1..r_T`` for a raw series (no washout)."""
        check_is_fitted(self)
        U, single = _as_batch(X, self.n_features_in_)
        states = harvest_states(self.reservoir_, self.scaler_.transform(U))
        states = np.swapaxes(states, 0, 1)
        return states[0] if single else states

    def warmup(self, X):
        """Reservoir state after driving it open-loop with the raw series ``X``."""
        check_is_fitted(self)
        U, single = _as_batch(X, self.n_features_in_)
        r = harvest_states(self.reservoir_, self.scaler_.transform(U))[-1]
        return r[0] if single else r

    def predict(self, X):
        """Teacher-forced one-step predictions; row ``i`` estimates ``X[i + 1]``."""
        check_is_fitted(self)
        U, single = _as_batch(X, self.n_features_in_)
        states = harvest_states(self.reservoir_, self.scaler_.transform(U))
        out = np.swapaxes(predict_step(states, self.readout_, self.scaler_), 0, 1)
        return out[0] if single else out

    def forecast(self, X, n_steps: int):
        """Closed-loop forecast of ``n_steps`` samples following the warm-up ``X``.

        ``X`` is a raw series ``(T, N_u)`` or a batch ``(B, T, N_u)``; the
        result has shape ``(n_steps, N_u)`` or ``(B, n_steps, N_u)``.
        """
        check_is_fitted(self)
        U, single = _as_batch(X, self.n_features_in_)
        r = harvest_states(self.reservoir_, self.scaler_.transform(U))[-1]
        return self.forecast_from_state(r[0] if single else r, n_steps)

    def forecast_from_state(self, r, n_steps: int):
        """Closed-loop forecast from reservoir state(s) ``r``."""
        check_is_fitted(self)
        out = closed_loop(self.reservoir_, self.readout_, r, n_steps, self.scaler_)
        return np.swapaxes(out, 0, 1) if out.ndim == 3 else out


class ClassicalESN(_ReservoirForecaster):
    """Echo state network with a leaky tanh reservoir and ridge readout.

    Parameters
    ----------
    n_reservoir : int, default=512
    sigma_in : float, default=0.5
        Half-width of the uniform input weights.
    spectral_radius : float, default=0.9
    density : float, default=0.1
        Probability that a recurrent connection exists.
    leak_rate : float, default=0.5
    tikhonov : float, default=1e-9
    washout : int, default=200
        Open-loop steps discarded at the start of each training series.
    random_state : int, default=0
        Seed of ``W_in``, ``W`` and the initial reservoir state.
    """

    _parameter_constraints: dict = {
        **_ReservoirForecaster._parameter_constraints,
        "n_reservoir": [Interval(Integral, 1, None, closed="left")],
        "sigma_in": [Interval(Real, 0, None, closed="left")],
        "spectral_radius": [Interval(Real, 0, 1, closed="right")],
        "density": [Interval(Real, 0, 1, closed="right")],
    }

    def __init__(
        self,
        n_reservoir=512,
        sigma_in=0.5,
        spectral_radius=0.9,
        density=0.1,
        leak_rate=0.5,
        tikhonov=1e-9,
        washout=200,
        random_state=0,
    ):
        self.n_reservoir = n_reservoir
        self.sigma_in = sigma_in
        self.spectral_radius = spectral_radius
        self.density = density
        self.leak_rate = leak_rate
        self.tikhonov = tikhonov
        self.washout = washout
        self.random_state = random_state

    def _build_reservoir(self, n_features):
        return init_classical(
            self.n_reservoir,
            n_features,
            self.sigma_in,
            self.spectral_radius,
            self.density,
            seed=self.random_state,
            leak_rate=self.leak_rate,
        )


class QuantumESN(_ReservoirForecaster):
    """Gate-based quantum reservoir read out through exact probabilities.

    Parameters
    ----------
    n_qubits : int, default=9
        The reservoir holds ``2**n_qubits`` probabilities.
    ansatz : {"C1", "C2", "C3", "C4", "C5"}, default="C4"
        ``C4`` is the recurrence-free configuration.
    leak_rate : float, default=0.1
    tikhonov : float, default=1e-9
    washout : int, default=200
    random_state : int, default=0
        Seed of the variation angles.
    """

    _parameter_constraints: dict = {
        **_ReservoirForecaster._parameter_constraints,
        "n_qubits": [Interval(Integral, 1, 20, closed="both")],
        "ansatz": [StrOptions(set(ANSATZE))],
    }

    def __init__(
        self,
        n_qubits=9,
        ansatz="C4",
        leak_rate=0.1,
        tikhonov=1e-9,
        washout=200,
        random_state=0,
    ):
        self.n_qubits = n_qubits
        self.ansatz = ansatz
        self.leak_rate = leak_rate
        self.tikhonov = tikhonov
        self.washout = washout
        self.random_state = random_state

    def _build_reservoir(self, n_features):
        return init_quantum(self.n_qubits, self.ansatz, self.leak_rate, seed=self.random_state)
