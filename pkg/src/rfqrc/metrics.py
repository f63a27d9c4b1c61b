"""Forecast quality measures: VPT, predictability horizon, F-score, memory, PDFs."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .exceptions import DegenerateRangeError, RejectedInputError

__all__ = [
    "MetricReport",
    "nrmse",
    "vpt",
    "ph",
    "extreme_event_scan",
    "event_scores",
    "memory_capacity",
    "pdf_histogram",
    "overlap_coefficient",
]


@dataclass
class MetricReport:
    vpt: float | None = None
    ph: float | None = None
    precision: float | None = None
    recall: float | None = None
    fscore: float | None = None
    mc: float | None = None
    pdf: tuple | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.pdf is not None:
            edges, dens = self.pdf
            out["pdf"] = {"edges": np.asarray(edges).tolist(), "density": np.asarray(dens).tolist()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def nrmse(y_true, y_pred, sigma) -> np.ndarray:
    """``sqrt(mean_i((y_i - yhat_i)**2 / sigma_i**2))`` at every time step.

    The mean runs over the last (component) axis.
    """
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape:
        raise RejectedInputError(f"shape mismatch: {y_true.shape} vs {y_pred.shape}")
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0):
        raise DegenerateRangeError("every component needs a positive standard deviation")
    if y_true.ndim == 1:
        y_true, y_pred = y_true[:, None], y_pred[:, None]
    return np.sqrt(np.mean(((y_true - y_pred) / sigma) ** 2, axis=-1))


def _leading_valid(ok: np.ndarray) -> np.ndarray:
    """Number of leading True entries along the last axis."""
    bad = ~ok
    first = np.argmax(bad, axis=-1)
    return np.where(bad.any(axis=-1), first, ok.shape[-1])


def vpt(y_true, y_pred, lyapunov_exponent: float, dt: float, threshold: float = 0.5, sigma=None):
    """Valid prediction time in Lyapunov times.

    Counts the leading steps whose NRMSE stays below ``threshold``; sample
    ``i`` of the forecast lies ``(i + 1) dt`` after the start.  ``sigma``
    defaults to the per-component standard deviation of ``y_true``.  Leading
    batch axes give one VPT per forecast.
    """
    y_true = np.asarray(y_true, dtype=float)
    if sigma is None:
        sigma = y_true.reshape(-1, y_true.shape[-1]).std(axis=0)
    err = nrmse(y_true, y_pred, sigma)
    out = _leading_valid(err < threshold) * dt * lyapunov_exponent
    return float(out) if np.ndim(out) == 0 else out


def ph(k_pred, k_true, k_e: float, k_bar: float, dt: float, lyapunov_exponent: float, tol: float = 0.2):
    """Predictability horizon of the kinetic energy, in Lyapunov times.

    Time until ``|k_pred - k_true| / |k_e - k_bar|`` first reaches ``tol``;
    the full window when it never does.
    """
    if k_e == k_bar:
        raise RejectedInputError("k_bar must differ from the extreme-event threshold")
    k_pred = np.asarray(k_pred, dtype=float)
    k_true = np.asarray(k_true, dtype=float)
    if k_pred.shape != k_true.shape:
        raise RejectedInputError(f"shape mismatch: {k_pred.shape} vs {k_true.shape}")
    rel = np.abs(k_pred - k_true) / abs(k_e - k_bar)
    out = _leading_valid(rel < tol) * dt * lyapunov_exponent
    return float(out) if np.ndim(out) == 0 else out


def extreme_event_scan(
    predict_k: Callable[[int, int], np.ndarray],
    k_true,
    event_index: int,
    k_e: float,
    k_bar: float,
    dt: float,
    lyapunov_exponent: float,
    delta_init: float = 10.0,
    tau: float = 0.5,
    tol: float = 0.2,
) -> float:
    """Predictability horizon of one extreme event by shrinking the lead time.

    ``predict_k(start, steps)`` returns the closed-loop kinetic energy for
    samples ``start .. start + steps - 1`` of ``k_true`` (the caller handles
    the open-loop warm-up before ``start``).  The forecast starts ``delta``
    Lyapunov times ahead of the event; while its horizon falls short of
    ``delta`` the start moves ``tau`` closer.  Returns ``delta`` at the first
    success and 0 if ``delta`` shrinks to zero.
    """
    k_true = np.asarray(k_true, dtype=float)
    steps_per_lt = 1.0 / (lyapunov_exponent * dt)
    n_tries = int(round(delta_init / tau))
    for i in range(n_tries):
        delta = delta_init - i * tau
        lead = int(np.floor(delta * steps_per_lt + 0.5))
        start = event_index - lead
        if start < 0:
            raise RejectedInputError(f"event at {event_index} leaves no room for a {delta} LT lead")
        horizon = ph(predict_k(start, lead), k_true[start : start + lead], k_e, k_bar, dt, lyapunov_exponent, tol)
        if horizon >= lead * dt * lyapunov_exponent - 1e-12:
            return float(delta)
    return 0.0


def event_scores(predicted_k, true_k, k_e: float, pt: float, steps_per_lt: float):
    """Precision, recall and F-score of extreme-event forecasts.

    ``predicted_k`` and ``true_k`` are ``(n_starts, horizon)`` arrays aligned
    on the forecast start.  A start counts as an event when ``k >= k_e``
    somewhere inside ``[pt, pt + 1)`` Lyapunov times.  With no predicted
    (true) events precision (recall) is 1; F is 0 when both are 0.
    """
    predicted_k = np.atleast_2d(np.asarray(predicted_k, dtype=float))
    true_k = np.atleast_2d(np.asarray(true_k, dtype=float))
    if predicted_k.shape != true_k.shape:
        raise RejectedInputError(f"shape mismatch: {predicted_k.shape} vs {true_k.shape}")
    if pt < 0:
        raise RejectedInputError(f"prediction time must be non-negative, got {pt}")
    lo = int(np.floor(pt * steps_per_lt + 0.5))
    hi = int(np.floor((pt + 1.0) * steps_per_lt + 0.5))
    if hi > true_k.shape[1]:
        raise RejectedInputError(f"window ends at step {hi} but the horizon has {true_k.shape[1]}")
    pred = (predicted_k[:, lo:hi] >= k_e).any(axis=1)
    true = (true_k[:, lo:hi] >= k_e).any(axis=1)
    tp = int(np.sum(pred & true))
    fp = int(np.sum(pred & ~true))
    fn = int(np.sum(~pred & true))
    return scores_from_counts(tp, fp, fn)


def scores_from_counts(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 1.0
    r = tp / (tp + fn) if tp + fn else 1.0
    f = 0.0 if p == 0 or r == 0 else 2.0 / (1.0 / p + 1.0 / r)
    return p, r, f


def _squared_correlation(a, b) -> float:
    va, vb = np.var(a), np.var(b)
    if va <= 0 or vb <= 0:
        return 0.0
    cov = np.mean((a - a.mean()) * (b - b.mean()))
    return float(min(1.0, cov * cov / (va * vb)))


def memory_capacity(
    reservoir,
    d_max: int = 25,
    input_len: int = 5000,
    seed: int = 0,
    betas=(1e-6, 1e-9, 1e-12),
    washout: int = 500,
    return_profile: bool = False,
):
    """Linear memory capacity ``sum_d MF_d`` for delays ``1..d_max``.

    The reservoir is driven by i.i.d. ``U(0, 1)`` scalar input.  The state
    reached after feeding ``u(t - 1)`` is regressed on ``u(t - d)``; one ridge
    readout per delay is fitted on the first 60 % of the samples, its
    ``beta`` picked on the next 20 % and ``MF_d`` measured on the last 20 %.
    """
    from .reservoir import harvest_states, solve_ridge

    if reservoir.n_reservoir < 1 or getattr(reservoir, "n_inputs", 1) != 1:
        raise RejectedInputError("memory capacity needs a single-input reservoir")
    if input_len <= 5 * d_max:
        raise RejectedInputError(f"input_len={input_len} is too short for d_max={d_max}")
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.0, 1.0, size=washout + input_len + d_max)
    states = harvest_states(reservoir, u[:, None])
    # states[i] has consumed u[i]; it is paired with u[i + 1 - d]
    idx = np.arange(washout + d_max, washout + d_max + input_len)
    X = np.hstack([states[idx], np.ones((idx.size, 1))])
    n_tr, n_va = int(0.6 * idx.size), int(0.2 * idx.size)
    tr, va, te = slice(0, n_tr), slice(n_tr, n_tr + n_va), slice(n_tr + n_va, None)
    gram = X[tr].T @ X[tr]

    profile = np.zeros(d_max)
    for d in range(1, d_max + 1):
        target = u[idx + 1 - d]
        cross = X[tr].T @ target[tr]
        best = None
        for beta in betas:
            w = solve_ridge(gram, cross[:, None], beta)[:, 0]
            score = _squared_correlation(X[va] @ w, target[va])
            if best is None or score > best[0]:
                best = (score, w)
        profile[d - 1] = _squared_correlation(X[te] @ best[1], target[te])
    mc = float(profile.sum())
    return (mc, profile) if return_profile else mc


def pdf_histogram(series, bins: int = 50, range=None):
    """Density histogram normalised to unit area; returns ``(edges, density)``."""
    x = np.asarray(series, dtype=float).ravel()
    if x.size == 0:
        raise RejectedInputError("cannot build a histogram of an empty series")
    if bins < 1:
        raise RejectedInputError(f"bins must be >= 1, got {bins}")
    density, edges = np.histogram(x, bins=bins, range=range, density=True)
    return edges, density


def overlap_coefficient(p, q, edges) -> float:
    """Shared area ``sum(min(p, q) * width)`` of two densities on common bins."""
    width = np.diff(np.asarray(edges, dtype=float))
    return float(np.sum(np.minimum(p, q) * width))
