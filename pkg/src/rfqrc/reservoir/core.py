"""Reservoir dynamics, harvesting and the ridge readout.

Conventions shared by every function here:

* inputs are already range-scaled to ``[0, 1]``;
* ``r_{i+1} = update(r_i, u_i)``, so the state at index ``i + 1`` has seen
  the input at index ``i`` and is trained to predict ``u_{i+1}``;
* reservoir states carry any number of leading batch axes, which lets one
  call advance independent trajectories over the same reservoir together.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from ..dynamics import DIVERGENCE_BOUND
from ..exceptions import (
    DivergenceError,
    InitializationError,
    LengthError,
    RejectedInputError,
    SolverError,
)
from ..quantum import AnsatzConfig, build_step_circuit, get_ansatz, measure_probabilities, simulate

__all__ = [
    "ClassicalReservoir",
    "QuantumReservoir",
    "TrainedReadout",
    "init_classical",
    "init_quantum",
    "step_classical",
    "leaky_update",
    "step_quantum",
    "advance",
    "initial_state",
    "harvest",
    "harvest_states",
    "train_readout",
    "predict_step",
    "closed_loop",
    "spectral_radius",
]


@dataclass(frozen=True)
class ClassicalReservoir:
    W_in: np.ndarray
    W: np.ndarray
    leak_rate: float = 1.0
    sigma_in: float | None = None
    rho: float | None = None
    density: float | None = None
    seed: int | None = None

    def __post_init__(self):
        W_in = np.asarray(self.W_in, dtype=float)
        W = np.asarray(self.W, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise RejectedInputError(f"W must be square, got shape {W.shape}")
        if W_in.ndim != 2 or W_in.shape[0] != W.shape[0]:
            raise RejectedInputError(f"W_in must have {W.shape[0]} rows, got shape {W_in.shape}")
        _check_leak(self.leak_rate)
        object.__setattr__(self, "W_in", W_in)
        object.__setattr__(self, "W", W)

    @property
    def n_reservoir(self) -> int:
        return self.W.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.W_in.shape[1]

    def to_dict(self) -> dict:
        return {
            "kind": "classical",
            "n_reservoir": self.n_reservoir,
            "n_inputs": self.n_inputs,
            "sigma_in": self.sigma_in,
            "rho": self.rho,
            "density": self.density,
            "leak_rate": self.leak_rate,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class QuantumReservoir:
    n_qubits: int
    ansatz: AnsatzConfig
    alpha: np.ndarray
    leak_rate: float = 0.1
    seed: int | None = None
    chunk_size: int = field(default=0, compare=False)

    def __post_init__(self):
        _check_leak(self.leak_rate)
        alpha = np.asarray(self.alpha, dtype=float)
        if alpha.shape != (self.n_qubits,):
            raise RejectedInputError(f"alpha must have {self.n_qubits} angles, got {alpha.shape}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "ansatz", get_ansatz(self.ansatz))

    @property
    def n_reservoir(self) -> int:
        return 2**self.n_qubits

    def to_dict(self) -> dict:
        return {
            "kind": "quantum",
            "n_qubits": self.n_qubits,
            "ansatz": self.ansatz.name,
            "leak_rate": self.leak_rate,
            "seed": self.seed,
        }


@dataclass
class TrainedReadout:
    """Ridge readout; row ``N_r`` of ``W_out`` multiplies the constant bias 1."""

    W_out: np.ndarray
    beta: float

    @property
    def n_reservoir(self) -> int:
        return self.W_out.shape[0] - 1

    @property
    def n_outputs(self) -> int:
        return self.W_out.shape[1]


def _check_leak(eps):
    if not 0.0 < eps <= 1.0:
        raise RejectedInputError(f"leak rate must lie in (0, 1], got {eps}")


# -- initialisation -------------------------------------------------------------


def spectral_radius(W: np.ndarray, maxiter: int = 10_000) -> float:
    """Largest eigenvalue magnitude of ``W``."""
    n = W.shape[0]
    if n <= 1024:
        return float(np.max(np.abs(np.linalg.eigvals(W))))
    # k=1 can lock onto the wrong member of a near-degenerate pair
    try:
        vals = scipy.sparse.linalg.eigs(
            W, k=6, which="LM", ncv=40, maxiter=maxiter, return_eigenvectors=False
        )
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        raise InitializationError(
            f"dominant eigenvalue did not converge within {maxiter} iterations"
        ) from exc
    return float(np.max(np.abs(vals)))


def init_classical(
    n_reservoir: int,
    n_inputs: int,
    sigma_in: float,
    rho: float,
    density: float,
    seed: int = 0,
    leak_rate: float = 1.0,
) -> ClassicalReservoir:
    """Random input matrix and Erdos-Renyi recurrent matrix scaled to ``rho``.

    ``W_in ~ U(-sigma_in, sigma_in)``.  Each entry of ``W`` is nonzero with
    probability ``density`` and then drawn from ``U(-1, 1)``; the matrix is
    finally multiplied by ``rho / |lambda_max|``.
    """
    if n_reservoir < 1 or n_inputs < 1:
        raise RejectedInputError("reservoir and input sizes must be positive")
    if not 0.0 < rho <= 1.0:
        raise RejectedInputError(f"spectral radius must lie in (0, 1], got {rho}")
    if not 0.0 < density <= 1.0:
        raise RejectedInputError(f"density must lie in (0, 1], got {density}")
    if sigma_in < 0:
        raise RejectedInputError(f"input scaling must be non-negative, got {sigma_in}")

    rng = np.random.default_rng(seed)
    W_in = rng.uniform(-sigma_in, sigma_in, size=(n_reservoir, n_inputs))
    for attempt in range(4):
        mask = rng.random((n_reservoir, n_reservoir)) < density
        W = np.where(mask, rng.uniform(-1.0, 1.0, size=mask.shape), 0.0)
        lam = spectral_radius(W) if W.any() else 0.0
        if lam > 0.0:
            break
        # all-zero (or nilpotent) draw: move to a perturbed stream
        rng = np.random.default_rng([seed, attempt + 1])
    else:
        raise InitializationError(
            f"recurrent matrix had zero spectral radius after 3 retries (N={n_reservoir}, D={density})"
        )
    return ClassicalReservoir(
        W_in=W_in,
        W=W * (rho / lam),
        leak_rate=leak_rate,
        sigma_in=sigma_in,
        rho=rho,
        density=density,
        seed=seed,
    )


def init_quantum(n_qubits: int, ansatz="C4", leak_rate: float = 0.1, seed: int = 0) -> QuantumReservoir:
    """Quantum reservoir with variation angles ``alpha ~ U(0, 4 pi)``."""
    if n_qubits < 1:
        raise RejectedInputError(f"n_qubits must be >= 1, got {n_qubits}")
    alpha = np.random.default_rng(seed).uniform(0.0, 4.0 * np.pi, size=n_qubits)
    return QuantumReservoir(n_qubits, get_ansatz(ansatz), alpha, leak_rate=leak_rate, seed=seed)


def initial_state(res, batch: tuple[int, ...] = (), seed: int | None = None) -> np.ndarray:
    """Random starting state: ``U(-0.1, 0.1)`` (classical) or uniform probabilities."""
    if isinstance(res, QuantumReservoir):
        return np.full(batch + (res.n_reservoir,), 1.0 / res.n_reservoir)
    seed = res.seed if seed is None else seed
    rng = np.random.default_rng([0 if seed is None else seed, 7])
    return rng.uniform(-0.1, 0.1, size=batch + (res.n_reservoir,))


# -- time stepping --------------------------------------------------------------


def step_classical(res: ClassicalReservoir, r_prev, u_scaled) -> np.ndarray:
    """Activation ``tanh(W_in u + W r)`` before leaky integration."""
    r_prev = np.asarray(r_prev, dtype=float)
    u_scaled = np.asarray(u_scaled, dtype=float)
    return np.tanh(u_scaled @ res.W_in.T + r_prev @ res.W.T)


def leaky_update(r_prev, r_hat, eps: float) -> np.ndarray:
    """``(1 - eps) r_prev + eps r_hat``."""
    return (1.0 - eps) * np.asarray(r_prev) + eps * np.asarray(r_hat)


def quantum_activation(res: QuantumReservoir, r_prev, u_scaled) -> np.ndarray:
    """Measured probabilities of the step circuit (``r_hat``)."""
    u_scaled = np.clip(np.asarray(u_scaled, dtype=float), 0.0, 1.0)
    r_enc = None
    if res.ansatz.recurrent:
        r_prev = np.asarray(r_prev, dtype=float)
        peak = np.max(r_prev, axis=-1, keepdims=True)
        r_enc = np.divide(r_prev, peak, out=np.zeros_like(r_prev), where=peak > 0)
    circuit = build_step_circuit(res.ansatz, r_enc, u_scaled, res.n_qubits, res.alpha)
    return measure_probabilities(simulate(circuit))


def step_quantum(res: QuantumReservoir, r_prev, u_scaled) -> np.ndarray:
    """One full quantum reservoir update, leaky integration included."""
    r_hat = quantum_activation(res, r_prev, u_scaled)
    return leaky_update(r_prev, r_hat, res.leak_rate)


def advance(res, r_prev, u_scaled) -> np.ndarray:
    """Next reservoir state for either reservoir kind."""
    if isinstance(res, QuantumReservoir):
        return step_quantum(res, r_prev, u_scaled)
    return leaky_update(r_prev, step_classical(res, r_prev, u_scaled), res.leak_rate)


def _quantum_activations_open_loop(res: QuantumReservoir, inputs: np.ndarray) -> np.ndarray:
    """``r_hat`` for every input row of a non-recurrent ansatz in batched chunks."""
    steps = inputs.shape[0]
    per_row = res.n_reservoir * int(np.prod(inputs.shape[1:-1], dtype=int))
    chunk = res.chunk_size or max(1, 2**20 // per_row)
    out = np.empty(inputs.shape[:-1] + (res.n_reservoir,))
    for start in range(0, steps, chunk):
        out[start : start + chunk] = quantum_activation(res, None, inputs[start : start + chunk])
    return out


def harvest_states(res, inputs, r0=None) -> np.ndarray:
    """Open-loop states ``r_1..r_T`` driven by ``inputs`` of shape ``(T, ..., N_u)``.

    Returns an array of shape ``(T, ..., N_r)``; extra axes between time and
    features index independent series.
    """
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim < 2:
        raise RejectedInputError(f"inputs must be (T, N_u), got shape {inputs.shape}")
    steps = inputs.shape[0]
    batch = inputs.shape[1:-1]
    r = initial_state(res, batch) if r0 is None else np.array(r0, dtype=float)
    states = np.empty((steps,) + batch + (res.n_reservoir,))
    eps = res.leak_rate

    if isinstance(res, QuantumReservoir) and not res.ansatz.recurrent:
        # r_hat depends on the input only, so the circuits run as one batch
        r_hat = _quantum_activations_open_loop(res, inputs)
        for i in range(steps):
            r = (1.0 - eps) * r + eps * r_hat[i]
            states[i] = r
        return states

    if isinstance(res, QuantumReservoir):
        for i in range(steps):
            r = step_quantum(res, r, inputs[i])
            states[i] = r
        return states

    drive = inputs @ res.W_in.T
    WT = res.W.T
    for i in range(steps):
        r = (1.0 - eps) * r + eps * np.tanh(drive[i] + r @ WT)
        states[i] = r
    return states


def harvest(res, inputs, n_washout: int, r0=None) -> np.ndarray:
    """Bias-augmented state matrix ``R`` of shape ``(N_r + 1, T - n_washout)``."""
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim != 2:
        raise RejectedInputError(f"inputs must be (T, N_u), got shape {inputs.shape}")
    steps = inputs.shape[0]
    if not 0 <= n_washout < steps:
        raise LengthError(f"segment of {steps} steps is too short for a washout of {n_washout}")
    states = harvest_states(res, inputs, r0)[n_washout:]
    return np.vstack([states.T, np.ones((1, states.shape[0]))])


# -- readout --------------------------------------------------------------------


def solve_ridge(gram: np.ndarray, cross: np.ndarray, beta: float) -> np.ndarray:
    """Solve ``(gram + beta I) W = cross`` by Cholesky."""
    A = gram + beta * np.eye(gram.shape[0])
    try:
        factor = scipy.linalg.cho_factor(A, lower=False, check_finite=True)
        W = scipy.linalg.cho_solve(factor, cross)
    except (np.linalg.LinAlgError, ValueError) as exc:
        if beta <= 0:
            raise SolverError(
                "ridge system is singular or indefinite at beta=0; use a positive beta"
            ) from exc
        # rounding made A numerically indefinite: fall back to a symmetric solver
        with warnings.catch_warnings():
            # accuracy is judged by the residual check below
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            W = scipy.linalg.solve(A, cross, assume_a="sym")
    resid = np.linalg.norm(A @ W - cross)
    scale = np.linalg.norm(A) * np.linalg.norm(W) + np.linalg.norm(cross)
    if not np.isfinite(resid) or (scale > 0 and resid > 1e-8 * scale):
        raise SolverError(f"ridge solve is inaccurate (relative residual {resid / scale:.2e}); increase beta")
    return W


def train_readout(R, U_d, beta: float) -> TrainedReadout:
    """Ridge regression ``(R R^T + beta I) W_out = R U_d^T``.

    ``R`` is ``(N_r + 1, K)`` and ``U_d`` is ``(N_u, K)``.
    """
    R = np.asarray(R, dtype=float)
    U_d = np.asarray(U_d, dtype=float)
    if U_d.ndim == 1:
        U_d = U_d[None, :]
    if R.shape[1] != U_d.shape[1]:
        raise RejectedInputError(f"R has {R.shape[1]} columns but U_d has {U_d.shape[1]}")
    if beta < 0:
        raise RejectedInputError(f"beta must be non-negative, got {beta}")
    return TrainedReadout(solve_ridge(R @ R.T, R @ U_d.T, beta), beta)


def predict_step(r, W_out, scaler=None) -> np.ndarray:
    """Readout ``[r, 1] W_out``; mapped back to physical units when ``scaler`` is given."""
    W_out = W_out.W_out if isinstance(W_out, TrainedReadout) else np.asarray(W_out)
    r = np.asarray(r, dtype=float)
    if r.shape[-1] != W_out.shape[0] - 1:
        raise RejectedInputError(
            f"state has {r.shape[-1]} entries but W_out expects {W_out.shape[0] - 1}"
        )
    u = r @ W_out[:-1] + W_out[-1]
    return u if scaler is None else scaler.inverse_transform(u)


def closed_loop(res, readout, r_init, steps: int, scaler=None) -> np.ndarray:
    """Autonomous forecast of ``steps`` samples starting from state ``r_init``.

    Each prediction is fed back as the next input.  Returns shape
    ``(steps, ..., N_u)``, in physical units when ``scaler`` is given.
    """
    W_out = readout.W_out if isinstance(readout, TrainedReadout) else np.asarray(readout)
    r = np.array(r_init, dtype=float)
    out = np.empty((steps,) + r.shape[:-1] + (W_out.shape[1],))
    for i in range(steps):
        u = predict_step(r, W_out)
        if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > DIVERGENCE_BOUND:
            raise DivergenceError(f"closed-loop prediction diverged at step {i}", step=i)
        out[i] = u
        r = advance(res, r, u)
    return out if scaler is None else scaler.inverse_transform(out)
