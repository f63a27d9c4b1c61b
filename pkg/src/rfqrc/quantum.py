"""Noise-free statevector emulation of RY/CNOT circuits and the QRC ansatze.

Qubit ``q`` is axis ``q`` of the ``(2,) * n`` tensor view of the amplitudes,
so ``|q0 q1 ... >`` reads most-significant bit first and ``|10>`` is index 2.

Gates may carry batched angles: an :class:`RY` whose ``angle`` is an array
of shape ``(B,)`` acts on amplitudes of shape ``(B, 2**n)``.  The reservoir
uses this to run one circuit template over many time steps at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union

import numpy as np

from .exceptions import RejectedInputError

__all__ = [
    "RY",
    "CNOT",
    "Circuit",
    "Statevector",
    "FeatureMapKind",
    "AnsatzConfig",
    "ANSATZE",
    "apply_gate",
    "run_circuit",
    "simulate",
    "measure_probabilities",
    "build_feature_map",
    "build_step_circuit",
    "circuit_depth",
    "dump_circuit",
    "parse_circuit",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class RY:
    qubit: int
    angle: Union[float, np.ndarray]

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise RejectedInputError(f"CNOT control and target coincide (qubit {self.control})")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


Gate = Union[RY, CNOT]


def _check_gate(gate, n: int):
    for q in gate.qubits:
        if not 0 <= q < n:
            raise RejectedInputError(f"{gate} addresses qubit {q} outside 0..{n - 1}")


@dataclass
class Circuit:
    n: int
    gates: list = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1:
            raise RejectedInputError(f"a circuit needs at least one qubit, got n={self.n}")
        self.gates = list(self.gates)
        for g in self.gates:
            _check_gate(g, self.n)

    def append(self, gate) -> "Circuit":
        _check_gate(gate, self.n)
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n != self.n:
            raise RejectedInputError(f"cannot concatenate circuits on {self.n} and {other.n} qubits")
        return Circuit(self.n, self.gates + other.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def count(self, kind) -> int:
        return sum(isinstance(g, kind) for g in self.gates)

    @property
    def depth(self) -> int:
        return circuit_depth(self)


class Statevector:
    """Amplitudes of an ``n``-qubit register, optionally with leading batch axes."""

    def __init__(self, amplitudes, n: int | None = None):
        amps = np.asarray(amplitudes)
        if not np.iscomplexobj(amps):
            amps = amps.astype(float)
        size = amps.shape[-1] if amps.ndim else 0
        if n is None:
            n = size.bit_length() - 1
        if n < 1 or size != 2**n:
            raise RejectedInputError(f"need 2**n amplitudes with n >= 1, got {size}")
        self.n = n
        self.amplitudes = amps

    @classmethod
    def zero(cls, n: int, batch: tuple[int, ...] = ()) -> "Statevector":
        if n < 1:
            raise RejectedInputError(f"n must be >= 1, got {n}")
        amps = np.zeros(batch + (2**n,))
        amps[..., 0] = 1.0
        return cls(amps, n)

    def norm(self):
        return np.sum(np.abs(self.amplitudes) ** 2, axis=-1)

    def probabilities(self) -> np.ndarray:
        return measure_probabilities(self)

    def __repr__(self):
        return f"Statevector(n={self.n}, shape={self.amplitudes.shape})"


def _ry_inplace(amps: np.ndarray, n: int, qubit: int, angle) -> np.ndarray:
    lead = amps.shape[:-1]
    view = amps.reshape(lead + (2**qubit, 2, 2 ** (n - qubit - 1)))
    angle = np.asarray(angle, dtype=float)
    # broadcast a per-batch angle over the (high, 2, low) block
    c = np.cos(angle / 2.0).reshape(angle.shape + (1, 1))
    s = np.sin(angle / 2.0).reshape(angle.shape + (1, 1))
    a0 = view[..., 0, :].copy()
    a1 = view[..., 1, :]
    view[..., 0, :] = c * a0 - s * a1
    view[..., 1, :] = s * a0 + c * a1
    return amps


def _cnot_inplace(amps: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    lead = amps.shape[:-1]
    view = amps.reshape(lead + (2,) * n)
    k = len(lead)
    idx0 = [slice(None)] * (k + n)
    idx0[k + control] = 1
    idx0[k + target] = 0
    idx1 = list(idx0)
    idx1[k + target] = 1
    idx0, idx1 = tuple(idx0), tuple(idx1)
    tmp = view[idx0].copy()
    view[idx0] = view[idx1]
    view[idx1] = tmp
    return amps


def _apply_raw(amps: np.ndarray, n: int, gate) -> np.ndarray:
    if isinstance(gate, RY):
        return _ry_inplace(amps, n, gate.qubit, gate.angle)
    if isinstance(gate, CNOT):
        return _cnot_inplace(amps, n, gate.control, gate.target)
    raise RejectedInputError(f"unsupported gate {gate!r}")


def apply_gate(state: Statevector, gate) -> Statevector:
    """Return ``gate`` applied to ``state``; the input is left untouched."""
    _check_gate(gate, state.n)
    amps = np.array(state.amplitudes, copy=True)
    if isinstance(gate, RY) and np.ndim(gate.angle) and amps.ndim == 1:
        amps = np.broadcast_to(amps, np.shape(gate.angle) + amps.shape).copy()
    return Statevector(_apply_raw(amps, state.n, gate), state.n)


def _batch_shape(circuit: Circuit) -> tuple[int, ...]:
    shape: tuple[int, ...] = ()
    for g in circuit.gates:
        if isinstance(g, RY):
            shape = np.broadcast_shapes(shape, np.shape(g.angle))
    return shape


def simulate(circuit: Circuit) -> np.ndarray:
    """Amplitudes of ``circuit`` applied to ``|0...0>`` (batched if angles are)."""
    amps = Statevector.zero(circuit.n, _batch_shape(circuit)).amplitudes
    for g in circuit.gates:
        _apply_raw(amps, circuit.n, g)
    return amps


def run_circuit(circuit: Circuit) -> Statevector:
    """Apply the gates of ``circuit`` in order to the ground state."""
    return Statevector(simulate(circuit), circuit.n)


def measure_probabilities(state) -> np.ndarray:
    """Exact computational-basis probabilities ``|a_i|**2`` (no shot noise)."""
    amps = state.amplitudes if isinstance(state, Statevector) else np.asarray(state)
    return np.abs(amps) ** 2 if np.iscomplexobj(amps) else amps * amps


def circuit_depth(circuit: Circuit) -> int:
    """Number of layers when each gate is placed right after its qubits' last use."""
    level = [0] * circuit.n
    depth = 0
    for g in circuit.gates:
        layer = max(level[q] for q in g.qubits) + 1
        for q in g.qubits:
            level[q] = layer
        depth = max(depth, layer)
    return depth


# -- feature maps -----------------------------------------------------------


class FeatureMapKind(str, Enum):
    LINEAR = "linear"
    PRODUCT = "product"
    FULL = "full"
    FULL_SYMMETRIC = "full_symmetric"


def _brick_cnots(n: int) -> list[CNOT]:
    """Every nearest-neighbour pair, even bonds first and odd bonds second.

    Both groups act on disjoint pairs, so the pattern is two CNOT layers deep
    for any ``n``.
    """
    even = [CNOT(i, i + 1) for i in range(0, n - 1, 2)]
    odd = [CNOT(i, i + 1) for i in range(1, n - 1, 2)]
    return even + odd


def build_feature_map(kind, angles, n: int) -> Circuit:
    """One encoding layer of ``kind`` with one rotation angle per qubit.

    ``angles`` has ``n`` entries, each a float or a batch array.
    """
    kind = FeatureMapKind(kind)
    angles = list(angles)
    if len(angles) != n:
        raise RejectedInputError(f"{kind.value} feature map needs {n} angles, got {len(angles)}")
    rot = [RY(q, a) for q, a in enumerate(angles)]
    if kind is FeatureMapKind.LINEAR:
        gates = rot + [CNOT(q, q + 1) for q in range(n - 1)]
    elif kind is FeatureMapKind.FULL:
        gates = rot + _brick_cnots(n)
    elif kind is FeatureMapKind.FULL_SYMMETRIC:
        gates = rot + _brick_cnots(n) + [RY(q, a) for q, a in enumerate(angles)]
    else:
        # second sub-layer gives each qubit a quadratic data dependence
        gates = rot + [RY(q, np.square(a) / TWO_PI) for q, a in enumerate(angles)]
    return Circuit(n, gates)


@dataclass(frozen=True)
class AnsatzConfig:
    """Assignment of feature maps to the reservoir (P), input (Phi) and variation (V) blocks."""

    name: str
    reservoir_map: FeatureMapKind | None
    input_map: FeatureMapKind
    variation_map: FeatureMapKind
    input_reps: int

    @property
    def recurrent(self) -> bool:
        return self.reservoir_map is not None


_L, _P, _F, _FS = (
    FeatureMapKind.LINEAR,
    FeatureMapKind.PRODUCT,
    FeatureMapKind.FULL,
    FeatureMapKind.FULL_SYMMETRIC,
)

ANSATZE = {
    "C1": AnsatzConfig("C1", _L, _F, _FS, 1),
    "C2": AnsatzConfig("C2", _L, _L, _L, 1),
    "C3": AnsatzConfig("C3", None, _L, _L, 2),
    "C4": AnsatzConfig("C4", None, _F, _FS, 2),
    "C5": AnsatzConfig("C5", None, _P, _L, 2),
}


def get_ansatz(cfg) -> AnsatzConfig:
    if isinstance(cfg, AnsatzConfig):
        return cfg
    try:
        return ANSATZE[str(cfg).upper()]
    except KeyError:
        raise RejectedInputError(f"unknown ansatz {cfg!r}; expected one of {sorted(ANSATZE)}") from None


def reservoir_layers(n: int) -> int:
    """Encoding layers needed to load ``2**n`` reservoir values on ``n`` qubits."""
    return math.ceil(2**n / n)


def build_step_circuit(cfg, r, u, n: int, alpha) -> Circuit:
    """Circuit ``V(alpha) Phi(u)^reps P(r)`` for one reservoir update.

    ``r`` (length ``2**n``, values in ``[0, 1]``) is only read by recurrent
    configurations; pass ``None`` otherwise.  ``u`` holds the scaled input,
    either ``(N_u,)`` or a batch ``(B, N_u)``.  Data values become angles via
    ``2 pi * value``; ``alpha`` are the raw variation angles.
    """
    cfg = get_ansatz(cfg)
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (n,):
        raise RejectedInputError(f"alpha must have {n} angles, got shape {alpha.shape}")
    circ = Circuit(n)

    if cfg.recurrent:
        if r is None:
            raise RejectedInputError(f"{cfg.name} encodes the reservoir state; r is required")
        r = np.asarray(r, dtype=float)
        if r.shape[-1] != 2**n:
            raise RejectedInputError(f"r must have 2**n = {2**n} entries, got {r.shape[-1]}")
        layers = reservoir_layers(n)
        pad = layers * n - 2**n
        theta = TWO_PI * r
        if pad:
            theta = np.concatenate([theta, np.zeros(theta.shape[:-1] + (pad,))], axis=-1)
        for layer in range(layers):
            block = theta[..., layer * n : (layer + 1) * n]
            circ = circ + build_feature_map(cfg.reservoir_map, list(np.moveaxis(block, -1, 0)), n)

    u = np.asarray(u, dtype=float)
    n_u = u.shape[-1]
    theta_u = TWO_PI * u
    for rep in range(cfg.input_reps):
        # cyclic tiling continues across repetitions
        cols = [(rep * n + j) % n_u for j in range(n)]
        circ = circ + build_feature_map(cfg.input_map, [theta_u[..., c] for c in cols], n)

    return circ + build_feature_map(cfg.variation_map, list(alpha), n)


# -- text dump ----------------------------------------------------------------


def dump_circuit(circuit: Circuit) -> str:
    """Plain-text gate list: ``ry q<i> <angle>`` and ``cx q<c> q<t>`` lines."""
    lines = []
    for g in circuit.gates:
        if isinstance(g, RY):
            if np.ndim(g.angle):
                raise RejectedInputError("cannot dump a circuit with batched angles")
            lines.append(f"ry q{g.qubit} {float(g.angle):.17g}")
        else:
            lines.append(f"cx q{g.control} q{g.target}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_circuit(text: str, n: int) -> Circuit:
    gates = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        try:
            if parts[0] == "ry" and len(parts) == 3:
                gates.append(RY(int(parts[1].lstrip("q")), float(parts[2])))
            elif parts[0] == "cx" and len(parts) == 3:
                gates.append(CNOT(int(parts[1].lstrip("q")), int(parts[2].lstrip("q"))))
            else:
                raise ValueError(line)
        except ValueError:
            raise RejectedInputError(f"line {lineno}: cannot parse {line!r}") from None
    return Circuit(n, gates)
