import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfqrc.exceptions import RejectedInputError
from rfqrc.quantum import (
    ANSATZE,
    CNOT,
    RY,
    Circuit,
    FeatureMapKind,
    Statevector,
    apply_gate,
    build_feature_map,
    build_step_circuit,
    circuit_depth,
    dump_circuit,
    measure_probabilities,
    parse_circuit,
    run_circuit,
    simulate,
)

# -- dense reference simulator ---------------------------------------------------


def _dense_ry(n, q, theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    mats = [np.eye(2)] * n
    mats[q] = np.array([[c, -s], [s, c]])
    out = np.eye(1)
    for m in mats:
        out = np.kron(out, m)
    return out


def _dense_cnot(n, control, target):
    dim = 2**n
    U = np.zeros((dim, dim))
    for i in range(dim):
        bits = [(i >> (n - 1 - k)) & 1 for k in range(n)]
        if bits[control]:
            bits[target] ^= 1
        j = int("".join(map(str, bits)), 2)
        U[j, i] = 1.0
    return U


def _dense_run(circ):
    psi = np.zeros(2**circ.n)
    psi[0] = 1.0
    for g in circ.gates:
        U = _dense_ry(circ.n, g.qubit, g.angle) if isinstance(g, RY) else _dense_cnot(circ.n, g.control, g.target)
        psi = U @ psi
    return psi


def _random_circuit(rng, n, n_gates):
    gates = []
    for _ in range(n_gates):
        if n > 1 and rng.random() < 0.4:
            c, t = rng.choice(n, size=2, replace=False)
            gates.append(CNOT(int(c), int(t)))
        else:
            gates.append(RY(int(rng.integers(n)), float(rng.uniform(0, 4 * np.pi))))
    return Circuit(n, gates)


def test_simulator_matches_dense_unitaries_on_100_random_circuits():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        circ = _random_circuit(rng, n, int(rng.integers(0, 25)))
        np.testing.assert_allclose(simulate(circ), _dense_run(circ), atol=1e-10)


def test_step_circuits_match_dense_unitaries():
    rng = np.random.default_rng(1)
    for name in ANSATZE:
        n = 3
        r = rng.random(2**n)
        circ = build_step_circuit(name, r, rng.random(2), n, rng.uniform(0, 4 * np.pi, n))
        np.testing.assert_allclose(simulate(circ), _dense_run(circ), atol=1e-10)


# -- gate examples ----------------------------------------------------------------


def test_ry_zero_is_identity():
    np.testing.assert_array_equal(simulate(Circuit(1, [RY(0, 0.0)])), [1.0, 0.0])


def test_ry_pi_flips():
    np.testing.assert_allclose(simulate(Circuit(1, [RY(0, np.pi)])), [0.0, 1.0], atol=1e-15)


def test_cnot_on_10_gives_11():
    state = Statevector(np.array([0.0, 0.0, 1.0, 0.0]))
    np.testing.assert_array_equal(apply_gate(state, CNOT(0, 1)).amplitudes, [0.0, 0.0, 0.0, 1.0])


def test_cnot_leaves_control_zero_alone():
    state = Statevector(np.array([0.0, 1.0, 0.0, 0.0]))
    np.testing.assert_array_equal(apply_gate(state, CNOT(0, 1)).amplitudes, [0.0, 1.0, 0.0, 0.0])


def test_bell_state_probabilities():
    probs = measure_probabilities(run_circuit(Circuit(2, [RY(0, np.pi / 2), CNOT(0, 1)])))
    np.testing.assert_allclose(probs, [0.5, 0.0, 0.0, 0.5], atol=1e-15)


def test_apply_gate_does_not_mutate_input():
    state = Statevector.zero(2)
    apply_gate(state, RY(0, 1.0))
    np.testing.assert_array_equal(state.amplitudes, [1.0, 0.0, 0.0, 0.0])


def test_invalid_gates_rejected():
    with pytest.raises(RejectedInputError):
        CNOT(1, 1)
    with pytest.raises(RejectedInputError):
        Circuit(2, [RY(2, 0.1)])
    with pytest.raises(RejectedInputError):
        Statevector(np.ones(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 30), st.integers(0, 2**31 - 1))
def test_norm_and_probabilities_sum_to_one(n, n_gates, seed):
    circ = _random_circuit(np.random.default_rng(seed), n, n_gates)
    state = run_circuit(circ)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)
    assert state.probabilities().sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(state.probabilities() >= 0)


def test_batched_angles_match_individual_runs():
    thetas = np.array([0.1, 1.3, 2.9])
    batched = simulate(Circuit(2, [RY(0, thetas), CNOT(0, 1), RY(1, 0.4)]))
    for b, t in enumerate(thetas):
        np.testing.assert_allclose(batched[b], simulate(Circuit(2, [RY(0, t), CNOT(0, 1), RY(1, 0.4)])))


# -- depth and structure ------------------------------------------------------------


def test_depth_examples():
    assert circuit_depth(Circuit(3)) == 0
    assert circuit_depth(Circuit(4, [RY(q, 0.1) for q in range(4)])) == 1
    assert circuit_depth(Circuit(5, [CNOT(q, q + 1) for q in range(4)])) == 4


def test_linear_map_gate_counts():
    circ = build_feature_map(FeatureMapKind.LINEAR, [0.1] * 4, 4)
    assert circ.count(RY) == 4 and circ.count(CNOT) == 3
    assert [(g.control, g.target) for g in circ.gates if isinstance(g, CNOT)] == [(0, 1), (1, 2), (2, 3)]


def test_full_symmetric_map_uses_brick_pattern():
    circ = build_feature_map(FeatureMapKind.FULL_SYMMETRIC, [0.1] * 4, 4)
    assert circ.count(RY) == 8 and circ.count(CNOT) == 3
    cx = [(g.control, g.target) for g in circ.gates if isinstance(g, CNOT)]
    assert cx == [(0, 1), (2, 3), (1, 2)]


@pytest.mark.parametrize("n", [2, 3, 4, 7, 10])
def test_full_map_is_three_layers_deep(n):
    circ = build_feature_map(FeatureMapKind.FULL, [0.3] * n, n)
    assert circ.depth == (2 if n == 2 else 3)


def test_product_map_has_no_entanglers():
    circ = build_feature_map(FeatureMapKind.PRODUCT, [0.2, 0.5, 0.9], 3)
    assert circ.count(CNOT) == 0 and circ.count(RY) == 6


def test_feature_map_angle_count_checked():
    with pytest.raises(RejectedInputError):
        build_feature_map("linear", [0.1, 0.2], 3)


def test_c1_encodes_reservoir_in_ceil_layers():
    n = 4
    circ = build_step_circuit("C1", np.full(16, 0.5), np.zeros(3), n, np.zeros(n))
    # 4 reservoir layers of Linear (4 RY + 3 CX) + Full (4 RY + 3 CX) + FullSymmetric (8 RY + 3 CX)
    assert circ.count(RY) == 4 * 4 + 4 + 8
    assert circ.count(CNOT) == 4 * 3 + 3 + 3


def test_c4_gate_count_independent_of_reservoir_size():
    counts = {n: len(build_step_circuit("C4", None, np.zeros(10), n, np.zeros(n))) for n in (4, 6, 8)}
    # two Full layers and one FullSymmetric layer, each linear in n
    for n, c in counts.items():
        assert c == 2 * (n + n - 1) + (2 * n + n - 1)


@pytest.mark.parametrize("n", range(4, 12))
def test_c4_depth_is_constant(n):
    assert build_step_circuit("C4", None, np.zeros(10), n, np.zeros(n)).depth == 10


def test_c3_and_c5_entangler_counts():
    n = 5
    c3 = build_step_circuit("C3", None, np.zeros(3), n, np.zeros(n))
    c5 = build_step_circuit("C5", None, np.zeros(3), n, np.zeros(n))
    assert c3.count(CNOT) == 3 * (n - 1)
    assert c5.count(CNOT) == n - 1


def test_input_tiling_is_cyclic_across_repetitions():
    u = np.array([0.1, 0.2, 0.3])
    circ = build_step_circuit("C5", None, u, 4, np.zeros(4))
    first_sub_layer = [g.angle for g in circ.gates[:4]]
    second_rep = [g.angle for g in circ.gates[8:12]]
    np.testing.assert_allclose(first_sub_layer, 2 * np.pi * u[[0, 1, 2, 0]])
    np.testing.assert_allclose(second_rep, 2 * np.pi * u[[1, 2, 0, 1]])


def test_recurrent_ansatz_requires_state():
    with pytest.raises(RejectedInputError):
        build_step_circuit("C2", None, np.zeros(3), 3, np.zeros(3))


def test_unknown_ansatz_rejected():
    with pytest.raises(RejectedInputError):
        build_step_circuit("C9", None, np.zeros(3), 3, np.zeros(3))


# -- text dump ------------------------------------------------------------------------


def test_dump_parse_round_trip_is_exact():
    circ = _random_circuit(np.random.default_rng(5), 4, 30)
    back = parse_circuit(dump_circuit(circ), 4)
    assert back.gates == circ.gates
    np.testing.assert_array_equal(simulate(back), simulate(circ))


def test_parse_rejects_garbage():
    with pytest.raises(RejectedInputError, match="line 2"):
        parse_circuit("ry q0 0.5\nswap q0 q1\n", 2)
