import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rfqrc.dynamics import (
    MFE,
    Lorenz63,
    Lorenz96,
    RangeScaler,
    Trajectory,
    generate_mfe_ensemble,
    integrate,
    integrate_ensemble,
    kinetic_energy,
    load_trajectory,
    lt_to_steps,
    rescale_range,
    rk4_step,
    save_trajectory,
    split_dataset,
    system_rhs,
)
from rfqrc.exceptions import (
    DegenerateRangeError,
    DivergenceError,
    EmptyEnsembleError,
    LengthError,
    NumericOverflowError,
    RejectedInputError,
)

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


# -- right-hand sides ----------------------------------------------------------


def test_lorenz63_origin_is_fixed():
    np.testing.assert_array_equal(Lorenz63().rhs(np.zeros(3)), np.zeros(3))


def test_lorenz63_hand_value():
    # sigma*(1-1), 1*(28-1)-1, 1*1-(8/3)*1
    np.testing.assert_allclose(Lorenz63().rhs(np.ones(3)), [0.0, 26.0, -5.0 / 3.0], rtol=0, atol=1e-14)


def test_lorenz96_uniform_forcing_is_fixed():
    np.testing.assert_array_equal(Lorenz96().rhs(np.full(10, 8.0)), np.zeros(10))


def test_lorenz96_hand_value_periodic_stencil():
    # dx_i = (x_{i+1} - x_{i-2}) x_{i-1} - x_i + F on x = (1, 2, 3, 4)
    np.testing.assert_allclose(Lorenz96(m=4).rhs(np.array([1.0, 2.0, 3.0, 4.0])), [3.0, 5.0, 11.0, 1.0])


def test_lorenz96_needs_four_components():
    with pytest.raises(RejectedInputError):
        Lorenz96(m=3)


def test_mfe_laminar_state_is_stationary():
    mfe = MFE()
    np.testing.assert_allclose(mfe.rhs(mfe.laminar_state()), np.zeros(9), atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(arrays(float, 9, elements=finite))
def test_mfe_nonlinear_terms_conserve_energy(a):
    # the quadratic terms only move energy between modes
    mfe = MFE()
    assert abs(a @ mfe.nonlinear(a)) <= 1e-12 * (1.0 + np.sum(a * a))


def _mfe_reference(a, re=400.0, lx=4 * np.pi, lz=2 * np.pi):
    """Nine-mode shear-flow equations written out term by term."""
    al, be, ga = 2 * np.pi / lx, np.pi / 2, 2 * np.pi / lz
    kag, kbg = np.hypot(al, ga), np.hypot(be, ga)
    kabg = np.sqrt(al**2 + be**2 + ga**2)
    s6, s32 = np.sqrt(6.0), np.sqrt(1.5)
    a1, a2, a3, a4, a5, a6, a7, a8, a9 = a
    return np.array([
        be**2 / re * (1 - a1) - s32 * be * ga / kabg * a6 * a8 + s32 * be * ga / kbg * a2 * a3,
        -(4 * be**2 / 3 + ga**2) / re * a2
        + 5 * np.sqrt(2) * ga**2 / (3 * np.sqrt(3) * kag) * a4 * a6
        - ga**2 / (s6 * kag) * a5 * a7
        - al * be * ga / (s6 * kag * kabg) * a5 * a8
        - s32 * be * ga / kbg * (a1 * a3 + a3 * a9),
        -(be**2 + ga**2) / re * a3
        + 2 * al * be * ga / (s6 * kag * kbg) * (a4 * a7 + a5 * a6)
        + (be**2 * (3 * al**2 + ga**2) - 3 * ga**2 * (al**2 + ga**2)) / (s6 * kag * kbg * kabg) * a4 * a8,
        -(3 * al**2 + 4 * be**2) / (3 * re) * a4
        - al / s6 * a1 * a5
        - 10 * al**2 / (3 * s6 * kag) * a2 * a6
        - s32 * al * be * ga / (kag * kbg) * a3 * a7
        - s32 * al**2 * be**2 / (kag * kbg * kabg) * a3 * a8
        - al / s6 * a5 * a9,
        -(al**2 + be**2) / re * a5
        + al / s6 * a1 * a4
        + al**2 / (s6 * kag) * a2 * a7
        - al * be * ga / (s6 * kag * kabg) * a2 * a8
        + al / s6 * a4 * a9
        + 2 * al * be * ga / (s6 * kag * kbg) * a3 * a6,
        -(3 * al**2 + 4 * be**2 + 3 * ga**2) / (3 * re) * a6
        + al / s6 * a1 * a7
        + s32 * be * ga / kabg * a1 * a8
        + 10 * (al**2 - ga**2) / (3 * s6 * kag) * a2 * a4
        - 2 * np.sqrt(2 / 3) * al * be * ga / (kag * kbg) * a3 * a5
        + al / s6 * a7 * a9
        + s32 * be * ga / kabg * a8 * a9,
        -(al**2 + be**2 + ga**2) / re * a7
        - al / s6 * (a1 * a6 + a6 * a9)
        + (ga**2 - al**2) / (s6 * kag) * a2 * a5
        + al * be * ga / (s6 * kag * kbg) * a3 * a4,
        -(al**2 + be**2 + ga**2) / re * a8
        + 2 * al * be * ga / (s6 * kag * kabg) * a2 * a5
        + ga**2 * (3 * al**2 - be**2 + 3 * ga**2) / (s6 * kag * kbg * kabg) * a3 * a4,
        -9 * be**2 / re * a9 + s32 * be * ga / kbg * a2 * a3 - s32 * be * ga / kabg * a6 * a8,
    ])


@settings(max_examples=50, deadline=None)
@given(arrays(float, 9, elements=finite))
def test_mfe_matches_term_by_term_reference(a):
    np.testing.assert_allclose(MFE().rhs(a), _mfe_reference(a), rtol=1e-12, atol=1e-12 * (1 + np.sum(a * a)))


def test_rhs_vectorised_over_leading_axes():
    x = np.random.default_rng(0).normal(size=(4, 5, 3))
    batched = Lorenz63().rhs(x)
    np.testing.assert_allclose(batched[2, 3], Lorenz63().rhs(x[2, 3]))


def test_system_rhs_checks_dimension():
    with pytest.raises(RejectedInputError):
        system_rhs(Lorenz63(), np.zeros(4))


# -- RK4 -----------------------------------------------------------------------


def test_rk4_taylor_truncation_on_exponential():
    x1 = rk4_step(lambda x: x, np.array([1.0]), 0.1)[0]
    taylor = 1 + 0.1 + 0.1**2 / 2 + 0.1**3 / 6 + 0.1**4 / 24
    assert x1 == pytest.approx(taylor, abs=1e-15)
    assert abs(x1 - np.exp(0.1)) < 1e-7


def test_rk4_local_error_is_fifth_order():
    errs = [abs(rk4_step(lambda x: x, np.array([1.0]), h)[0] - np.exp(h)) for h in (0.1, 0.05)]
    assert 28 < errs[0] / errs[1] < 36


def test_rk4_global_convergence_factor_on_lorenz63():
    from scipy.integrate import solve_ivp

    l63, x0, t = Lorenz63(), np.array([1.0, 1.0, 1.0]), 0.5
    ref = solve_ivp(lambda _, x: l63.rhs(x), (0, t), x0, method="DOP853", rtol=1e-13, atol=1e-13).y[:, -1]
    errs = [np.linalg.norm(integrate(l63, x0, int(round(t / dt)), dt=dt).data[-1] - ref) for dt in (0.01, 0.005)]
    assert 14 <= errs[0] / errs[1] <= 18


def test_rk4_fixed_point_stays_put():
    mfe = MFE()
    np.testing.assert_allclose(rk4_step(mfe, mfe.laminar_state(), 0.25), mfe.laminar_state(), atol=1e-14)


def test_rk4_overflow_names_the_stage():
    with pytest.raises(NumericOverflowError, match="k"):
        rk4_step(lambda x: x**8, np.array([1e50]), 1.0)


def test_integrate_zero_steps():
    traj = integrate(Lorenz63(), [1.0, 2.0, 3.0], 0)
    assert traj.data.shape == (1, 3)
    np.testing.assert_array_equal(traj.data[0], [1.0, 2.0, 3.0])


def test_lorenz63_stays_on_bounded_attractor():
    traj = integrate(Lorenz63(), [1.0, 1.0, 1.0], 2222, dt=0.01)
    assert traj.data.shape == (2223, 3)
    assert np.max(np.abs(traj.data[:, 2])) < 60


def test_lorenz96_remains_finite_for_200_lt():
    sys96 = Lorenz96()
    x0 = np.full(10, 8.0)
    x0[0] += 0.01
    traj = integrate(sys96, x0, lt_to_steps(200, 1.2, 0.01))
    assert np.all(np.isfinite(traj.data))
    assert np.max(np.abs(traj.data)) < 30


def test_integrate_is_deterministic_and_read_only():
    a = integrate(Lorenz63(), [1.0, 1.0, 1.0], 100)
    b = integrate(Lorenz63(), [1.0, 1.0, 1.0], 100)
    np.testing.assert_array_equal(a.data, b.data)
    with pytest.raises(ValueError):
        a.data[0, 0] = 5.0


def test_integrate_ensemble_matches_single_runs():
    x0 = np.array([[1.0, 1.0, 1.0], [2.0, 0.5, 20.0]])
    ens = integrate_ensemble(Lorenz63(), x0, 50, dt=0.01)
    assert ens.shape == (51, 2, 3)
    np.testing.assert_allclose(ens[:, 1], integrate(Lorenz63(), x0[1], 50, dt=0.01).data, rtol=1e-13)


def test_integrate_ensemble_reports_divergence_step():
    with pytest.raises(DivergenceError) as info:
        integrate_ensemble(lambda x: x, np.array([[1.0]]), 100, dt=1.0)
    growth = 1 + 1 + 1 / 2 + 1 / 6 + 1 / 24  # RK4 amplification of x' = x at dt = 1
    assert info.value.step == int(np.ceil(np.log(1e6) / np.log(growth)))


def test_trajectory_rejects_nonfinite():
    with pytest.raises(RejectedInputError):
        Trajectory(np.array([[np.nan, 1.0]]), 0.01, 0.9)


# -- scaling, energy, splitting -------------------------------------------------


def test_scaler_examples():
    s = RangeScaler().fit(np.array([[-2.0, 0.0], [0.0, 0.5], [2.0, 1.0]]))
    out = s.transform(np.array([[-2.0, 0.0], [0.0, 0.5], [2.0, 1.0]]))
    np.testing.assert_allclose(out[:, 0], [0.0, 0.5, 1.0])
    np.testing.assert_allclose(out[:, 1], [0.0, 0.5, 1.0])


def test_scaler_rejects_constant_component():
    with pytest.raises(DegenerateRangeError):
        RangeScaler().fit(np.array([[1.0, 0.0], [1.0, 1.0]]))


def test_rescale_round_trip_on_lorenz63():
    traj = integrate(Lorenz63(), [1.0, 1.0, 1.0], 1000)
    scaled, scaler = rescale_range(traj)
    assert scaled.data.min() == 0.0 and scaled.data.max() == 1.0
    np.testing.assert_allclose(scaler.inverse_transform(scaled.data), traj.data, rtol=0, atol=1e-12)
    assert scaled.scaling is not None


@settings(max_examples=50, deadline=None)
@given(arrays(float, (20, 3), elements=st.floats(-1e3, 1e3)))
def test_scaler_round_trip_property(x):
    if np.any(np.ptp(x, axis=0) < 1e-6):
        return
    s = RangeScaler().fit(x)
    y = s.transform(x)
    assert np.all(y >= -1e-12) and np.all(y <= 1 + 1e-12)
    np.testing.assert_allclose(s.inverse_transform(y), x, atol=1e-9 * (1 + np.abs(x).max()))


def test_kinetic_energy_examples():
    assert kinetic_energy(np.zeros(9)) == 0.0
    assert kinetic_energy(np.eye(9)[0]) == 0.5
    assert kinetic_energy(np.full(9, 0.1)) == pytest.approx(0.045, abs=1e-15)
    np.testing.assert_allclose(kinetic_energy(np.ones((4, 9))), np.full(4, 4.5))


@pytest.mark.parametrize(
    "lt,lam,dt,steps",
    [(20, 0.9, 0.01, 2222), (20, 0.0163, 0.25, 4908), (65, 0.0163, 0.25, 15951), (0, 0.9, 0.01, 0)],
)
def test_lt_to_steps(lt, lam, dt, steps):
    assert lt_to_steps(lt, lam, dt) == steps


def test_split_dataset_segments_are_contiguous():
    traj = integrate(Lorenz63(), [1.0, 1.0, 1.0], 5000)
    wash, train, test = split_dataset(traj, 2, 20, 10)
    assert (len(wash), len(train), len(test)) == (222, 2222, 1111)
    np.testing.assert_array_equal(np.vstack([wash.data, train.data, test.data]), traj.data[: 222 + 2222 + 1111])


def test_split_dataset_zero_test_and_too_short():
    traj = integrate(Lorenz63(), [1.0, 1.0, 1.0], 3000)
    _, _, test = split_dataset(traj, 2, 20, 0)
    assert len(test) == 0
    with pytest.raises(LengthError):
        split_dataset(traj, 2, 20, 20)


# -- MFE ensemble -----------------------------------------------------------------


def test_mfe_ensemble_infinite_threshold_keeps_all():
    ens = generate_mfe_ensemble(6, length_lt=2, k_l=np.inf, seed=3)
    assert ens.retained_count == 6 and ens.discarded_count == 0
    assert all(len(s) == lt_to_steps(2, 0.0163, 0.25) for s in ens.series)


def test_mfe_ensemble_is_reproducible():
    a = generate_mfe_ensemble(4, length_lt=2, k_l=np.inf, seed=11)
    b = generate_mfe_ensemble(4, length_lt=2, k_l=np.inf, seed=11)
    for x, y in zip(a.series, b.series):
        np.testing.assert_array_equal(x.data, y.data)


def test_mfe_ensemble_all_discarded_raises():
    with pytest.raises(EmptyEnsembleError):
        generate_mfe_ensemble(3, length_lt=1, k_l=0.0, seed=0)


# -- IO ------------------------------------------------------------------------


def test_trajectory_csv_round_trip_is_bit_exact(tmp_path):
    traj = integrate(Lorenz63(), [1.0, 1.0, 1.0], 200, seed=5)
    scaled, _ = rescale_range(traj)
    path = save_trajectory(scaled, tmp_path / "l63.csv")
    back = load_trajectory(path)
    np.testing.assert_array_equal(back.data, scaled.data)
    assert back.dt == scaled.dt and back.lyapunov_exponent == scaled.lyapunov_exponent
    meta = json.loads((tmp_path / "l63.json").read_text())
    assert meta["seed"] == 5 and "min" in meta["scaling"]
