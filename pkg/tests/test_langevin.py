from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirrornoise.errors import CovarianceNotPSD, InvalidParam, RelativisticVelocity, StepTooCoarse
from mirrornoise.langevin import (
    backreaction_coefficients,
    backreaction_ratio,
    dense_covariance,
    dense_factor,
    dense_noise_intensity,
    integrate_trajectory,
    max_step,
    merge_moments,
    period_average,
    run_ensemble,
    synthesize_force_noise,
    time_grid,
    white_noise_intensity,
)
from mirrornoise.params import TWO_PI_CUBED, SystemParams

PERIOD = 2 * math.pi


def mirror(mass=1e8, power=1.0, omega_bar=1.0, phase=0.0):
    return SystemParams(
        mass=mass, omega_bar=omega_bar, L=math.pi / (4 * omega_bar), area=TWO_PI_CUBED,
        alpha_sq=power / omega_bar, phase=phase,
    )


# -- coefficients --------------------------------------------------------------


def test_mean_force_period_average():
    p = mirror(power=2.5)
    t = np.linspace(0.0, PERIOD, 4096, endpoint=False) + 17.0
    assert np.mean(backreaction_coefficients(p, t).mean_force) == pytest.approx(2 * p.power, rel=1e-12)


@given(st.floats(0.0, 1e6), st.floats(-3.0, 3.0), st.floats(1e-2, 10.0))
def test_pressure_and_damping_non_negative(t, phase, omega_bar):
    c = backreaction_coefficients(mirror(omega_bar=omega_bar, phase=phase), t)
    assert c.mean_force >= 0.0 and c.c_v >= 0.0


def test_coefficients_on_many_random_times():
    t = np.random.default_rng(5).uniform(0, 1e4, 10_000)
    c = backreaction_coefficients(mirror(), t)
    assert np.all(c.c_v >= 0) and np.all(c.mean_force >= 0)


def test_force_node():
    p = mirror()
    assert backreaction_coefficients(p, p.L).mean_force == 0.0


def test_coefficient_relations():
    p = mirror(power=3.0, omega_bar=2.0)
    t = np.linspace(0, 10, 101)
    c = backreaction_coefficients(p, t)
    th = p.omega_bar * (t - p.L) - p.phase
    np.testing.assert_allclose(c.dF_dq, -4 * p.power * p.omega_bar * np.sin(2 * th), atol=1e-12)
    np.testing.assert_allclose(c.c_q, -0.5 * c.dF_dq, atol=1e-12)
    np.testing.assert_allclose(c.c_v, c.mean_force, atol=1e-12)


# -- noise -----------------------------------------------------------------


def test_white_intensity():
    p = mirror(power=2.0, omega_bar=3.0)
    assert white_noise_intensity(p) == pytest.approx(3 * 2.0 * 3.0, rel=1e-14)


def test_zero_power_zero_noise():
    p = mirror(power=0.0)
    grid = time_grid(10 * PERIOD, max_step(p))
    assert not np.any(synthesize_force_noise(p, grid, 3))
    assert not np.any(synthesize_force_noise(p, grid, 3, mode="dense"))


def test_white_noise_centered_and_scaled():
    p = mirror()
    dt = max_step(p)
    grid = np.arange(1_000_001) * dt
    xi = synthesize_force_noise(p, grid, seed=11)
    sd = math.sqrt(white_noise_intensity(p) / dt)
    assert abs(xi.mean()) <= 4 * sd / math.sqrt(len(xi))
    assert xi.std() == pytest.approx(sd, rel=5e-3)


def test_noise_grid_checks():
    p = mirror()
    with pytest.raises(StepTooCoarse):
        synthesize_force_noise(p, np.arange(10) * PERIOD / 20, 0)
    with pytest.raises(InvalidParam):
        synthesize_force_noise(p, np.array([0.0, 0.1, 0.15]), 0)
    with pytest.raises(InvalidParam):
        synthesize_force_noise(p, np.arange(10) * 0.1, 0, mode="pink")


def test_dense_factor_reproduces_covariance():
    p = mirror()
    dt = max_step(p)
    t = (np.arange(300) + 0.5) * dt
    cov = dense_covariance(p, t, 2 * dt)
    f = dense_factor(cov)
    np.testing.assert_allclose(f @ f.T, cov, atol=1e-9 * np.abs(cov).max())


def test_dense_factor_rejects_indefinite():
    with pytest.raises(CovarianceNotPSD):
        dense_factor(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_dense_size_cap():
    p = mirror()
    with pytest.raises(InvalidParam):
        synthesize_force_noise(p, np.arange(5000) * max_step(p), 0, mode="dense")


def test_dense_intensity_limit():
    p = mirror(power=2.0)
    assert dense_noise_intensity(p) == pytest.approx(4 / 3 * white_noise_intensity(p))
    assert dense_noise_intensity(p, 0.5) == pytest.approx(8.0 * math.exp(-0.5))


def test_dense_mode_variance_matches_its_intensity():
    """Dense draws give var q ~ S t^3 / (3 m^2) with S = 4 P omega_bar exp(-omega_bar delta)."""
    p = mirror(mass=1e6)
    dt = max_step(p)
    t_end = dt * round(200 / dt)
    st_ = run_ensemble(p, t_end, dt, 4000, seed=3, noise="dense")
    expected = dense_noise_intensity(p, 2 * dt) * t_end**3 / (3 * p.mass**2)
    assert abs(st_.var_q[-1] - expected) <= 4 * st_.se_var[-1] + 0.01 * expected


# -- integration -------------------------------------------------------------


def test_zero_power_stays_at_rest():
    tr = integrate_trajectory(mirror(power=0.0), 50 * PERIOD, max_step(mirror()), noise="off")
    assert not np.any(tr.q) and not np.any(tr.v)


def test_deterministic_mean_trajectory():
    p = mirror()
    dt = max_step(p)
    t_end = dt * round(1e3 / dt)
    tr = integrate_trajectory(p, t_end, dt, noise="off", include_backreaction=False)
    avg = period_average(tr.t, tr.q, t_end, PERIOD)
    ref = period_average(tr.t, p.power * tr.t**2 / p.mass, t_end, PERIOD)
    assert avg == pytest.approx(ref, rel=0.01)


def test_bit_identical_given_seed():
    p = mirror()
    dt = max_step(p)
    a = integrate_trajectory(p, 20 * PERIOD, dt, seed=9)
    b = integrate_trajectory(p, 20 * PERIOD, dt, seed=9)
    c = integrate_trajectory(p, 20 * PERIOD, dt, seed=10)
    assert np.array_equal(a.q, b.q) and np.array_equal(a.v, b.v)
    assert not np.array_equal(a.q, c.q)
    assert np.allclose(np.diff(a.t), dt)


def test_second_order_convergence():
    p = mirror(mass=1e5)
    t_end = 100 * PERIOD
    ends = [
        integrate_trajectory(p, t_end, PERIOD / n, noise="off").q[-1] for n in (40, 80, 160)
    ]
    order = math.log2(abs(ends[0] - ends[1]) / abs(ends[1] - ends[2]))
    assert order >= 1.9


def test_step_and_velocity_guards():
    p = mirror()
    with pytest.raises(StepTooCoarse):
        integrate_trajectory(p, 10 * PERIOD, PERIOD / 39)
    with pytest.raises(RelativisticVelocity):
        integrate_trajectory(mirror(mass=1.0), 10 * PERIOD, max_step(p), noise="off")


# -- ensembles ---------------------------------------------------------------


def test_thread_count_does_not_change_results():
    p = mirror()
    dt = max_step(p)
    a = run_ensemble(p, 20 * PERIOD, dt, 2500, seed=4, chunk=600)
    b = run_ensemble(p, 20 * PERIOD, dt, 2500, seed=4, chunk=600, threads=3)
    assert np.array_equal(a.mean_q, b.mean_q) and np.array_equal(a.var_q, b.var_q)


def test_standard_errors_shrink():
    p = mirror()
    dt = max_step(p)
    a = run_ensemble(p, 20 * PERIOD, dt, 400, seed=1)
    b = run_ensemble(p, 20 * PERIOD, dt, 1600, seed=1)
    assert np.all(b.var_q >= 0)
    ratio = (b.se_mean[-1] / math.sqrt(b.var_q[-1])) / (a.se_mean[-1] / math.sqrt(a.var_q[-1]))
    assert ratio == pytest.approx(0.5, rel=1e-12)


def test_ensemble_needs_two_paths():
    with pytest.raises(InvalidParam):
        run_ensemble(mirror(), PERIOD, max_step(mirror()), 1)


@settings(max_examples=50)
@given(st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=60), st.data())
def test_moment_merge_matches_direct(values, data):
    x = np.array(values)
    cut = data.draw(st.integers(2, len(x) - 2))
    parts = [x[:cut], x[cut:]]
    stats = [(len(v), v.mean(), ((v - v.mean()) ** 2).sum()) for v in parts]
    n, mean, m2 = merge_moments(*stats)
    assert n == len(x)
    assert mean == pytest.approx(x.mean(), abs=1e-9 * (1 + np.abs(x).max()))
    assert m2 == pytest.approx(((x - x.mean()) ** 2).sum(), rel=1e-9, abs=1e-9)


def test_variance_growth_law():
    p = mirror()
    dt = max_step(p)
    for wt in (300.0, 1000.0, 3000.0):
        t_end = dt * round(wt / dt)
        st_ = run_ensemble(p, t_end, dt, 4000, seed=int(wt))
        ratio = st_.var_q[-1] / t_end**3
        expected = p.power * p.omega_bar / p.mass**2
        tol = 4 * st_.se_var[-1] / t_end**3 + 2 * expected / wt
        assert abs(ratio - expected) <= tol


# -- backreaction size -------------------------------------------------------


def test_ratio_envelope_and_trend():
    p = mirror()
    t = 1e3  # theta = P omega_bar t^2 / m = 1e-2
    r = backreaction_ratio(p, t)
    assert r <= 0.1
    assert backreaction_ratio(p, 0.0) == 0.0
    r2, r4 = backreaction_ratio(p, 2 * t), backreaction_ratio(p, 4 * t)
    assert r2 / r == pytest.approx(4.0, rel=0.05)
    assert r4 / r2 == pytest.approx(4.0, rel=0.05)


def test_backreaction_on_off_difference_bounded():
    p = mirror()
    dt = max_step(p)
    t_end = dt * round(1e3 / dt)
    on = integrate_trajectory(p, t_end, dt, noise="off")
    off = integrate_trajectory(p, t_end, dt, noise="off", include_backreaction=False)
    mean_q = p.power * t_end**2 / p.mass
    assert abs(on.q[-1] - off.q[-1]) < backreaction_ratio(p, t_end) * mean_q
