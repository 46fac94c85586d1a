import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from hotcavity.model import (
    ConfigurationError,
    ConstantCoupling,
    DegenerateAngleError,
    DriveProfile,
    GaussianRatio,
    ModeFunctionPoint,
    PhysicalParams,
    PositionCoupling,
    SinusoidalCoupling,
    TabulatedTheta,
    TimeGrid,
    Uniform,
    cavity_drive_response,
    mode_function,
    reference_theta,
    theta_of_t,
)


class FlatRatio:
    """Constant rho, for exercising theta_of_t at fixed values."""

    def __init__(self, rho, peak=1.0):
        self.rho = rho
        self._peak = peak

    @property
    def peak(self):
        return self._peak

    def ratio(self, t):
        t = np.asarray(t, dtype=float)
        return np.full_like(t, self.rho), np.zeros_like(t)


# --- mode function ---------------------------------------------------------


def test_mode_function_antinode_node_and_waist():
    lam = 1.0
    assert mode_function(ModeFunctionPoint(0, 0, lam / 4)) == pytest.approx(1.0)
    assert mode_function(ModeFunctionPoint(0, 0, 0)) == 0.0
    assert mode_function(ModeFunctionPoint(1, 1, lam / 4, w0=1)) == pytest.approx(math.exp(-2))


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_mode_function_bounded(x, y, z):
    assert abs(mode_function(ModeFunctionPoint(x, y, z))) <= 1.0


def test_mode_point_rejects_bad_waist():
    with pytest.raises(ConfigurationError):
        ModeFunctionPoint(0, 0, 0, w0=0)


# --- parameters ------------------------------------------------------------


@pytest.mark.parametrize("field,value", [("kappa", 0), ("gamma_s", -1), ("g_peak", 0),
                                         ("r_o", -1), ("omega_b", 0), ("delta_omega", 0)])
def test_params_invariants(field, value):
    with pytest.raises(ConfigurationError):
        PhysicalParams(**{field: value})


def test_cooperativity():
    assert PhysicalParams(g_peak=3, gamma_s=1).cooperativity == pytest.approx(9)
    assert PhysicalParams(gamma_s=0).cooperativity == math.inf


# --- mixing angle ----------------------------------------------------------


def test_matched_angle_fixed_values():
    a = theta_of_t(DriveProfile(FlatRatio(1.0)), ConstantCoupling(3.0), 1.0)
    assert float(a.theta) == pytest.approx(math.pi / 4)
    assert math.sin(a.theta) == pytest.approx(math.cos(a.theta))
    b = theta_of_t(DriveProfile(FlatRatio(0.0)), ConstantCoupling(3.0), 1.0)
    assert float(b.theta) == 0.0


def test_uniform_angle_fixed_value():
    a = theta_of_t(DriveProfile(FlatRatio(1.0), Uniform(3.0)), ConstantCoupling(6.0), 0.0)
    assert float(a.theta) == pytest.approx(math.atan2(3.0, 6.0))
    assert float(a.theta) == pytest.approx(math.atan(0.5), abs=1e-12)
    assert float(a.coupling) == pytest.approx(math.hypot(3, 6))


def test_uniform_degenerate_angle():
    prof = DriveProfile(FlatRatio(0.0), Uniform(3.0))
    with pytest.raises(DegenerateAngleError):
        theta_of_t(prof, SinusoidalCoupling(1.0, 1.0, 0.0), 0.0)


def test_matched_angle_ignores_coupling():
    env = GaussianRatio(3.0, 10, 4)
    t = np.linspace(0, 20, 101)
    a = theta_of_t(DriveProfile(env), SinusoidalCoupling(6.0, 0.7, 0.3), t)
    np.testing.assert_allclose(a.theta, reference_theta(DriveProfile(env), t))
    np.testing.assert_allclose(np.abs(a.coupling), 6 * np.abs(np.sin(0.7 * t + 0.3))
                               * np.sqrt(1 + np.tan(a.theta) ** 2))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.5, 5), st.floats(0.1, 2), st.floats(0, 2 * math.pi), st.floats(1, 20))
def test_uniform_theta_dot_matches_finite_difference(amp, rate, phase, omega_m):
    env = GaussianRatio(2.0, 10.0, 4.0)
    prof = DriveProfile(env, Uniform(omega_m))
    traj = SinusoidalCoupling(amp, rate, phase)
    t = np.linspace(1, 19, 41)
    h = 1e-6
    a = theta_of_t(prof, traj, t)
    # unwrap so atan2 branch jumps do not spoil the difference
    num = (np.unwrap(theta_of_t(prof, traj, t + h).theta - theta_of_t(prof, traj, t - h).theta)
           / (2 * h))
    assert np.allclose(a.theta_dot, num, atol=1e-4 * max(1, np.max(np.abs(num))))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 10), st.floats(3, 30))
def test_gaussian_rate_matches_finite_difference(rho_peak, T):
    env = GaussianRatio(rho_peak, T / 2, T / 5)
    t = np.linspace(0, T, 37)
    h = 1e-6 * T
    rho, drho = env.ratio(t)
    num = (env.ratio(t + h)[0] - env.ratio(t - h)[0]) / (2 * h)
    np.testing.assert_allclose(drho, num, atol=1e-6 * rho_peak)


def test_gaussian_ramps_from_zero():
    env = GaussianRatio(3.0, 10.0, 4.0)
    assert env.ratio(0.0)[0] < 3.0 * 2e-3
    with pytest.raises(ConfigurationError):
        GaussianRatio(3.0, 5.0, 4.0)


def test_tabulated_theta_round_trip():
    t = np.linspace(0, 10, 201)
    th = 0.5 * (1 - np.cos(np.pi * t / 10))
    tab = TabulatedTheta(t, th)
    rho, drho = tab.ratio(t[1:-1])
    np.testing.assert_allclose(np.arctan(rho), th[1:-1], atol=1e-12)
    expect = 0.5 * np.pi / 10 * np.sin(np.pi * t[1:-1] / 10)
    np.testing.assert_allclose(drho / (1 + rho**2), expect, atol=1e-5)
    with pytest.raises(ConfigurationError):
        TabulatedTheta(t, np.full_like(t, math.pi / 2))


def test_position_coupling():
    c = PositionCoupling(ModeFunctionPoint(0, 0, 0.25), 6.0)
    assert c.g == pytest.approx(6.0)
    assert float(c.rate(1.0)) == 0.0


# --- time grid -------------------------------------------------------------


def test_time_grid_default_resolves_fastest_mode():
    tg = TimeGrid.default(20.0, 20.0)
    assert tg.dt * 20.0 <= 0.05 + 1e-15
    assert tg.steps * tg.dt == pytest.approx(20.0)
    tg.validate(20.0)
    with pytest.raises(ConfigurationError):
        TimeGrid(20.0, 0.01).validate(20.0)
    with pytest.raises(ConfigurationError):
        TimeGrid(1.0, 0.3)


# --- cavity response to the drive -----------------------------------------


def _alpha_oracle(t, eps, w, kappa):
    """alpha(t) = int_0^t exp((i w - kappa/2)(t - s)) eps(s) ds by oscillatory quadrature."""
    f = lambda s: math.exp(-kappa / 2 * (t - s)) * eps(s)
    C = quad(f, 0, t, weight="cos", wvar=w, limit=400)[0]
    S = quad(f, 0, t, weight="sin", wvar=w, limit=400)[0]
    cw, sw = math.cos(w * t), math.sin(w * t)
    return (cw * C + sw * S) + 1j * (sw * C - cw * S)


def test_drive_response_zero_drive():
    t = np.linspace(0, 10, 101)
    assert np.all(cavity_drive_response(t, np.zeros(101), 100.0) == 0)


def test_drive_response_matches_quadrature_oracle():
    w, T = 100.0, 10.0
    eps = lambda s: math.exp(-((s - 5) / 2) ** 2)
    t = np.linspace(0, T, 2001)
    alpha = cavity_drive_response(t, [eps(s) for s in t], w)
    for k in (400, 1000, 1700, 2000):
        assert abs(alpha[k] - _alpha_oracle(t[k], eps, w, 1.0)) < 1e-6


def test_drive_response_tracks_envelope_far_detuned():
    w, T = 50.0, 20.0  # omega_gs * T = 1e3
    tw = T / 5
    t = np.linspace(0, T, 8001)
    x = (t - T / 2) / tw
    eps = np.exp(-x * x)
    alpha = cavity_drive_response(t, eps, w)
    lam = 1j * w - 0.5
    const = -1 / lam
    # leading order: the relative lag is ~ 2x/(omega_gs t_w), below 1% near the peak
    core = np.abs(x) <= 0.8
    assert (np.abs(alpha[core] / eps[core] - const) / abs(const)).max() < 1e-2
    # with the first derivative correction the residual is the slowly decaying
    # ringing from the small switch-on value eps(0)
    deps = -2 * x / tw * eps
    approx = -eps / lam - deps / lam**2
    live = eps > 1e-1
    assert (np.abs(alpha[live] - approx[live]) / np.abs(approx[live])).max() < 5e-3


def test_drive_response_step_rings():
    w = 50.0
    t = np.linspace(0, 4, 8001)
    alpha = cavity_drive_response(t, np.ones_like(t), w)
    # an abrupt switch-on leaves a transient oscillating at omega_gs
    resid = alpha - 1 / (-1j * w + 0.5)
    spec = np.abs(np.fft.rfft(resid.real[:4000]))
    freqs = np.fft.rfftfreq(4000, t[1] - t[0]) * 2 * math.pi
    assert abs(freqs[np.argmax(spec[1:]) + 1] - w) < 2.0
    assert np.abs(resid[1000:2000]).max() > 0.1 * abs(1 / w)


def test_drive_response_rejects_bad_detuning():
    with pytest.raises(ConfigurationError):
        cavity_drive_response([0, 1], [0, 0], 0.0)
