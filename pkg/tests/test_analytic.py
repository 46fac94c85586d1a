import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from hotcavity.analytic import (
    DarkStateAngle,
    PulseShape,
    adiabatic_error_estimate,
    dark_coefficient,
    excitation_probability,
    ideal_pulse_shape,
)
from hotcavity.model import DriveProfile, GaussianRatio, PhysicalParams, reference_theta
from hotcavity.model import ConstantCoupling
from hotcavity.simulator import RunConfig, simulate


def test_dark_state_angle_orthonormal():
    a = DarkStateAngle.from_ratio(0.7)
    assert a.cos_theta**2 + a.sin_theta**2 == pytest.approx(1)
    assert np.dot(a.dark, a.bright) == pytest.approx(0, abs=1e-15)
    assert a.sin_theta / a.cos_theta == pytest.approx(0.7)


def test_dark_coefficient_limits():
    t = np.linspace(0, 10, 1001)
    np.testing.assert_array_equal(dark_coefficient(t, np.zeros_like(t)), 1.0)
    np.testing.assert_allclose(dark_coefficient(t, np.full_like(t, math.pi / 2)),
                               np.exp(-t / 2), rtol=1e-12)


def test_ideal_pulse_free_decay_and_off():
    t = np.linspace(0, 10, 1001)
    f = ideal_pulse_shape(t, np.full_like(t, math.pi / 2), kappa=2.0)
    np.testing.assert_allclose(f.values.real, math.sqrt(2) * np.exp(-t), rtol=1e-12)
    assert not np.any(ideal_pulse_shape(t, np.zeros_like(t)).values)


@pytest.mark.parametrize("beta", [0.1, 0.25, 0.4])
def test_ideal_pulse_from_sech_angle(beta):
    T = 40.0
    t = np.linspace(0, T, 8001)
    x = beta * (t - T / 2)
    s = np.sqrt(beta) * np.sqrt(1 + np.tanh(x))
    f = ideal_pulse_shape(t, np.arcsin(s))
    target = math.sqrt(beta / 2) / np.cosh(x)
    # the grid starts at t = 0, not -infinity: c_d then carries an extra
    # factor exp(+E_tail/2) with E_tail = expit(-beta T)
    tail = 1 / (1 + math.exp(beta * T))
    assert np.max(np.abs(f.values.real - target)) < tail + 1e-6


def test_flux_identity_gaussian():
    T = 20.0
    prof = DriveProfile(GaussianRatio(1.0, T / 2, T / 5))
    t = np.linspace(0, T, 20001)
    th = reference_theta(prof, t)
    f = ideal_pulse_shape(t, th)
    cd = dark_coefficient(t, th)[-1]
    assert cd**2 == pytest.approx(1 - f.energy(), abs=1e-8)
    assert excitation_probability(t, th) == pytest.approx(1 - cd**2)


def test_flux_identity_against_quadrature():
    # independent oracle: adaptive quadrature of the closed-form exponent
    T = 20.0
    rho = lambda t: math.exp(-((t - T / 2) / (T / 5)) ** 2)
    sin2 = lambda t: rho(t) ** 2 / (1 + rho(t) ** 2)
    expo = quad(sin2, 0, T)[0]
    t = np.linspace(0, T, 20001)
    th = np.arctan([rho(v) for v in t])
    assert dark_coefficient(t, th)[-1] == pytest.approx(math.exp(-expo / 2), rel=1e-8)


def test_excitation_probability_closed_forms():
    t = np.linspace(0, 1, 11)
    assert excitation_probability(t, np.zeros_like(t)) == 0.0
    t = np.linspace(0, math.log(2), 10001)
    assert excitation_probability(t, np.full_like(t, math.pi / 2)) == pytest.approx(0.5, abs=1e-12)


def test_adiabatic_error_estimate():
    assert adiabatic_error_estimate(3, 0, 20) == pytest.approx(1 / 3600)
    assert adiabatic_error_estimate(6, 0, 20) == pytest.approx(adiabatic_error_estimate(3, 0, 20) / 4)
    assert adiabatic_error_estimate(3, 0, 1e6) < 1e-12
    with pytest.raises(ValueError):
        adiabatic_error_estimate(0, 0, 1)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 5), st.floats(5, 50))
def test_ideal_energy_is_excitation_probability(rho_peak, T):
    prof = DriveProfile(GaussianRatio(rho_peak, T / 2, T / 5))
    t = np.linspace(0, T, 4001)
    th = reference_theta(prof, t)
    # d/dt c_d^2 = -kappa sin^2 c_d^2 = -|f|^2, so the two agree to discretization
    assert ideal_pulse_shape(t, th).energy() == pytest.approx(excitation_probability(t, th), abs=1e-5)


def test_pulse_normalize():
    t = np.linspace(0, 1, 101)
    p = PulseShape(t, 3 * np.exp(1j * t)).normalize()
    assert p.normalized and p.energy() == pytest.approx(1)
    with pytest.raises(ValueError):
        PulseShape(t, np.zeros(101)).normalize()


@pytest.mark.slow
def test_excitation_consistent_with_simulation():
    T = 20.0
    params = PhysicalParams(g_peak=3.0, omega_b=10.0)
    prof = DriveProfile(GaussianRatio(1.0, T / 2, T / 5))
    res = simulate(RunConfig.build(params, prof, ConstantCoupling(3.0), T))
    t = res.trajectory.times
    p0 = excitation_probability(np.linspace(0, T, 20001), reference_theta(prof, np.linspace(0, T, 20001)))
    m = res.metrics
    assert abs(p0 - m.photon) <= m.p_spon + m.p_tran
    assert t[-1] == T
