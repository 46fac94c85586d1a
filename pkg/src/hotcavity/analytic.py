"""Closed-form adiabatic-limit results.

In the adiabatic limit the bright and excited amplitudes stay at zero, the
dark amplitude decays like a cavity with rate kappa*sin^2(theta), and the
emitted waveform follows from theta(t) alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid


@dataclass(frozen=True)
class DarkStateAngle:
    cos_theta: float
    sin_theta: float

    @classmethod
    def from_ratio(cls, ratio: float) -> "DarkStateAngle":
        """Angle for Omega/g = ``ratio`` (equivalently r_o * alpha)."""
        c = 1.0 / math.sqrt(1.0 + ratio * ratio)
        return cls(cos_theta=c, sin_theta=ratio * c)

    @property
    def dark(self) -> np.ndarray:
        """Dark state on the (|g,0>, |s,1>) basis."""
        return np.array([self.cos_theta, -self.sin_theta])

    @property
    def bright(self) -> np.ndarray:
        return np.array([self.sin_theta, self.cos_theta])


@dataclass(frozen=True)
class PulseShape:
    """Complex single-photon waveform on a uniform time grid."""

    times: np.ndarray
    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "times", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have the same shape")

    def energy(self) -> float:
        """Trapezoid estimate of the integral of |f|^2."""
        return float(trapezoid(np.abs(self.values) ** 2, self.times))

    def normalize(self) -> "PulseShape":
        e = self.energy()
        if e == 0:
            raise ValueError("cannot normalize an identically zero pulse")
        return PulseShape(self.times, self.values / math.sqrt(e), normalized=True)

    @property
    def amplitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def phase(self) -> np.ndarray:
        return np.angle(self.values)


def _sin2_integral(times, theta) -> np.ndarray:
    return cumulative_trapezoid(np.sin(theta) ** 2, times, initial=0.0)


def dark_coefficient(times, theta, kappa: float = 1.0) -> np.ndarray:
    """c_d(t) = exp(-(kappa/2) * int_0^t sin^2 theta)."""
    times = np.asarray(times, dtype=float)
    return np.exp(-0.5 * kappa * _sin2_integral(times, np.asarray(theta, dtype=float)))


def ideal_pulse_shape(times, theta, kappa: float = 1.0) -> PulseShape:
    """Un-normalized adiabatic waveform sqrt(kappa) sin(theta) c_d(t)."""
    times = np.asarray(times, dtype=float)
    theta = np.asarray(theta, dtype=float)
    f = math.sqrt(kappa) * np.sin(theta) * dark_coefficient(times, theta, kappa)
    return PulseShape(times, f)


def adiabatic_error_estimate(g: float, omega: float, T: float) -> float:
    """Non-adiabatic error probability 1/(delta*T)^2 with gap delta = sqrt(g^2 + Omega^2)."""
    gap2 = g * g + omega * omega
    if gap2 == 0:
        raise ValueError("zero gap: g and Omega both vanish")
    if not T > 0:
        raise ValueError("T must be positive")
    return 1.0 / (gap2 * T * T)


def excitation_probability(times, theta, kappa: float = 1.0) -> float:
    """Probability the adiabatic passage has emitted its photon by the end of the grid."""
    cd = dark_coefficient(times, theta, kappa)
    return float(1.0 - cd[-1] ** 2)
