"""Drive-pulse synthesis for a prescribed single-photon waveform.

The adiabatic emission law is inverted pointwise: the mixing angle needed at
time t is fixed by the target amplitude and by the energy still stored in the
atom-cavity system. A waveform that demands sin(theta) > 1 would have to
vary faster than the cavity can release energy and is rejected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.special import expit

# below this much stored energy the inversion is 0/0 and the tail is dropped
DEPLETION_FLOOR = 1e-10
SIN_CLIP = 1.0 - 1e-12
FEASIBILITY_TOL = 1e-9


class InfeasibleWaveformError(ValueError):
    """Target needs sin(theta) > 1 somewhere."""

    def __init__(self, time: float, demanded: float):
        super().__init__(
            f"waveform too fast for the cavity decay: sin(theta) = {demanded:.6g} > 1 at t = {time:.6g}"
        )
        self.time = time
        self.demanded = demanded


class DivergentDriveError(ValueError):
    """sin(theta) reaches 1, which needs an infinite drive amplitude."""


@dataclass(frozen=True)
class TargetWaveform:
    """Real non-negative target f(t) with its cumulative emitted energy.

    ``cumulative`` defaults to the trapezoid integral of f^2 from the first
    sample; analytic targets may pass the exact value instead, and also
    ``tail`` = 1 - cumulative when that difference is better computed directly.
    """

    times: np.ndarray
    values: np.ndarray
    cumulative: np.ndarray | None = None
    tail: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        f = np.asarray(self.values)
        if np.iscomplexobj(f):
            if np.any(np.abs(f.imag) > 0):
                raise ValueError("target waveform must be real")
            f = f.real
        f = f.astype(float)
        if t.shape != f.shape or t.ndim != 1:
            raise ValueError("times and values must be matching 1-d arrays")
        if np.any(f < 0):
            raise ValueError("target waveform must be non-negative")
        E = (cumulative_trapezoid(f * f, t, initial=0.0) if self.cumulative is None
             else np.asarray(self.cumulative, dtype=float))
        if E[-1] > 1 + 1e-9:
            raise ValueError(f"target carries energy {E[-1]:.6g} > 1")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", f)
        object.__setattr__(self, "cumulative", E)

    @property
    def remaining(self) -> np.ndarray:
        """Energy not yet emitted, 1 - int_0^t f^2."""
        if self.tail is not None:
            return np.asarray(self.tail, dtype=float)
        return 1.0 - self.cumulative

    def resample(self, times) -> "TargetWaveform":
        """Linear interpolation onto another grid (energy recomputed there)."""
        times = np.asarray(times, dtype=float)
        return TargetWaveform(times, np.interp(times, self.times, self.values))


def sech_target(beta: float, T: float, times) -> TargetWaveform:
    """sqrt(beta/2) sech[beta (t - T/2)], time-symmetric about T/2.

    The stored-energy bookkeeping counts the (negligible) sech tail before t=0
    as already emitted, which keeps the inversion exact in closed form.
    """
    times = np.asarray(times, dtype=float)
    x = beta * (times - T / 2)
    f = math.sqrt(beta / 2) / np.cosh(x)
    return TargetWaveform(times, f, cumulative=expit(2 * x), tail=expit(-2 * x))


def invert_pulse_shape(target: TargetWaveform, kappa: float = 1.0) -> np.ndarray:
    """sin(theta(t)) that makes the adiabatic emission reproduce ``target``."""
    f = target.values
    rem = target.remaining
    live = rem > DEPLETION_FLOOR
    s = np.zeros_like(f)
    s[live] = f[live] / np.sqrt(kappa * rem[live])
    bad = np.nonzero(s > 1 + FEASIBILITY_TOL)[0]
    if bad.size:
        k = bad[0]
        raise InfeasibleWaveformError(float(target.times[k]), float(s[k]))
    return np.minimum(s, SIN_CLIP)


def theta_from_sin(sin_theta) -> np.ndarray:
    return np.arcsin(np.clip(sin_theta, 0.0, SIN_CLIP))


def drive_from_theta(sin_theta, r_o: float = 1.0) -> np.ndarray:
    """Driven-cavity amplitude alpha(t) = tan(theta)/r_o.

    The laser envelope is proportional to alpha, up to the constant
    (kappa/2 - i omega_gs) from the far-detuned cavity response.
    """
    s = np.asarray(sin_theta, dtype=float)
    if np.any(s >= 1.0):
        raise DivergentDriveError("sin(theta) = 1 needs an infinite drive")
    return s / np.sqrt((1.0 - s) * (1.0 + s)) / r_o


def laser_envelope(alpha, omega_gs: float, kappa: float = 1.0) -> np.ndarray:
    """Slowly varying laser amplitude that produces cavity amplitude ``alpha``."""
    return (kappa / 2 - 1j * omega_gs) * np.asarray(alpha, dtype=complex)


@dataclass(frozen=True)
class TransferPair:
    times: np.ndarray
    target: TargetWaveform
    sin_theta: np.ndarray
    send: np.ndarray
    """alpha(t) for the emitting cavity."""
    receive: np.ndarray
    """Time reverse of ``send`` for the absorbing cavity."""

    @property
    def theta(self) -> np.ndarray:
        return theta_from_sin(self.sin_theta)


def transfer_pair(beta: float, T: float, kappa: float = 1.0, r_o: float = 1.0,
                  times=None, samples: int = 4001) -> TransferPair:
    """Emitter and absorber drives for a time-symmetric sech photon.

    At beta = kappa/2 the emitter drive is the growing exponential
    exp(kappa (t - T/2)/2) and r_o*alpha(T/2) = 1.
    """
    if beta > kappa / 2 + FEASIBILITY_TOL:
        raise InfeasibleWaveformError(T, math.sqrt(2 * beta / kappa))
    if kappa * T < 10:
        raise ValueError("transfer needs kappa*T >= 10")
    if times is None:
        times = np.linspace(0.0, T, samples)
    target = sech_target(beta, T, times)
    s = invert_pulse_shape(target, kappa)
    send = drive_from_theta(s, r_o)
    return TransferPair(times=np.asarray(times, dtype=float), target=target,
                        sin_theta=s, send=send, receive=send[::-1].copy())
