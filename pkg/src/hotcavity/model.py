"""Physical parameters, cavity mode function, drive envelopes and coupling
trajectories.

Everything is expressed in units of the cavity energy decay rate: rates in
multiples of kappa, times in multiples of 1/kappa.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np
from scipy.interpolate import CubicSpline


class ConfigurationError(ValueError):
    """Raised when parameters violate a model invariant."""


class DegenerateAngleError(ValueError):
    """Raised when the mixing angle is undefined (drive and coupling both zero)."""


@dataclass(frozen=True)
class PhysicalParams:
    """Rates and couplings in units of kappa.

    ``delta_omega=None`` defers the mode spacing to run construction, where it
    is chosen as ``0.1 / T``.
    """

    kappa: float = 1.0
    gamma_s: float = 1.0
    delta: float = 0.0
    g_peak: float = 3.0
    r_o: float = 1.0
    omega_gs: float = 1.0e3
    omega_b: float = 20.0
    delta_omega: float | None = None

    def __post_init__(self):
        if not self.kappa > 0:
            raise ConfigurationError("kappa must be positive")
        if self.gamma_s < 0:
            raise ConfigurationError("gamma_s must be non-negative")
        if not self.g_peak > 0:
            raise ConfigurationError("g_peak must be positive")
        if not self.r_o > 0:
            raise ConfigurationError("r_o must be positive")
        if not self.omega_b > 0:
            raise ConfigurationError("omega_b must be positive")
        if self.delta_omega is not None and not self.delta_omega > 0:
            raise ConfigurationError("delta_omega must be positive")

    @property
    def cooperativity(self) -> float:
        """Strong-coupling parameter d_sc = g^2 / (kappa gamma_s)."""
        if self.gamma_s == 0:
            return math.inf
        return self.g_peak**2 / (self.kappa * self.gamma_s)


@dataclass(frozen=True)
class ModeFunctionPoint:
    """Atom position relative to the cavity mode.

    ``x``, ``y`` share the length unit of ``w0``; ``z`` shares the inverse unit
    of ``k0`` (``k0 = 2 pi / lambda0``).
    """

    x: float
    y: float
    z: float
    w0: float = 1.0
    k0: float = 2 * math.pi

    def __post_init__(self):
        if not (self.w0 > 0 and self.k0 > 0):
            raise ConfigurationError("w0 and k0 must be positive")


def mode_function(point: ModeFunctionPoint) -> float:
    """Standing-wave Gaussian mode profile, bounded by 1 in magnitude."""
    p = point
    return math.sin(p.k0 * p.z) * math.exp(-(p.x**2 + p.y**2) / p.w0**2)


# ---------------------------------------------------------------------------
# coupling trajectories g(t)


@dataclass(frozen=True)
class ConstantCoupling:
    g: float

    def __post_init__(self):
        if not self.g > 0:
            raise ConfigurationError("constant coupling must be positive")

    def value(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.g)

    def rate(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class PositionCoupling:
    """Static atom at ``point``; g = g0 * chi(point)."""

    point: ModeFunctionPoint
    g0: float

    def __post_init__(self):
        if not self.g0 > 0:
            raise ConfigurationError("g0 must be positive")

    @property
    def g(self) -> float:
        return self.g0 * mode_function(self.point)

    def value(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.g)

    def rate(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class SinusoidalCoupling:
    """g(t) = amplitude * sin(angular_rate * t + phase); may change sign."""

    amplitude: float
    angular_rate: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ConfigurationError("amplitude must be positive")

    def value(self, t):
        return self.amplitude * np.sin(self.angular_rate * np.asarray(t, dtype=float) + self.phase)

    def rate(self, t):
        arg = self.angular_rate * np.asarray(t, dtype=float) + self.phase
        return self.amplitude * self.angular_rate * np.cos(arg)


CouplingTrajectory = Union[ConstantCoupling, PositionCoupling, SinusoidalCoupling]


# ---------------------------------------------------------------------------
# drive envelopes


MIN_CENTER_WIDTHS = 2.5


@dataclass(frozen=True)
class GaussianRatio:
    """rho(t) = rho_peak * exp(-((t - center) / width)^2)."""

    rho_peak: float
    center: float
    width: float

    def __post_init__(self):
        if not self.rho_peak > 0:
            raise ConfigurationError("rho_peak must be positive")
        if not self.width > 0:
            raise ConfigurationError("width must be positive")
        # rho(0) <= exp(-6.25) * rho_peak
        if self.center < MIN_CENTER_WIDTHS * self.width - 1e-12:
            raise ConfigurationError(
                f"center must be at least {MIN_CENTER_WIDTHS} widths from t=0 "
                "so the drive ramps from zero"
            )

    @property
    def peak(self) -> float:
        return self.rho_peak

    def ratio(self, t):
        """Return (rho, drho/dt)."""
        u = (np.asarray(t, dtype=float) - self.center) / self.width
        rho = self.rho_peak * np.exp(-u * u)
        return rho, -2.0 * u / self.width * rho


@dataclass(frozen=True)
class TabulatedTheta:
    """Mixing angle sampled on a uniform grid, e.g. from pulse design.

    A cubic spline provides theta and its derivative between samples.
    """

    times: np.ndarray
    theta: np.ndarray
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        theta = np.asarray(self.theta, dtype=float)
        if times.ndim != 1 or times.shape != theta.shape or times.size < 4:
            raise ConfigurationError("times and theta must be matching 1-d arrays (>= 4 samples)")
        if np.any(theta < 0) or np.any(theta >= math.pi / 2):
            raise ConfigurationError("tabulated theta must lie in [0, pi/2)")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "_spline", CubicSpline(times, theta))

    @property
    def peak(self) -> float:
        return float(np.tan(self.theta.max()))

    def ratio(self, t):
        t = np.clip(np.asarray(t, dtype=float), self.times[0], self.times[-1])
        th = self._spline(t)
        rho = np.tan(th)
        return rho, self._spline(t, 1) * (1.0 + rho * rho)


Envelope = Union[GaussianRatio, TabulatedTheta]


@dataclass(frozen=True)
class Matched:
    """Drive injected through the mirror: Omega/g = rho(t) at every position."""


@dataclass(frozen=True)
class Uniform:
    """Side illumination with position-independent peak Rabi rate ``omega_m``.

    Omega(t) = omega_m * rho(t) / rho_peak, i.e. the envelope shape is kept and
    its peak is pinned to omega_m.
    """

    omega_m: float

    def __post_init__(self):
        if not self.omega_m > 0:
            raise ConfigurationError("omega_m must be positive")


@dataclass(frozen=True)
class DriveProfile:
    envelope: Envelope
    mode: Matched | Uniform = Matched()


@dataclass(frozen=True)
class TimeGrid:
    """Fixed-step integration grid on [0, T]."""

    T: float
    dt: float
    stride: int = 1

    def __post_init__(self):
        if not (self.T > 0 and self.dt > 0):
            raise ConfigurationError("T and dt must be positive")
        n = self.T / self.dt
        if abs(n - round(n)) > 1e-9 * max(1.0, n):
            raise ConfigurationError("T/dt must be an integer")
        if self.stride < 1:
            raise ConfigurationError("stride must be >= 1")

    @property
    def steps(self) -> int:
        return int(round(self.T / self.dt))

    @classmethod
    def default(cls, T: float, omega_b: float, samples: int = 2000) -> "TimeGrid":
        """dt = min(0.05/omega_b, T/4000), rounded down so T/dt is whole."""
        steps = math.ceil(T / min(0.05 / omega_b, T / 4000))
        return cls(T=T, dt=T / steps, stride=max(1, steps // samples))

    def validate(self, omega_b: float):
        if self.dt * omega_b > 0.1 + 1e-12:
            raise ConfigurationError(
                f"dt*omega_b = {self.dt * omega_b:.3g} > 0.1: step cannot resolve the fastest mode"
            )


# ---------------------------------------------------------------------------
# mixing angle


class Angle(NamedTuple):
    theta: np.ndarray
    theta_dot: np.ndarray
    coupling: np.ndarray
    """Bright-to-excited coupling sqrt(Omega^2 + g^2), signed as g/cos(theta)."""


def theta_of_t(profile: DriveProfile, traj: CouplingTrajectory, t) -> Angle:
    """Mixing angle, its rate and the bright/excited coupling at time(s) ``t``.

    Matched drive: theta = arctan(rho), independent of g; the coupling is
    g*sqrt(1 + rho^2) and keeps the sign of g. Uniform drive: theta =
    atan2(Omega, g), continuous through g = 0, with coupling sqrt(Omega^2 + g^2).
    """
    rho, drho = profile.envelope.ratio(t)
    g = traj.value(t)
    if isinstance(profile.mode, Matched):
        theta = np.arctan(rho)
        theta_dot = drho / (1.0 + rho * rho)
        coupling = g * np.sqrt(1.0 + rho * rho)
        return Angle(theta, theta_dot, coupling)

    scale = profile.mode.omega_m / profile.envelope.peak
    omega, domega = scale * rho, scale * drho
    dg = traj.rate(t)
    gap2 = omega * omega + g * g
    if np.any(gap2 == 0):
        raise DegenerateAngleError("Omega and g vanish simultaneously; mixing angle undefined")
    theta = np.arctan2(omega, g)
    theta_dot = (domega * g - omega * dg) / gap2
    return Angle(theta, theta_dot, np.sqrt(gap2))


def reference_theta(profile: DriveProfile, t) -> np.ndarray:
    """Designed mixing angle arctan(rho(t)), the one matched drive realizes."""
    rho, _ = profile.envelope.ratio(t)
    return np.arctan(rho)


# ---------------------------------------------------------------------------
# cavity response to the drive laser


def cavity_drive_response(times, envelope, omega_gs: float, kappa: float = 1.0) -> np.ndarray:
    """Driven-cavity amplitude alpha(t) for a slowly varying drive envelope.

    Evaluates the convolution of the envelope with exp((i omega_gs - kappa/2) s)
    exactly for a piecewise-linear envelope between the grid points, so large
    ``omega_gs * dt`` is handled without aliasing.
    """
    if not omega_gs > 0:
        raise ConfigurationError("omega_gs must be positive")
    times = np.asarray(times, dtype=float)
    eps = np.asarray(envelope, dtype=complex)
    h = np.diff(times)
    lam = 1j * omega_gs - kappa / 2
    z = lam * h
    ez = np.exp(z)
    # weights of eps[k] and eps[k+1] in the exact integral over one step
    small = np.abs(z) < 1e-3
    zs = np.where(small, 1.0, z)
    w1 = np.where(small, h * (0.5 + z / 6), h * (ez - 1 - zs) / (zs * zs))
    w0 = np.where(small, h * (0.5 + z / 3), h * (ez - 1) / zs - w1)
    alpha = np.empty_like(eps)
    alpha[0] = 0.0
    for k in range(h.size):
        alpha[k + 1] = ez[k] * alpha[k] + w0[k] * eps[k] + w1[k] * eps[k + 1]
    return alpha
