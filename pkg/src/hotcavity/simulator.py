"""Exact integration of the atom + cavity + discretized output-continuum system.

The state is packed into one complex vector ``[c_d, c_b, c_e, c_1 .. c_N]``
(dark, bright, excited, free-space modes). The generator is the rotated-basis
Schroedinger equation with a non-Hermitian loss term on the excited state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .analytic import PulseShape, ideal_pulse_shape
from .model import (
    ConfigurationError,
    CouplingTrajectory,
    DriveProfile,
    PhysicalParams,
    TimeGrid,
    reference_theta,
    theta_of_t,
)

# cap on the mixing-angle change per RK4 step
MAX_ANGLE_STEP = 0.01
NORM_GROWTH_LIMIT = 1e-6


class InstabilityError(RuntimeError):
    """Norm grew during integration; the step is too large."""


class UndefinedOverlapError(ValueError):
    """Shape mismatch requested for an identically zero pulse."""


@dataclass(frozen=True)
class ModeGrid:
    N: int
    delta_omega: float
    omegas: np.ndarray
    kappa_prime: float


def build_mode_grid(params: PhysicalParams, T: float) -> ModeGrid:
    """Discretize the output continuum on [-omega_b, omega_b].

    Mode j (1-based) sits at (j - N/2) * delta_omega; the spacing defaults to
    0.1/T when ``params.delta_omega`` is None.
    """
    dw = params.delta_omega if params.delta_omega is not None else 0.1 / T
    if dw * T > 0.2 + 1e-12:
        raise ConfigurationError(
            f"mode spacing too coarse: delta_omega*T = {dw * T:.3g} > 0.2"
        )
    if params.omega_b < 10 * params.kappa:
        raise ConfigurationError(
            f"bandwidth too narrow: omega_b = {params.omega_b:.3g} < 10*kappa"
        )
    N = 2 * int(round(params.omega_b / dw))
    if N < 2:
        raise ConfigurationError("mode count must be at least 2")
    j = np.arange(1, N + 1)
    omegas = (j - N // 2) * dw
    return ModeGrid(N=N, delta_omega=dw, omegas=omegas,
                    kappa_prime=math.sqrt(params.kappa * dw / (2 * math.pi)))


@dataclass(frozen=True)
class SystemState:
    vector: np.ndarray

    @classmethod
    def ground(cls, N: int, theta0: float = 0.0) -> "SystemState":
        """Atom in |g>, cavity and continuum empty, expressed in the dark/bright basis."""
        y = np.zeros(N + 3, dtype=complex)
        y[0] = math.cos(theta0)
        y[1] = math.sin(theta0)
        return cls(y)

    @property
    def c_d(self) -> complex:
        return complex(self.vector[0])

    @property
    def c_b(self) -> complex:
        return complex(self.vector[1])

    @property
    def c_e(self) -> complex:
        return complex(self.vector[2])

    @property
    def c_j(self) -> np.ndarray:
        return self.vector[3:]

    def atomic_population(self) -> float:
        return float(np.sum(np.abs(self.vector[:3]) ** 2))

    def photon_population(self) -> float:
        return float(np.sum(np.abs(self.vector[3:]) ** 2))

    def norm(self) -> float:
        return self.atomic_population() + self.photon_population()


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams
    profile: DriveProfile
    trajectory: CouplingTrajectory
    time: TimeGrid

    @classmethod
    def build(cls, params, profile, trajectory, T: float, samples: int = 2000) -> "RunConfig":
        return cls(params, profile, trajectory, TimeGrid.default(T, params.omega_b, samples))


@dataclass(frozen=True)
class SystemTrajectory:
    times: np.ndarray
    atomic: np.ndarray
    """(n_samples, 3) array of c_d, c_b, c_e."""
    photon_population: np.ndarray
    final: SystemState
    grid: ModeGrid
    max_norm_growth: float
    substeps: int
    """Total RK4 steps taken, including refinements near fast angle changes."""


def _derivative(y, out, s, c, thd, G, mw, kp, decay):
    cd, cb, ce = y[0], y[1], y[2]
    cj = y[3:]
    S = cj.sum()
    out[0] = -thd * cb - kp * s * S
    out[1] = thd * cd - 1j * G * ce + kp * c * S
    out[2] = decay * ce - 1j * G * cb
    np.multiply(mw, cj, out=out[3:])
    out[3:] += kp * (s * cd - c * cb)
    return out


def rhs(y, t: float, grid: ModeGrid, params: PhysicalParams,
        profile: DriveProfile, trajectory: CouplingTrajectory) -> np.ndarray:
    """Time derivative of the packed state vector at time ``t``."""
    ang = theta_of_t(profile, trajectory, t)
    th = float(ang.theta)
    out = np.empty(grid.N + 3, dtype=complex)
    return _derivative(np.asarray(y, dtype=complex), out, math.sin(th), math.cos(th),
                       float(ang.theta_dot), float(ang.coupling), -1j * grid.omegas,
                       grid.kappa_prime, -1j * params.delta - params.gamma_s / 2)


class _Stepper:
    """Classic RK4 over preallocated buffers."""

    def __init__(self, grid: ModeGrid, params: PhysicalParams):
        n = grid.N + 3
        self.mw = -1j * grid.omegas
        self.kp = grid.kappa_prime
        self.decay = -1j * params.delta - params.gamma_s / 2
        self.k = [np.empty(n, dtype=complex) for _ in range(4)]
        self.tmp = np.empty(n, dtype=complex)

    def _f(self, y, out, node):
        th, thd, G = node
        return _derivative(y, out, math.sin(th), math.cos(th), thd, G,
                           self.mw, self.kp, self.decay)

    def step(self, y, h, n0, n1, n2):
        k1, k2, k3, k4 = self.k
        tmp = self.tmp
        self._f(y, k1, n0)
        np.multiply(k1, 0.5 * h, out=tmp)
        tmp += y
        self._f(tmp, k2, n1)
        np.multiply(k2, 0.5 * h, out=tmp)
        tmp += y
        self._f(tmp, k3, n1)
        np.multiply(k3, h, out=tmp)
        tmp += y
        self._f(tmp, k4, n2)
        k2 += k3
        k2 *= 2.0
        k2 += k1
        k2 += k4
        k2 *= h / 6.0
        y += k2


def integrate(config: RunConfig, grid: ModeGrid | None = None) -> SystemTrajectory:
    """Integrate from the atom in |g> at t=0 to t=T with fixed-step RK4.

    Steps where the mixing angle would change by more than ``MAX_ANGLE_STEP``
    are split into equal substeps; the split pattern depends only on the
    configuration, so runs are bit-reproducible. An explicit ``grid`` skips
    the continuum-resolution checks (useful for small reference problems).
    """
    p, tg = config.params, config.time
    if grid is None:
        tg.validate(p.omega_b)
        grid = build_mode_grid(p, tg.T)
    else:
        tg.validate(float(np.max(np.abs(grid.omegas))))
    steps, dt = tg.steps, tg.dt

    half = np.arange(2 * steps + 1) * (0.5 * dt)
    half[-1] = tg.T
    ang = theta_of_t(config.profile, config.trajectory, half)
    th = np.asarray(ang.theta, dtype=float)
    thd = np.asarray(ang.theta_dot, dtype=float)
    G = np.asarray(ang.coupling, dtype=float)
    rate = np.abs(thd)
    worst = np.maximum(np.maximum(rate[0:-1:2], rate[1::2]), rate[2::2]) * dt
    # a flip narrower than dt can slip between the rate samples but not past
    # the angle itself, so the variation over the step is a second estimate
    jump = np.abs(np.diff(th))
    worst = np.maximum(worst, jump[0::2] + jump[1::2])
    splits = np.maximum(1, np.ceil(worst / MAX_ANGLE_STEP)).astype(int)

    y = SystemState.ground(grid.N, float(th[0])).vector.copy()
    stepper = _Stepper(grid, p)

    n_samples = steps // tg.stride + 1 + (1 if steps % tg.stride else 0)
    times = np.empty(n_samples)
    atomic = np.empty((n_samples, 3), dtype=complex)
    photons = np.empty(n_samples)

    def record(i, t):
        times[i] = t
        atomic[i] = y[:3]
        photons[i] = np.vdot(y[3:], y[3:]).real

    record(0, 0.0)
    isample = 1
    running = np.vdot(y, y).real
    growth = 0.0
    total = 0
    for k in range(steps):
        m = splits[k]
        if m == 1:
            i = 2 * k
            stepper.step(y, dt, (th[i], thd[i], G[i]), (th[i + 1], thd[i + 1], G[i + 1]),
                         (th[i + 2], thd[i + 2], G[i + 2]))
        else:
            h = dt / m
            sub = k * dt + np.arange(2 * m + 1) * (0.5 * h)
            a = theta_of_t(config.profile, config.trajectory, sub)
            for s in range(m):
                i = 2 * s
                stepper.step(y, h, *[(float(a.theta[i + q]), float(a.theta_dot[i + q]),
                                      float(a.coupling[i + q])) for q in range(3)])
        total += m
        norm = np.vdot(y, y).real
        growth = max(growth, norm - running)
        if norm - running > NORM_GROWTH_LIMIT:
            raise InstabilityError(
                f"norm grew by {norm - running:.3g} at t={(k + 1) * dt:.4g}; reduce dt"
            )
        running = min(running, norm)
        if (k + 1) % tg.stride == 0 or k + 1 == steps:
            record(isample, tg.T if k + 1 == steps else (k + 1) * dt)
            isample += 1

    return SystemTrajectory(times=times[:isample], atomic=atomic[:isample],
                            photon_population=photons[:isample], final=SystemState(y),
                            grid=grid, max_norm_growth=growth, substeps=total)


def reconstruct_pulse(c_j, grid: ModeGrid, times, T: float, chunk: int = 256) -> PulseShape:
    """Output waveform from the final mode amplitudes by discrete Fourier synthesis."""
    times = np.asarray(times, dtype=float)
    c_j = np.asarray(c_j, dtype=complex)
    f = np.empty(times.size, dtype=complex)
    pref = math.sqrt(grid.delta_omega / (2 * math.pi))
    for a in range(0, times.size, chunk):
        tau = times[a:a + chunk] - T
        f[a:a + chunk] = pref * (np.exp(-1j * np.outer(tau, grid.omegas)) @ c_j)
    return PulseShape(times, f)


def shape_mismatch(f_real: PulseShape, f_id: PulseShape) -> float:
    """|1 - <f_real, f_id> / (||f_real|| ||f_id||)| with trapezoid integrals."""
    t = f_real.times
    a = trapezoid(np.abs(f_real.values) ** 2, t)
    b = trapezoid(np.abs(f_id.values) ** 2, f_id.times)
    if a == 0 or b == 0:
        raise UndefinedOverlapError("shape mismatch undefined for an identically zero pulse")
    overlap = trapezoid(np.conj(f_real.values) * f_id.values, t)
    return float(abs(1.0 - overlap / math.sqrt(a * b)))


@dataclass(frozen=True)
class NoiseMetrics:
    p_spon: float
    p_tran: float
    p_mis: float
    photon: float

    def as_dict(self) -> dict:
        return {"P_spon": self.p_spon, "P_tran": self.p_tran, "P_mis": self.p_mis}


def noise_metrics(final: SystemState, f_real: PulseShape, f_id: PulseShape) -> NoiseMetrics:
    """Spontaneous-emission loss, transfer inefficiency and shape mismatch.

    P_mis is NaN when either pulse is identically zero.
    """
    p_tran = final.atomic_population()
    photon = final.photon_population()
    p_spon = 1.0 - p_tran - photon
    try:
        p_mis = shape_mismatch(f_real, f_id)
    except UndefinedOverlapError:
        p_mis = math.nan
    return NoiseMetrics(p_spon=p_spon, p_tran=p_tran, p_mis=p_mis, photon=photon)


@dataclass(frozen=True)
class RunResult:
    config: RunConfig
    trajectory: SystemTrajectory
    f_real: PulseShape
    f_id: PulseShape
    metrics: NoiseMetrics = field(repr=False)


def simulate(config: RunConfig) -> RunResult:
    """Integrate, reconstruct the output pulse and score it against the ideal shape.

    The ideal shape uses the designed angle arctan(rho(t)), which a matched
    drive realizes for any coupling trajectory.
    """
    traj = integrate(config)
    times = traj.times
    f_real = reconstruct_pulse(traj.final.c_j, traj.grid, times, config.time.T)
    f_id = ideal_pulse_shape(times, reference_theta(config.profile, times), config.params.kappa)
    return RunResult(config, traj, f_real, f_id, noise_metrics(traj.final, f_real, f_id))
