"""Intracavity far-off-resonance dipole trap (FORT) for a cesium atom.

SI units throughout; trap energies are reported as positive depths in Hz
(U/h).

Constants
---------
=====================  ==========================  =====================
quantity               value                       source
=====================  ==========================  =====================
h, hbar, c, k_B        CODATA                      ``scipy.constants``
Cs mass                132.905451931 u             Steck, Cs D line data
D2 (6P3/2) frequency   351.72571850 THz            Steck
D1 (6P1/2) frequency   335.116048807 THz           Steck
6P3/2 decay rate       2 pi x 5.2 MHz              typical cavity-QED value
=====================  ==========================  =====================

Beam conventions: the intensity falls off as exp(-2 r^2 / w0^2) (w0 is the
1/e^2 intensity radius, the same w0 that makes the cavity field mode
exp(-r^2/w0^2)), and an impedance-matched cavity of finesse F builds the
input power up by F/pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy import constants

CS_MASS = 132.905451931 * constants.atomic_mass
CS_D2_HZ = 351.72571850e12
CS_D1_HZ = 335.116048807e12
CS_GAMMA = 2 * math.pi * 5.2e6


class UntrappedError(ValueError):
    """Thermal energy at or above the trap depth."""


@dataclass(frozen=True)
class TrapConfig:
    lambda_fort: float
    w0: float
    power_in: float
    finesse: float
    delta_1: float
    """FORT detuning from the P1/2 line (rad/s, negative when red)."""
    delta_2: float
    """FORT detuning from the P3/2 line (rad/s)."""
    gamma_s: float = CS_GAMMA
    omega_0: float = 2 * math.pi * CS_D2_HZ
    atom_mass: float = CS_MASS
    temperature_fraction: float = 0.5
    buildup: float | None = field(default=None)
    """Intracavity/input power ratio; None means finesse/pi."""

    def __post_init__(self):
        for name in ("lambda_fort", "w0", "power_in", "finesse", "gamma_s", "omega_0", "atom_mass"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.delta_1 == 0 or self.delta_2 == 0:
            raise ValueError("FORT detunings must be non-zero")
        if not 0 < self.temperature_fraction:
            raise ValueError("temperature_fraction must be positive")

    @classmethod
    def cesium(cls, lambda_fort: float = 936e-9, w0: float = 25e-6, power_in: float = 1e-3,
               finesse: float = 2200.0, temperature_fraction: float = 0.5) -> "TrapConfig":
        """Cesium FORT with detunings computed from the D-line frequencies."""
        w_fort = 2 * math.pi * constants.c / lambda_fort
        return cls(lambda_fort=lambda_fort, w0=w0, power_in=power_in, finesse=finesse,
                   delta_1=w_fort - 2 * math.pi * CS_D1_HZ,
                   delta_2=w_fort - 2 * math.pi * CS_D2_HZ,
                   temperature_fraction=temperature_fraction)

    @property
    def omega_fort(self) -> float:
        return 2 * math.pi * constants.c / self.lambda_fort

    @property
    def intracavity_power(self) -> float:
        gain = self.finesse / math.pi if self.buildup is None else self.buildup
        return self.power_in * gain


def intensity(config: TrapConfig, x: float, y: float, z: float) -> float:
    """Standing-wave intensity (W/m^2); z = 0 is a node."""
    peak = 8 * config.intracavity_power / (math.pi * config.w0**2)
    axial = math.sin(2 * math.pi * z / config.lambda_fort) ** 2
    return peak * axial * math.exp(-2 * (x * x + y * y) / config.w0**2)


def fort_potential(config: TrapConfig, position=(0.0, 0.0, None)) -> float:
    """Trap depth at ``position`` in Hz; ``z=None`` means the on-axis antinode."""
    x, y, z = position
    if z is None:
        z = config.lambda_fort / 4
    c = constants.c
    pref = math.pi * c**2 * config.gamma_s / (2 * config.omega_0**3)
    U = pref * (2 / config.delta_2 + 1 / config.delta_1) * intensity(config, x, y, z)
    return abs(U) / constants.h


def trap_depth(config: TrapConfig) -> float:
    return fort_potential(config)


def trap_frequencies(U0: float, config: TrapConfig) -> tuple[float, float]:
    """Harmonic (axial, radial) trap frequencies in Hz for depth ``U0`` in Hz."""
    if not U0 > 0:
        raise ValueError("trap depth must be positive")
    U = U0 * constants.h
    m = config.atom_mass
    axial = math.sqrt(2 * U * config.omega_fort**2 / (m * constants.c**2)) / (2 * math.pi)
    radial = math.sqrt(4 * U / (m * config.w0**2)) / (2 * math.pi)
    return axial, radial


def thermal_extent(config: TrapConfig) -> tuple[float, float]:
    """Turning-point excursions (dz, dr_perp) in meters at energy k_B T = fraction * U0."""
    frac = config.temperature_fraction
    if frac >= 1:
        raise UntrappedError(f"k_B T / U0 = {frac} >= 1: atom is not trapped")
    dz = config.lambda_fort / (2 * math.pi) * math.asin(math.sqrt(frac))
    dr = config.w0 * math.sqrt(-math.log1p(-frac) / 2)
    return dz, dr


def radial_extent_field_profile(config: TrapConfig) -> float:
    """w0 sqrt(-ln(1 - k_B T/U0)): the excursion if the *intensity* fell as exp(-r^2/w0^2)."""
    frac = config.temperature_fraction
    if frac >= 1:
        raise UntrappedError(f"k_B T / U0 = {frac} >= 1: atom is not trapped")
    return config.w0 * math.sqrt(-math.log1p(-frac))


def coupling_spread(extents: tuple[float, float], w0_qed: float, k0_qed: float,
                    offset: float = 0.0) -> tuple[float, float]:
    """Fractional drop of |g| over the thermal excursion (radial, axial).

    ``offset`` is the axial distance between the trap centre and the nearest
    cavity-QED antinode; the axial figure is the worst case over +-dz.
    """
    dz, dr = extents
    radial = 1.0 - math.exp(-(dr / w0_qed) ** 2)
    centre = abs(math.cos(k0_qed * offset))
    if centre < 1e-12:
        raise ValueError("trap centre sits on a cavity-QED node")
    lo, hi = k0_qed * (offset - dz), k0_qed * (offset + dz)
    first_node = math.pi / 2 + math.ceil((lo - math.pi / 2) / math.pi) * math.pi
    # |cos| is concave between nodes, so its minimum is at an end of the interval
    worst = 0.0 if first_node <= hi else min(abs(math.cos(lo)), abs(math.cos(hi)))
    return radial, 1.0 - worst / centre


def trap_report(config: TrapConfig, lambda_qed: float = constants.c / CS_D2_HZ) -> dict:
    """Depth, frequencies, thermal extents and coupling spread in one table."""
    U0 = trap_depth(config)
    axial, radial = trap_frequencies(U0, config)
    dz, dr = thermal_extent(config)
    k0 = 2 * math.pi / lambda_qed
    spread_r, spread_z = coupling_spread((dz, dr), config.w0, k0)
    return {
        "U0_MHz": U0 / 1e6,
        "nu_axial_kHz": axial / 1e3,
        "nu_radial_kHz": radial / 1e3,
        "temperature_uK": config.temperature_fraction * U0 * constants.h / constants.k * 1e6,
        "dz_nm": dz * 1e9,
        "dr_perp_um": dr * 1e6,
        "dr_perp_field_profile_um": radial_extent_field_profile(config) * 1e6,
        "g_variation_radial": spread_r,
        "g_variation_axial": spread_z,
        "intracavity_power_W": config.intracavity_power,
        "notes": [
            "dr_perp uses the exp(-2r^2/w0^2) intensity profile;"
            " dr_perp_field_profile_um is w0*sqrt(-ln(1-kT/U0)), which treats"
            " exp(-r^2/w0^2) as the intensity and gives ~20.8 um instead of ~15 um at kT/U0=1/2",
        ],
    }
