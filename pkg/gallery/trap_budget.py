"""
How far does a warm atom wander in the trap?
============================================

A standing-wave dipole trap inside the cavity holds a cesium atom. At a
temperature of half the trap depth the atom explores a region comparable to
the cavity mode structure, so its coupling g is far from constant.
"""

from hotcavity.trap import TrapConfig, trap_report

report = trap_report(TrapConfig.cesium(power_in=1e-3, finesse=2200.0))
for key in ("U0_MHz", "nu_axial_kHz", "nu_radial_kHz", "dz_nm", "dr_perp_um",
            "g_variation_axial", "g_variation_radial"):
    print(f"{key:>20}: {report[key]:.4g}")
for note in report["notes"]:
    print("note:", note)
