"""
Designing the drive for a time-symmetric photon
================================================

A photon shaped like sqrt(beta/2) sech[beta (t - T/2)] can be absorbed by a
second cavity driven with the time-reversed pulse. Inverting the adiabatic
emission law gives the mixing angle, and from it the cavity drive.
"""

import numpy as np

from hotcavity.design import InfeasibleWaveformError, transfer_pair

T = 20.0
pair = transfer_pair(beta=0.5, T=T)
t = pair.times

# %%
# At beta = kappa/2 the emitter drive is a pure growing exponential.
ratio = pair.send / np.exp((t - T / 2) / 2)
print("send / exp(kappa (t - T/2)/2): min", ratio.min(), " max", ratio.max())
print("receive is the reversed send:", np.array_equal(pair.receive, pair.send[::-1]))

# %%
# A faster photon would need sin(theta) > 1: the cavity cannot release
# energy that quickly.
try:
    transfer_pair(beta=0.6, T=T)
except InfeasibleWaveformError as err:
    print("beta = 0.6 kappa:", err)
