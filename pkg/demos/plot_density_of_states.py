"""
Density of states from the reduced partition function
======================================================

Inverting the Laplace transform of ``Z exp(beta U0)`` gives a density of states
that can turn negative, which rules it out as a physical spectrum.
"""

import numpy as np

from drudeheat import BathSpec, SystemSpec
from drudeheat.dos import (InversionConfig, dos_low_energy_series, invert_dos,
                           peak_energy_scale, verify_positivity)

system = SystemSpec()
eps = np.linspace(0.02, 6, 300)  # (E - U0)/omega_D

###############################################################################
# Above and below omega_D = gamma the low-energy plateau changes sign.

for r in (0.2, 1.0, 5.0):
    res = invert_dos(system, BathSpec.from_ratio(r), eps)
    rep = verify_positivity(res)
    print(f"omega_D/gamma = {r}: delta weight {res.delta_weight:.4f}, "
          f"U0 = {res.u0:.4f}, method {res.method}")
    print(f"   rho*omega_D near U0 = {res.rho_scaled[0]:+.4f}, "
          f"negative intervals: {[(round(a, 2), round(b, 2)) for a, b in rep.negative_intervals][:3]}")

###############################################################################
# The two-term series tracks the inversion close to U0.

bath = BathSpec.from_ratio(5.0)
small = np.array([0.01, 0.05, 0.1])
exact = invert_dos(system, bath, small, InversionConfig(check=None)).rho
print("\n  eps    series    inversion")
for e, s, x in zip(small, dos_low_energy_series(bath, small), exact):
    print(f"{e:6.2f} {s:9.5f} {x:10.5f}")

###############################################################################
# For omega_D < 4 gamma the bath has an oscillating mode; the density shows
# peaks at its multiples.

bath = BathSpec.from_ratio(0.2)
rho = invert_dos(system, bath, eps, InversionConfig(check=None)).rho
inner = (rho[1:-1] > rho[:-2]) & (rho[1:-1] > rho[2:])
print(f"\npeaks / mode energy: {np.round(eps[1:-1][inner] / peak_energy_scale(bath), 3)}")

###############################################################################
# Weak damping recovers the free-particle density E**-1/2.

res = invert_dos(system, BathSpec.from_ratio(1e4), np.array([0.1, 1.0, 5.0]))
print(f"omega_D = 1e4 gamma, rho_scaled * sqrt(eps): {np.round(res.rho_scaled * np.sqrt(res.energies), 5)}")
