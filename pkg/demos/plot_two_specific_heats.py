"""
Two specific heats of a damped free particle
=============================================

The particle's energy ``<H_S>`` and the reduced partition function give two
different specific heats once the coupling to the bath is not weak.
"""

import numpy as np

from drudeheat import BathSpec, heat_ce, heat_cz

# temperatures in units of gamma, log-spaced since the physics spans decades
T = np.geomspace(1e-3, 10, 9)

###############################################################################
# A cutoff well above gamma: both heats rise from zero to equipartition, 1/2.

bath = BathSpec.from_ratio(10.0)
print("omega_D/gamma = 10")
print("   T/gamma       C_E        C_Z")
for t, ce, cz in zip(T, heat_ce(bath, T), heat_cz(bath, T)):
    print(f"{t:10.4g} {ce:10.6f} {cz:10.6f}")

###############################################################################
# At high temperature both approach 1/2, but C^Z approaches twice as fast.

bath = BathSpec.from_ratio(1.0)
ratio = (0.5 - heat_cz(bath, 100.0)) / (0.5 - heat_ce(bath, 100.0))
print(f"\n(1/2 - C_Z)/(1/2 - C_E) at T = 100 gamma: {ratio:.4f}")

###############################################################################
# A cutoff below gamma makes C^Z negative at low temperature while C^E stays
# positive.

bath = BathSpec.from_ratio(0.2)
T = np.geomspace(1e-4, 0.5, 400)
cz = heat_cz(bath, T)
print(f"\nomega_D/gamma = 0.2: min C_Z = {cz.min():.4f} at T/gamma = {T[cz.argmin()]:.3g}")
print(f"C_E stays positive: {bool(np.all(heat_ce(bath, T) > 0))}")

###############################################################################
# In the strict ohmic limit only C^E survives; at a huge finite cutoff the two
# routes coincide.

print(f"\nohmic C_E(T = 1) = {heat_ce(BathSpec.strict_ohmic(1.0), 1.0):.8f}")
bath = BathSpec.from_ratio(1e6)
print(f"omega_D = 1e6 gamma: C_E = {heat_ce(bath, 1.0):.8f}, C_Z = {heat_cz(bath, 1.0):.8f}")
