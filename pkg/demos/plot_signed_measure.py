"""
A single oscillator as the bath
================================

With one bath oscillator the reduced partition function is the system's
partition function times ``2 sinh(beta w / 2)``.  Its inverse Laplace
transform is a set of delta functions with weights of both signs.
"""

import math

from drudeheat.dos import single_oscillator_measure

###############################################################################
# Three levels of the system coupled to an oscillator of frequency 0.9.

levels = [(0.4, 1.0), (1.1, 2.5), (2.9, 0.7)]
m = single_oscillator_measure(levels, 0.9)
for e, w in m.atoms:
    print(f"E = {e:5.2f}  weight {w:+.2f}")

###############################################################################
# The Laplace transform reproduces the product form.

for beta in (0.5, 2.0):
    z = sum(g * math.exp(-beta * e) for e, g in levels) * 2 * math.sinh(beta * 0.9 / 2)
    print(f"beta = {beta}: measure {m.laplace(beta):.15f}, product {z:.15f}")

###############################################################################
# Equally spaced levels at the oscillator frequency cancel pairwise.

m = single_oscillator_measure([(n + 0.5, 1.0) for n in range(4)], 1.0)
print("harmonic ladder:", m.atoms)
