"""
Low-temperature C^Z for arbitrary damping kernels
==================================================

The leading low-temperature behaviour of ``C^Z`` follows from the Taylor
coefficients of the kernel's Laplace transform alone.  The sign of the linear
term is decided by ``gamma_hat'(0) + 1``.
"""

import math

import numpy as np

from drudeheat.model import BathSpec, gamma_hat_series
from drudeheat.thermo import (cz_negative_at_low_t, euler_maclaurin_cz,
                              free_particle_f, heat_cz, leading_cz_coefficient,
                              oscillator_f)

###############################################################################
# Drude kernel: compare the series with the closed form at a small temperature.

for r in (0.2, 5.0):
    bath = BathSpec.from_ratio(r)
    coeffs = free_particle_f(gamma_hat_series(bath, 10))
    T = 1e-3
    print(f"omega_D/gamma = {r}: exact {heat_cz(bath, T):.12e}")
    for order in (1, 2, 3):
        print(f"   order {order}: {euler_maclaurin_cz(coeffs, T, order):.12e}")

###############################################################################
# A kernel with two relaxation times.  Only its Taylor series is needed.

a, w1, c, w2 = 0.7, 0.3, 1.5, 4.0
k = np.arange(10)
g = a * (-1 / w1) ** k + c * (-1 / w2) ** k
print(f"\ntwo-pole kernel: gamma_hat(0) = {g[0]:.3f}, gamma_hat'(0) = {g[1]:.3f}")
print(f"   slope from the engine: {euler_maclaurin_cz(free_particle_f(g), 1.0, 1):.10f}")
print(f"   general formula:       {leading_cz_coefficient(g[0], g[1]):.10f}")
print(f"   negative C_Z at low T: {cz_negative_at_low_t(g[0], g[1])}")

###############################################################################
# A damped oscillator is gapped, so its linear term is always positive.

for w0 in (0.5, 2.0):
    slope = euler_maclaurin_cz(oscillator_f(g, w0), 1.0, 1)
    print(f"oscillator w0 = {w0}: slope {slope:.10f}, (pi/3) gh(0)/w0^2 = {math.pi / 3 * g[0] / w0**2:.10f}")
