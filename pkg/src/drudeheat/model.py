"""Drude bath: damping kernel, its Laplace transform and the root structure.

Units: hbar = k_B = M = 1.  ``omega_d = math.inf`` stands for the strict
ohmic limit, where the kernel degenerates to ``gamma_hat(z) = gamma``.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "BathSpec",
    "SystemSpec",
    "MatsubaraRoots",
    "gamma_hat",
    "gamma_hat_deriv",
    "gamma_hat_series",
    "kernel_time",
    "matsubara",
    "roots",
    "root_rates",
    "characteristic_modes",
    "validity_regime",
    "bath_mass",
    "DEGENERACY_TOL",
]

DEGENERACY_TOL = 1e-9

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BathSpec:
    """Drude environment ``gamma(t) = gamma * omega_d * exp(-omega_d t)``.

    Parameters
    ----------
    gamma : float
        Damping strength (> 0).
    omega_d : float
        Drude cutoff (> 0); ``math.inf`` selects the strict ohmic limit.
    """

    gamma: float
    omega_d: float

    def __post_init__(self):
        g, w = float(self.gamma), float(self.omega_d)
        if not (math.isfinite(g) and g > 0):
            raise ValueError(f"gamma must be finite and > 0, got {self.gamma!r}")
        if not (w > 0) or math.isnan(w):
            raise ValueError(f"omega_d must be > 0, got {self.omega_d!r}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "omega_d", w)

    @classmethod
    def from_ratio(cls, wd_over_gamma, gamma=1.0):
        """Bath with ``omega_d = wd_over_gamma * gamma``; ``inf`` or ``"ohmic"`` allowed."""
        if isinstance(wd_over_gamma, str):
            if wd_over_gamma.lower() != "ohmic":
                raise ValueError(f"unknown cutoff ratio {wd_over_gamma!r}")
            wd_over_gamma = math.inf
        return cls(gamma, float(wd_over_gamma) * gamma)

    @classmethod
    def strict_ohmic(cls, gamma):
        return cls(gamma, math.inf)

    @property
    def ohmic(self) -> bool:
        return math.isinf(self.omega_d)

    @property
    def ratio(self) -> float:
        """``gamma / omega_d``; values above 1 mark the anomalous regime."""
        return self.gamma / self.omega_d

    @property
    def anomalous(self) -> bool:
        return self.ratio > 1.0

    @property
    def discriminant(self) -> float:
        return 1.0 - 4.0 * self.ratio

    @property
    def degenerate(self) -> bool:
        return abs(self.discriminant) < DEGENERACY_TOL

    @property
    def underdamped(self) -> bool:
        """Complex roots / oscillating modes (``omega_d < 4 gamma``)."""
        return self.discriminant <= -DEGENERACY_TOL

    def require_finite_cutoff(self, what):
        if self.ohmic:
            raise ValueError(
                f"{what} is undefined in the strict ohmic limit: it diverges "
                "logarithmically in the cutoff frequency omega_D")


@dataclass(frozen=True)
class SystemSpec:
    """Free particle in a box of length ``box_ratio * L_D`` or an oscillator."""

    kind: str = "free"
    omega0: Optional[float] = None
    box_ratio: float = 1.0

    def __post_init__(self):
        if self.kind not in ("free", "oscillator"):
            raise ValueError(f"kind must be 'free' or 'oscillator', got {self.kind!r}")
        if (self.kind == "oscillator") != (self.omega0 is not None):
            raise ValueError("omega0 is required for, and only for, an oscillator")
        if self.omega0 is not None and not self.omega0 > 0:
            raise ValueError("omega0 must be > 0")
        if not self.box_ratio > 0:
            raise ValueError("box_ratio must be > 0")

    @classmethod
    def free_particle(cls, box_ratio=1.0):
        return cls("free", None, box_ratio)

    @classmethod
    def oscillator(cls, omega0):
        return cls("oscillator", float(omega0))


@dataclass(frozen=True)
class MatsubaraRoots:
    """Roots ``x1, x2`` of ``x**2 - (beta wD / 2pi) x + beta**2 gamma wD / 4pi**2``."""

    x1: complex
    x2: complex
    discriminant: float
    degenerate: bool = field(default=False)


def gamma_hat(bath, z):
    """Laplace transform ``gamma * omega_d / (z + omega_d)`` of the kernel."""
    z = np.asarray(z)
    if bath.ohmic:
        return np.full_like(z, bath.gamma, dtype=np.result_type(z, float))[()]
    den = z + bath.omega_d
    if np.any(den == 0):
        raise ZeroDivisionError("gamma_hat: pole at z = -omega_d")
    return (bath.gamma * bath.omega_d / den)[()]


def gamma_hat_deriv(bath, z):
    """``d gamma_hat / dz = -gamma omega_d / (z + omega_d)**2``."""
    z = np.asarray(z)
    if bath.ohmic:
        return np.zeros_like(z, dtype=np.result_type(z, float))[()]
    return (-bath.gamma * bath.omega_d / (z + bath.omega_d) ** 2)[()]


def gamma_hat_series(bath, order):
    """Taylor coefficients of ``gamma_hat`` at ``z = 0`` up to ``z**order``."""
    k = np.arange(order + 1)
    if bath.ohmic:
        return np.where(k == 0, bath.gamma, 0.0)
    return bath.gamma * (-1.0 / bath.omega_d) ** k


def kernel_time(bath, t):
    """Damping kernel ``gamma(t)`` for ``t >= 0``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("kernel_time: t must be >= 0")
    bath.require_finite_cutoff("the time-domain Drude kernel")
    return (bath.gamma * bath.omega_d * np.exp(-bath.omega_d * t))[()]


def matsubara(beta, n):
    """Bosonic Matsubara frequency ``nu_n = 2 pi n / beta``."""
    n = np.asarray(n)
    if np.any(n < 1):
        raise ValueError("matsubara: n must be >= 1")
    if not np.all(np.asarray(beta) > 0):
        raise ValueError("matsubara: beta must be > 0")
    return (TWO_PI * n / beta)[()]


def root_rates(bath):
    """Rates ``a1, a2`` with ``x_i = beta * a_i``.

    Real (``a1 >= a2 > 0``) for ``omega_d >= 4 gamma``; a complex-conjugate
    pair with ``a2 = conj(a1)`` and ``im(a1) > 0`` otherwise.  The smaller
    real root is formed from the product so it stays accurate when
    ``gamma << omega_d``.
    """
    bath.require_finite_cutoff("the Matsubara roots")
    s = bath.omega_d / TWO_PI
    p = bath.gamma * bath.omega_d / TWO_PI ** 2
    disc = bath.discriminant
    if abs(disc) < DEGENERACY_TOL:
        return 0.5 * s, 0.5 * s
    if disc > 0:
        a1 = 0.5 * s * (1.0 + math.sqrt(disc))
        return a1, p / a1
    a1 = 0.5 * s * complex(1.0, math.sqrt(-disc))
    return a1, a1.conjugate()


def roots(bath, beta):
    """Roots ``x_{1,2} = (beta wD / 4 pi)(1 +- sqrt(1 - 4 gamma / wD))``."""
    if not beta > 0:
        raise ValueError("roots: beta must be > 0")
    a1, a2 = root_rates(bath)
    return MatsubaraRoots(complex(beta * a1), complex(beta * a2),
                          bath.discriminant, bath.degenerate)


def characteristic_modes(bath):
    """Eigenvalues of the deterministic (q, v, z) system.

    Returns ``(s_plus, s_minus, 0.0)`` where ``s_pm`` solve
    ``s**2 + omega_d s + gamma omega_d = 0``.
    """
    bath.require_finite_cutoff("the three-variable Drude mode system")
    wd, g = bath.omega_d, bath.gamma
    disc = wd * wd - 4.0 * g * wd
    if abs(bath.discriminant) < DEGENERACY_TOL:
        return complex(-0.5 * wd), complex(-0.5 * wd), 0.0
    if disc > 0:
        # stable form: the small root from the product gamma * omega_d
        big = -0.5 * (wd + math.sqrt(disc))
        return complex(g * wd / big), complex(big), 0.0
    im = math.sqrt(-disc) / 2.0
    return complex(-0.5 * wd, im), complex(-0.5 * wd, -im), 0.0


def validity_regime(T, delta_e, threshold=1e-2):
    """True when the box level spacing is invisible: ``delta_e / T < threshold``."""
    if not T > 0 or delta_e < 0:
        raise ValueError("validity_regime: need T > 0 and delta_e >= 0")
    return delta_e / T < threshold


def bath_mass(bath):
    """Total bath mass ``M lim_{z->0} gamma_hat(z)/z``; infinite for Drude."""
    return math.inf if gamma_hat(bath, 0.0) > 0 else 0.0
