"""Density of states of the damped free particle.

The reduced partition function is a Laplace transform,
``Z(beta) = int rho(E) exp(-beta E) dE``.  Shifting by the ground-state
energy ``U0`` gives ``Z exp(beta U0) -> c_inf`` as ``beta -> inf``, so ``rho``
has a delta of weight ``c_inf = box_ratio * sqrt(pi gamma / omega_d)`` at
``U0``.  That constant is split off and the remainder is inverted numerically.

Energies on the public grid are ``eps = (E - U0) / omega_d``.  ``rho`` is per
unit energy in natural units (hbar = M = 1, box length ``box_ratio * L_D``);
``rho_scaled = rho * omega_d / box_ratio`` is the dimensionless form used for
figures, in which the undamped density is ``eps**-1/2``.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import simpson

from . import laplace, specfun
from .model import TWO_PI, SystemSpec, characteristic_modes, root_rates

__all__ = [
    "InversionConfig",
    "SpectralDensityResult",
    "SignedSpectralMeasure",
    "PositivityReport",
    "ground_energy",
    "delta_weight",
    "shifted_partition",
    "invert_dos",
    "dos_low_energy_series",
    "undamped_dos",
    "single_oscillator_measure",
    "verify_positivity",
    "laplace_transform_density",
    "peak_energy_scale",
]

_FREE = SystemSpec.free_particle()
_METHODS = ("auto", "talbot", "hyperbolic", "stehfest")


@dataclass(frozen=True)
class InversionConfig:
    """Choice of inversion method.

    ``method="auto"`` takes fixed Talbot when the Matsubara roots are real and
    the hyperbolic contour when they are complex (``omega_d < 4 gamma``), where
    the Gamma-function poles of ``Z`` leave the negative real axis.  ``check``
    names a second method run on the same grid; points where the two differ
    by more than 1e-2 are flagged as unreliable.  With ``shift=False`` the
    function ``Z(beta) - c_inf exp(-beta U0)`` is inverted at ``E`` instead of
    its shifted counterpart at ``E - U0``.
    """

    method: str = "auto"
    nodes: Optional[int] = None
    shift: bool = True
    check: Optional[str] = "stehfest"

    def __post_init__(self):
        for m in (self.method, self.check):
            if m is not None and m not in _METHODS:
                raise ValueError(f"unknown inversion method {m!r}")
        n = self.nodes
        if n is None:
            return
        if self.method == "talbot" and not 16 <= n <= 128:
            raise ValueError("Talbot nodes must be in [16, 128]")
        if self.method == "stehfest" and (n % 2 or not 8 <= n <= 18):
            raise ValueError("Stehfest order must be even and in [8, 18]")
        if self.method in ("hyperbolic", "auto") and n < 16:
            raise ValueError("contour inversions need at least 16 nodes")


@dataclass(frozen=True)
class SpectralDensityResult:
    """Continuous part of the density of states on an energy grid.

    Attributes
    ----------
    energies : ndarray
        ``(E - U0) / omega_d``, all > 0.
    rho : ndarray
        Continuous density per unit energy; may be negative.
    delta_weight : float
        Weight ``c_inf`` of the delta function at ``U0``.
    u0 : float
        Ground-state energy.
    omega_d, box_ratio : float
        Parameters needed to rescale ``rho``.
    method : str
        Method actually used for ``rho``.
    rho_check : ndarray or None
        Same quantity from the check method.
    unreliable : ndarray of bool
        Points where the two methods disagree by more than 1e-2.
    """

    energies: np.ndarray
    rho: np.ndarray
    delta_weight: float
    u0: float
    omega_d: float
    box_ratio: float = 1.0
    method: str = "talbot"
    rho_check: Optional[np.ndarray] = None
    unreliable: np.ndarray = field(default=None)

    @property
    def rho_scaled(self):
        return self.rho * self.omega_d / self.box_ratio

    @property
    def negative(self):
        return self.rho < 0


@dataclass(frozen=True)
class SignedSpectralMeasure:
    """Finite sum of weighted delta functions ``sum_k w_k delta(E - E_k)``."""

    atoms: tuple

    def laplace(self, beta):
        """``sum_k w_k exp(-beta E_k)``."""
        beta = np.asarray(beta)
        e = np.array([a[0] for a in self.atoms], dtype=float)
        w = np.array([a[1] for a in self.atoms], dtype=float)
        return (np.exp(-np.multiply.outer(beta, e)) @ w)[()]

    @property
    def energies(self):
        return np.array([a[0] for a in self.atoms])

    @property
    def weights(self):
        return np.array([a[1] for a in self.atoms])


@dataclass(frozen=True)
class PositivityReport:
    """Maximal runs of the grid on which ``rho < 0``, as ``(eps_lo, eps_hi)``."""

    negative_intervals: list
    min_rho: float

    @property
    def admissible(self):
        return not self.negative_intervals


def ground_energy(bath):
    """Ground-state energy ``U0 = sum_i (w_i / 2pi) ln(omega_d / w_i)``, ``w_i = 2 pi a_i``."""
    bath.require_finite_cutoff("the ground-state energy")
    a_d = bath.omega_d / TWO_PI
    if bath.degenerate:
        return a_d * math.log(2.0)
    a1, a2 = root_rates(bath)
    if isinstance(a1, complex):
        return 2.0 * (a1 * np.log(a_d / a1)).real
    return a1 * math.log(a_d / a1) + a2 * math.log(a_d / a2)


def delta_weight(system, bath):
    """``c_inf = box_ratio * sqrt(pi gamma / omega_d)``."""
    bath.require_finite_cutoff("the delta weight")
    return system.box_ratio * math.sqrt(math.pi * bath.gamma / bath.omega_d)


def _excess(system, bath, beta):
    """``Z(beta) exp(beta U0) - c_inf`` anywhere off the singularities.

    Where ``ln(beta a_i) = ln(beta) + ln(a_i)`` holds for the principal logs,
    the exact form ``c_inf * expm1(R(x1) + R(x2) - R(y))`` with the Stirling
    remainder ``R`` is used, which has no cancellation at large ``beta``.
    """
    beta = np.atleast_1d(np.asarray(beta, dtype=complex))
    a1, a2 = root_rates(bath)
    a_d = bath.omega_d / TWO_PI
    c = delta_weight(system, bath)
    x1, x2, y = beta * a1, beta * a2, beta * a_d
    out = np.empty_like(beta)
    split = np.abs(np.angle(beta)) + abs(np.angle(a1)) < math.pi - 1e-9
    r = specfun.stirling_remainder1p
    out[split] = c * np.expm1(r(x1[split]) + r(x2[split]) - r(y[split]))
    rest = ~split
    if np.any(rest):
        b = beta[rest]
        lg = specfun.log_gamma_any
        ln = (math.log(system.box_ratio) + 0.5 * np.log(math.pi / (b * bath.omega_d))
              + lg(1.0 + x1[rest]) + lg(1.0 + x2[rest]) - lg(1.0 + y[rest])
              + b * ground_energy(bath))
        out[rest] = np.exp(ln) - c
    return out


def shifted_partition(system, bath, beta):
    """``Z(beta) exp(beta U0)`` for real or complex ``beta`` with ``re(beta) > 0``."""
    if system.kind != "free":
        raise ValueError("shifted_partition: only the free particle is implemented")
    arr = np.asarray(beta)
    if np.any(np.real(arr) <= 0):
        raise ValueError("shifted_partition: requires re(beta) > 0")
    val = _excess(system, bath, arr) + delta_weight(system, bath)
    val = val.reshape(arr.shape)
    if not np.iscomplexobj(arr):
        val = val.real
    return val[()]


def _select(method, bath):
    if method != "auto":
        return method
    return "hyperbolic" if bath.underdamped else "talbot"


def _invert_one(method, nodes, F, t, delta, F_real):
    if method == "talbot":
        return laplace.talbot(F, t, nodes or 32)
    if method == "hyperbolic":
        return laplace.hyperbolic(F, t, delta, nodes)
    return laplace.stehfest(F_real, t, nodes or 14)


def _run(method, nodes, system, bath, eps, shift):
    a1, _ = root_rates(bath)
    delta = abs(float(np.angle(a1)))
    u0 = ground_energy(bath)
    if shift:
        F = lambda b: _excess(system, bath, b)
        offset = 0.0
    else:
        # Z(beta) - c_inf exp(-beta U0), inverted at the absolute energy
        F = lambda b: np.exp(-np.asarray(b) * u0) * _excess(system, bath, b)
        offset = u0
        if offset < 0:
            raise ValueError("shift=False needs U0 >= 0")

    def F_real(b):
        return F(np.asarray(b, dtype=float)).real

    # chunks keep the (n_t, n_nodes) work arrays small
    t = eps * bath.omega_d + offset
    parts = [_invert_one(method, nodes, F, t[i:i + 256], delta, F_real)
             for i in range(0, len(t), 256)]
    return np.concatenate(parts)


def invert_dos(system, bath, grid, cfg=InversionConfig()):
    """Continuous density of states on ``grid`` of ``(E - U0) / omega_d`` values.

    Raises
    ------
    ValueError
        If a grid point is not strictly above ``U0``.
    """
    if system.kind != "free":
        raise ValueError("invert_dos: only the free particle is implemented")
    bath.require_finite_cutoff("the density of states")
    eps = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any(~(eps > 0)) or np.any(~np.isfinite(eps)):
        raise ValueError("invert_dos: grid points must satisfy E > U0 strictly")
    method = _select(cfg.method, bath)
    rho = _run(method, cfg.nodes, system, bath, eps, cfg.shift)
    rho_check = None
    unreliable = np.zeros(len(eps), dtype=bool)
    if cfg.check is not None:
        check = _select(cfg.check, bath)
        if check != method:
            rho_check = _run(check, None, system, bath, eps, cfg.shift)
            scale = np.maximum(np.abs(rho), 1e-2 * np.max(np.abs(rho)))
            unreliable = ~(np.abs(rho - rho_check) <= 1e-2 * scale)
    return SpectralDensityResult(
        energies=eps,
        rho=rho,
        delta_weight=delta_weight(system, bath),
        u0=ground_energy(bath),
        omega_d=bath.omega_d,
        box_ratio=system.box_ratio,
        method=method,
        rho_check=rho_check,
        unreliable=unreliable,
    )


def dos_low_energy_series(bath, eps, system=_FREE):
    """Two-term low-energy series of the continuous density.

    ``rho ~ (c_inf / omega_d) [A + (A**2 / 2) eps]`` with
    ``A = (pi/6)(omega_d/gamma - 1)`` and ``eps = (E - U0)/omega_d``.
    """
    eps = np.asarray(eps, dtype=float)
    if np.any(~((eps > 0) & (eps < 0.5))):
        raise ValueError("dos_low_energy_series: needs 0 < (E - U0)/omega_d < 0.5")
    a = math.pi / 6.0 * (bath.omega_d / bath.gamma - 1.0)
    return (delta_weight(system, bath) / bath.omega_d * (a + 0.5 * a * a * eps))[()]


def undamped_dos(system, omega_d, energy):
    """Free-particle density ``box_ratio / sqrt(omega_d E)`` (box length ``box_ratio * L_D``)."""
    energy = np.asarray(energy, dtype=float)
    if np.any(energy <= 0):
        raise ValueError("undamped_dos: energy must be > 0")
    return (system.box_ratio / np.sqrt(omega_d * energy))[()]


def laplace_transform_density(result, beta):
    """``c_inf + int rho(U0 + e) exp(-beta e) de`` on the result's grid.

    The density is taken constant between ``E = U0`` and the first grid point;
    the integral is truncated at the last one.
    """
    e = result.energies * result.omega_d
    out = []
    for b in np.atleast_1d(beta):
        w = result.rho * np.exp(-b * e)
        head = result.rho[0] * (1.0 - math.exp(-b * e[0])) / b
        out.append(result.delta_weight + head + simpson(w, x=e))
    out = np.array(out)
    return out[0] if np.ndim(beta) == 0 else out


def peak_energy_scale(bath):
    """``|im s|`` of the oscillating bath mode in units of ``omega_d`` (0 if overdamped)."""
    s_plus, _, _ = characteristic_modes(bath)
    return abs(s_plus.imag) / bath.omega_d


def single_oscillator_measure(levels, omega, tol=1e-12):
    """Signed spectral measure of a system coupled to one bath oscillator.

    Each level ``(E_n, g_n)`` yields ``+g_n`` at ``E_n - omega/2`` and
    ``-g_n`` at ``E_n + omega/2``.  Atoms closer than ``tol * (1 + |E|)`` are
    merged by adding their weights; exact cancellations are dropped.
    """
    levels = list(levels)
    if not levels:
        raise ValueError("single_oscillator_measure: empty level list")
    if not omega > 0:
        raise ValueError("omega must be > 0")
    raw = []
    for e, g in levels:
        if not g > 0:
            raise ValueError("degeneracies g_n must be > 0")
        raw.append((float(e) - 0.5 * omega, float(g)))
        raw.append((float(e) + 0.5 * omega, -float(g)))
    raw.sort(key=lambda a: a[0])
    merged = []
    for e, w in raw:
        if merged and abs(e - merged[-1][0]) <= tol * (1.0 + abs(e)):
            merged[-1][1] += w
        else:
            merged.append([e, w])
    return SignedSpectralMeasure(tuple((e, w) for e, w in merged if w != 0.0))


def verify_positivity(result, atol=0.0):
    """Report the energy intervals on which the continuous density is negative."""
    rho = np.asarray(result.rho)
    eps = np.asarray(result.energies)
    neg = rho < -atol
    intervals = []
    i = 0
    while i < len(rho):
        if neg[i]:
            j = i
            while j + 1 < len(rho) and neg[j + 1]:
                j += 1
            intervals.append((float(eps[i]), float(eps[j])))
            i = j + 1
        else:
            i += 1
    return PositivityReport(intervals, float(rho.min()) if len(rho) else 0.0)
