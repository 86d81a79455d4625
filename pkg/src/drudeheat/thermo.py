"""Equilibrium thermodynamics of the Drude-damped free particle.

Two routes are implemented side by side:

* energy route: ``E = <H_S>`` and ``C^E = dE/dT``;
* partition-function route: ``ln Z``, ``U = -d ln Z / d beta``,
  ``S = ln Z + beta U`` and ``C^Z = dU/dT``.

Closed forms use the Matsubara roots ``x_i = beta * a_i`` of
:func:`drudeheat.model.root_rates` and ``y = beta * omega_d / 2 pi``.  The
``*_oracle`` functions evaluate the original Matsubara sums and product term
by term from :func:`~drudeheat.model.gamma_hat` and serve as independent
checks.  Everything accepts array-valued ``beta``/``T`` unless noted.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import specfun
from .model import (
    TWO_PI,
    SystemSpec,
    gamma_hat,
    gamma_hat_deriv,
    root_rates,
)

__all__ = [
    "ThermoPoint",
    "SumConfig",
    "energy_E",
    "heat_ce",
    "log_partition",
    "internal_U",
    "heat_cz",
    "entropy",
    "free_energy",
    "thermo_point",
    "energy_sum_oracle",
    "heat_ce_sum_oracle",
    "internal_U_sum_oracle",
    "log_partition_product_oracle",
    "log_derivative",
    "heat_cz_from_entropy",
    "internal_U_from_log_partition",
    "free_particle_f",
    "oscillator_f",
    "em_function",
    "euler_maclaurin_cz",
    "leading_cz_coefficient",
    "cz_negative_at_low_t",
    "asymptotics",
]

_FREE = SystemSpec.free_particle()


@dataclass(frozen=True)
class ThermoPoint:
    """All equilibrium quantities at one temperature (hbar = k_B = M = 1)."""

    T: float
    E: float
    U: float
    C_E: float
    C_Z: float
    S: float
    F: float
    lnZ: float


@dataclass(frozen=True)
class SumConfig:
    """Truncation of the Matsubara-sum oracles.

    ``n_terms`` terms are summed explicitly; the remainder is estimated by
    the midpoint Euler-Maclaurin formula: the tail integral alone
    (``tail_order=0``), plus the first derivative correction (1), plus the
    third-derivative correction (2).
    """

    n_terms: int = 100_000
    tail_order: int = 2

    def __post_init__(self):
        if self.n_terms < 1000:
            raise ValueError("SumConfig.n_terms must be >= 1000")
        if self.tail_order not in (0, 1, 2):
            raise ValueError("SumConfig.tail_order must be 0, 1 or 2")


# --- closed forms ---------------------------------------------------------

def _xs(bath, beta):
    a1, a2 = root_rates(bath)
    beta = np.asarray(beta, dtype=float)
    if np.any(beta <= 0):
        raise ValueError("beta must be > 0")
    return beta * a1, beta * a2, beta * (bath.omega_d / TWO_PI)


def _beta(T):
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise ValueError("temperature must be > 0")
    return 1.0 / T


def _real(v):
    v = np.real(v)
    return v[()] if np.ndim(v) == 0 else v


def _h(x):
    """``x psi'(x) - 1 - 1/(2x)``, free of cancellation for large ``|x|``."""
    x = np.atleast_1d(np.asarray(x))
    out = np.empty_like(x, dtype=complex)
    big = np.abs(x) >= 15.0
    xb = x[big]
    xi2 = 1.0 / (xb * xb)
    out[big] = xi2 * specfun._poly_inv(specfun._B, xi2)
    xs = x[~big]
    out[~big] = xs * specfun.trigamma(xs) - 1.0 - 0.5 / xs
    return out


def _dh(x):
    """Derivative of :func:`_h`."""
    x = np.atleast_1d(np.asarray(x))
    out = np.empty_like(x, dtype=complex)
    big = np.abs(x) >= 15.0
    xb = x[big]
    xi = 1.0 / xb
    xi2 = xi * xi
    out[big] = -xi * xi2 * specfun._poly_inv(2 * specfun._K * specfun._B, xi2)
    xs = x[~big]
    out[~big] = (specfun.trigamma(xs) + xs * specfun.tetragamma(xs)
                 + 0.5 / (xs * xs))
    return out


def energy_E(bath, beta):
    """System energy ``<H_S> = <p**2>/2`` in the coupled equilibrium state."""
    bath.require_finite_cutoff("E = <H_S>")
    x1, x2, _ = _xs(bath, beta)
    if bath.degenerate:
        inner = x1 * x1 * specfun.trigamma(x1)
    else:
        inner = x1 * x2 * (specfun.digamma(x1) - specfun.digamma(x2)) / (x1 - x2)
    return _real((inner - 0.5) / np.asarray(beta, dtype=float))


def heat_ce(bath, T):
    """Specific heat ``C^E / k_B`` of the energy route.

    Handles the strict ohmic limit with the exact trigamma expression,
    including the ``-gamma / 2 pi T`` term that keeps it finite as T -> 0.
    """
    beta = _beta(T)
    if bath.ohmic:
        u = beta * bath.gamma / TWO_PI
        # u**2 psi'(u) - u - 1/2 = u * h(u)
        return _real(u * _h(u).reshape(np.shape(u)))
    x1, x2, _ = _xs(bath, beta)
    shape = np.shape(x1)
    if bath.degenerate:
        return _real(-x1 * x1 * _dh(x1).reshape(shape))
    h1 = _h(x1).reshape(shape)
    h2 = _h(x2).reshape(shape)
    return _real(x1 * x2 * (h2 - h1) / (x1 - x2))


def log_partition(system, bath, beta):
    """``ln Z`` of the damped free particle, gamma-function form.

    ``Z = box_ratio * sqrt(pi / (beta wD)) * Gamma(1+x1) Gamma(1+x2) / Gamma(1+y)``,
    i.e. the box length is ``L = box_ratio * L_D`` with ``L_D = (2 wD)**-1/2``.
    """
    if system.kind != "free":
        raise ValueError("log_partition: only the free particle is implemented")
    bath.require_finite_cutoff("the reduced partition function")
    x1, x2, y = _xs(bath, beta)
    beta = np.asarray(beta, dtype=float)
    ln_z0 = math.log(system.box_ratio) + 0.5 * np.log(math.pi / (beta * bath.omega_d))
    return _real(ln_z0 + specfun.log_gamma1p(x1) + specfun.log_gamma1p(x2)
                 - specfun.log_gamma1p(y))


def internal_U(bath, beta):
    """Internal energy ``U = -d ln Z / d beta`` (Drude closed form)."""
    bath.require_finite_cutoff("the internal energy U")
    x1, x2, y = _xs(bath, beta)
    beta = np.asarray(beta, dtype=float)
    val = (y * specfun.digamma(y) - x1 * specfun.digamma(x1)
           - x2 * specfun.digamma(x2) - 0.5) / beta
    return _real(val)


def heat_cz(bath, T):
    """Specific heat ``C^Z / k_B`` of the partition-function route.

    In the strict ohmic limit this coincides with :func:`heat_ce`.
    """
    if bath.ohmic:
        return heat_ce(bath, T)
    x1, x2, y = _xs(bath, _beta(T))
    shape = np.shape(x1)
    # x**2 psi'(x) - x - 1/2 = x h(x); the linear and constant parts cancel
    val = (x1 * _h(x1).reshape(shape) + x2 * _h(x2).reshape(shape)
           - y * _h(y).reshape(shape))
    return _real(val)


def entropy(bath, T, system=_FREE):
    """``S / k_B = ln Z + beta U``; the additive constant depends on the box."""
    beta = _beta(T)
    return _real(log_partition(system, bath, beta) + beta * internal_U(bath, beta))


def free_energy(bath, T, system=_FREE):
    """``F = -T ln Z``."""
    return _real(-np.asarray(T, dtype=float) * log_partition(system, bath, _beta(T)))


def thermo_point(bath, T, system=_FREE):
    beta = 1.0 / T
    ln_z = float(log_partition(system, bath, beta))
    u = float(internal_U(bath, beta))
    return ThermoPoint(
        T=float(T),
        E=float(energy_E(bath, beta)),
        U=u,
        C_E=float(heat_ce(bath, T)),
        C_Z=float(heat_cz(bath, T)),
        S=ln_z + beta * u,
        F=-T * ln_z,
        lnZ=ln_z,
    )


# --- Matsubara sum / product oracles --------------------------------------

def _fd_derivative(fun, x, order, rel_step):
    h = rel_step * x
    if order == 1:
        return (fun(x - 2 * h) - 8 * fun(x - h) + 8 * fun(x + h) - fun(x + 2 * h)) / (12 * h)
    # third derivative, 4th-order accurate central stencil
    return (-fun(x - 3 * h) + 8 * fun(x - 2 * h) - 13 * fun(x - h)
            + 13 * fun(x + h) - 8 * fun(x + 2 * h) + fun(x + 3 * h)) / (8 * h ** 3)


def _matsubara_sum(term, beta, cfg):
    """``sum_{n>=1} term(nu_n)`` with an Euler-Maclaurin tail."""
    q = TWO_PI / beta
    n_max = cfg.n_terms
    chunk = 1 << 20
    partial = []
    for start in range(1, n_max + 1, chunk):
        n = np.arange(start, min(start + chunk, n_max + 1), dtype=float)
        partial.append(float(np.sum(term(q * n))))
    head = math.fsum(partial)

    x0 = n_max + 0.5
    f = lambda x: float(term(q * np.asarray(x, dtype=float)))
    # x = x0/u maps the tail onto (0, 1]; terms decay like 1/x**2 so the
    # transformed integrand stays finite at u = 0
    g = lambda u: f(x0 / u) * x0 / (u * u)
    tail, _ = quad(g, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    # midpoint rule: f(n) = int_{n-1/2}^{n+1/2} f - f''(n)/24 + 7 f''''(n)/5760 - ...
    if cfg.tail_order >= 1:
        tail += _fd_derivative(f, x0, 1, 1e-3) / 24.0
    if cfg.tail_order >= 2:
        tail -= 7.0 * _fd_derivative(f, x0, 3, 2e-2) / 5760.0
    return head + tail


def _scalar_beta(beta):
    beta = float(beta)
    if not beta > 0:
        raise ValueError("beta must be > 0")
    return beta


def energy_sum_oracle(bath, beta, cfg=SumConfig()):
    """``E = (1/2 beta) [1 + 2 sum_n gh(nu_n) / (nu_n + gh(nu_n))]`` by direct summation."""
    bath.require_finite_cutoff("the Matsubara sum for E")
    beta = _scalar_beta(beta)

    def term(nu):
        g = gamma_hat(bath, nu)
        return g / (nu + g)

    return (1.0 + 2.0 * _matsubara_sum(term, beta, cfg)) / (2.0 * beta)


def heat_ce_sum_oracle(bath, T, cfg=SumConfig()):
    """Term-wise differentiated Matsubara sum for ``C^E / k_B``."""
    if bath.ohmic:
        raise ValueError(
            "heat_ce_sum_oracle: for strictly ohmic damping the sum for E does "
            "not converge, so derivatives should not be taken term-by-term")
    beta = _scalar_beta(1.0 / T)

    def term(nu):
        g = gamma_hat(bath, nu)
        return (g * g + nu * nu * gamma_hat_deriv(bath, nu)) / (nu + g) ** 2

    return 0.5 + _matsubara_sum(term, beta, cfg)


def internal_U_sum_oracle(bath, beta, cfg=SumConfig()):
    """``U = (1/2 beta)[1 + 2 sum_n (gh - nu gh') / (nu + gh)]`` by direct summation."""
    bath.require_finite_cutoff("the Matsubara sum for U")
    beta = _scalar_beta(beta)

    def term(nu):
        g = gamma_hat(bath, nu)
        return (g - nu * gamma_hat_deriv(bath, nu)) / (nu + g)

    return (1.0 + 2.0 * _matsubara_sum(term, beta, cfg)) / (2.0 * beta)


def log_partition_product_oracle(system, bath, beta, cfg=SumConfig()):
    """``ln Z`` from the infinite product over ``nu_n / (nu_n + gh(nu_n))``."""
    if system.kind != "free":
        raise ValueError("only the free particle is implemented")
    bath.require_finite_cutoff("the fluctuation-determinant product")
    beta = _scalar_beta(beta)

    def term(nu):
        return -np.log1p(gamma_hat(bath, nu) / nu)

    ln_z0 = math.log(system.box_ratio) + 0.5 * math.log(math.pi / (beta * bath.omega_d))
    return ln_z0 + _matsubara_sum(term, beta, cfg)


# --- numerical thermodynamic derivatives ----------------------------------

def log_derivative(fun, x, rel_step=1e-4):
    """``d fun / d ln x`` from a 5-point central stencil in ``ln x``."""
    x = np.asarray(x, dtype=float)
    h = rel_step
    return (fun(x * math.exp(-2 * h)) - 8 * fun(x * math.exp(-h))
            + 8 * fun(x * math.exp(h)) - fun(x * math.exp(2 * h))) / (12 * h)


def heat_cz_from_entropy(bath, T, rel_step=1e-4):
    """``C^Z = T dS/dT`` evaluated numerically from :func:`entropy`."""
    return log_derivative(lambda t: entropy(bath, t), T, rel_step)


def internal_U_from_log_partition(bath, beta, rel_step=1e-4):
    """``U = -d ln Z / d beta`` evaluated numerically from :func:`log_partition`."""
    dlnz = log_derivative(lambda b: log_partition(_FREE, bath, b), beta, rel_step)
    return -dlnz / np.asarray(beta, dtype=float)


# --- Euler-Maclaurin low-temperature expansion ----------------------------

def _series_div(num, den):
    out = np.zeros(len(num))
    for k in range(len(num)):
        acc = num[k] - np.dot(den[1:k + 1], out[k - 1::-1][:k]) if k else num[0]
        out[k] = acc / den[0]
    return out


def free_particle_f(ghat):
    """Taylor coefficients of ``f(x) = (gh(x) - x gh'(x)) / (x + gh(x))``.

    ``ghat`` holds the Taylor coefficients of the kernel's Laplace transform
    at zero; any kernel works, not only Drude.
    """
    c = np.asarray(ghat, dtype=float)
    k = np.arange(len(c))
    num = (1 - k) * c
    den = c.copy()
    den[1] += 1.0
    return _series_div(num, den)


def oscillator_f(ghat, omega0):
    """Taylor coefficients of ``(2 w0**2 + x gh - x**2 gh') / (w0**2 + x gh + x**2)``."""
    c = np.asarray(ghat, dtype=float)
    n = len(c)
    k = np.arange(n)
    c_prev = np.concatenate(([0.0], c[:-1]))
    w2 = omega0 * omega0
    num = (2 - k) * c_prev
    num[0] += 2 * w2
    den = c_prev.copy()
    den[0] += w2
    den[2] += 1.0
    return _series_div(num, den)


def em_function(bath, system=_FREE):
    """The summand ``f(x)`` of the internal-energy sum as a callable on ``x >= 0``."""
    def f(x):
        g = gamma_hat(bath, x)
        dg = gamma_hat_deriv(bath, x)
        if system.kind == "free":
            return (g - x * dg) / (x + g)
        w2 = system.omega0 ** 2
        return (2 * w2 + x * g - x * x * dg) / (w2 + x * g + x * x)
    return f


def _fornberg_one_sided(kmax, h, npts):
    # weights for derivatives 0..kmax at x=0 from samples at 0, h, ..., (npts-1)h
    x = h * np.arange(npts)
    c = np.zeros((npts, kmax + 1))
    c1 = 1.0
    c4 = x[0]
    c[0, 0] = 1.0
    for i in range(1, npts):
        mn = min(i, kmax)
        c2 = 1.0
        c5 = c4
        c4 = x[i]
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return x, c


def euler_maclaurin_cz(f, T, order=1, h=None):
    """Low-temperature series for ``C^Z / k_B`` from the Euler-Maclaurin formula.

    ``C^Z = sum_{n=1}^{order} B_2n / (2n-1)! (2 pi T)**(2n-1) [f^(2n-1)(inf) - f^(2n-1)(0)]``
    with the derivatives at infinity set to zero.

    Parameters
    ----------
    f : array_like or callable
        Taylor coefficients of ``f`` at zero (exact), or a callable whose odd
        derivatives at zero are estimated with one-sided finite differences.
    T : float or array_like
        Temperature.
    order : int
        Number of terms, at most 5.
    h : float, optional
        Finite-difference step for callable ``f`` (default 1e-2); it must be
        small compared with the scale on which ``f`` varies.
    """
    if not 1 <= order <= 5:
        raise ValueError("euler_maclaurin_cz: order must be in 1..5")
    kmax = 2 * order - 1
    if callable(f):
        h = 1e-2 if h is None else h
        x, w = _fornberg_one_sided(kmax, h, kmax + 8)
        fx = np.array([float(f(v)) for v in x])
        derivs = fx @ w
    else:
        coef = np.asarray(f, dtype=float)
        if len(coef) <= kmax:
            raise ValueError(f"need at least {kmax + 1} Taylor coefficients")
        derivs = np.array([math.factorial(k) * coef[k] for k in range(kmax + 1)])
    T = np.asarray(T, dtype=float)
    out = np.zeros_like(T)
    for n in range(1, order + 1):
        k = 2 * n - 1
        out = out + (specfun.bernoulli(2 * n) / math.factorial(k)
                     * (TWO_PI * T) ** k * (0.0 - derivs[k]))
    return out[()] if out.ndim == 0 else out


def leading_cz_coefficient(ghat0, ghat_deriv0):
    """Coefficient of ``T`` in ``C^Z`` for a general kernel: ``(pi/3)(1 + gh'(0))/gh(0)``."""
    return math.pi / 3.0 * (1.0 + ghat_deriv0) / ghat0


def cz_negative_at_low_t(ghat0, ghat_deriv0):
    """True when the leading ``C^Z`` term is negative, i.e. ``gh'(0) < -1``."""
    if not ghat0 > 0:
        raise ValueError("gamma_hat(0) must be > 0 (ohmic at low frequency)")
    return leading_cz_coefficient(ghat0, ghat_deriv0) < 0


# --- printed asymptotic series --------------------------------------------

def asymptotics(bath, T, which):
    """Truncated high/low-temperature series for ``C^E`` and ``C^Z``.

    ``which`` is one of ``"CE_high"``, ``"CE_low"``, ``"CZ_high"``, ``"CZ_low"``.
    """
    T = np.asarray(T, dtype=float)
    g = bath.gamma
    r = bath.ratio  # gamma / omega_d, zero in the ohmic limit
    t = T / g
    if which == "CE_high":
        return 0.5 - g * bath.omega_d / (24.0 * T * T)
    if which == "CZ_high":
        return 0.5 - g * bath.omega_d / (12.0 * T * T)
    if which == "CE_low":
        return math.pi / 3 * t - 4 * math.pi ** 3 / 15 * t ** 3 * (1 - 2 * r)
    if which == "CZ_low":
        return (math.pi / 3 * t * (1 - r)
                - 4 * math.pi ** 3 / 15 * t ** 3 * (1 - 3 * r - r ** 3))
    raise ValueError(f"unknown asymptotic series {which!r}")
