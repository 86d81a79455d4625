"""Gamma-family special functions on the right half-plane.

All evaluators accept scalars or arrays, real or complex.  Real input gives
real output.  The strategy is the usual one: shift the argument upward with
the recurrence until ``|z| >= 15`` and finish with the Stirling-type series.
``log_gamma`` additionally uses the Taylor series of ``lnGamma(1 + x)`` close
to ``z = 1`` and ``z = 2`` so that the zeros there keep full relative accuracy.

Values for ``im(z) < 0`` are obtained by conjugating the result at ``conj(z)``,
which makes ``f(conj z) == conj f(z)`` hold bit for bit.
"""
from fractions import Fraction

import numpy as np
from scipy.special import zeta as _zeta

__all__ = [
    "DomainError",
    "bernoulli",
    "log_gamma",
    "log_gamma1p",
    "digamma",
    "trigamma",
    "tetragamma",
    "stirling_remainder1p",
]

EULER_GAMMA = 0.57721566490153286061
_HALF_LOG_2PI = 0.91893853320467274178

# Recurrence target: |z| >= _SHIFT before the asymptotic series is used.
_SHIFT = 15.0
_N_ASYMP = 10

_BERNOULLI = {
    2: Fraction(1, 6),
    4: Fraction(-1, 30),
    6: Fraction(1, 42),
    8: Fraction(-1, 30),
    10: Fraction(5, 66),
    12: Fraction(-691, 2730),
    14: Fraction(7, 6),
    16: Fraction(-3617, 510),
    18: Fraction(43867, 798),
    20: Fraction(-174611, 330),
    22: Fraction(854513, 138),
    24: Fraction(-236364091, 2730),
    26: Fraction(8553103, 6),
    28: Fraction(-23749461029, 870),
    30: Fraction(8615841276005, 14322),
}

_B = np.array([float(_BERNOULLI[2 * k]) for k in range(1, _N_ASYMP + 1)])
_K = np.arange(1, _N_ASYMP + 1)
_LG_COEF = _B / (2 * _K * (2 * _K - 1))
_PSI_COEF = _B / (2 * _K)

# lnGamma(1+x) = -gamma_E x + sum_{k>=2} (-1)^k zeta(k) x^k / k, |x| < 1
_N_TAYLOR = 56
_LG1P_COEF = np.empty(_N_TAYLOR + 1)
_LG1P_COEF[0] = 0.0
_LG1P_COEF[1] = -EULER_GAMMA
_kk = np.arange(2, _N_TAYLOR + 1)
_LG1P_COEF[2:] = (-1.0) ** _kk * _zeta(_kk.astype(float), 1.0) / _kk
_TAYLOR_RADIUS = 0.5


class DomainError(ValueError):
    """Argument outside the supported domain ``re(z) > 0``."""


def bernoulli(n):
    """Return the Bernoulli number ``B_n`` for even ``2 <= n <= 30``."""
    if not isinstance(n, (int, np.integer)) or n % 2 or not 2 <= n <= 30:
        raise ValueError(f"bernoulli: unsupported index {n!r} (even, 2..30)")
    return float(_BERNOULLI[int(n)])


def _prepare(z, name):
    z = np.asarray(z)
    real_input = not np.iscomplexobj(z)
    w = z.astype(complex)
    if np.any(~np.isfinite(w)):
        raise DomainError(f"{name}: non-finite argument")
    if np.any(w.real <= 0):
        raise DomainError(f"{name}: requires re(z) > 0")
    flip = w.imag < 0
    w = np.where(flip, w.conj(), w)
    return w, flip, real_input


def _finish(out, flip, real_input):
    out = np.where(flip, out.conj(), out)
    if real_input:
        out = out.real
    return out[()] if out.ndim == 0 else out


def _shifts(w):
    n = np.where(np.abs(w) < _SHIFT, np.ceil(_SHIFT - w.real), 0.0)
    return np.maximum(n, 0).astype(int)


def _poly_inv(coef, zinv2):
    # sum_k coef[k-1] * zinv2**(k-1), Horner
    acc = np.zeros_like(zinv2)
    for c in coef[::-1]:
        acc = acc * zinv2 + c
    return acc


def _lg_core(w):
    """lnGamma on the closed upper-right quadrant, no Taylor branches."""
    n = _shifts(w)
    acc = np.zeros_like(w)
    for j in range(int(n.max(initial=0))):
        m = j < n
        acc[m] += np.log(w[m] + j)
    s = w + n
    si = 1.0 / s
    series = si * _poly_inv(_LG_COEF, si * si)
    return (s - 0.5) * np.log(s) - s + _HALF_LOG_2PI + series - acc


def _lg1p_taylor(x):
    acc = np.zeros_like(x)
    for c in _LG1P_COEF[::-1]:
        acc = acc * x + c
    return acc


def log_gamma(z):
    """Principal branch of ``lnGamma(z)`` for ``re(z) > 0``.

    The branch is the analytic continuation from the positive real axis,
    i.e. the one returned by ``scipy.special.loggamma``.
    """
    w, flip, real_input = _prepare(z, "log_gamma")
    w = np.atleast_1d(w)
    out = np.empty_like(w)
    near1 = np.abs(w - 1.0) < _TAYLOR_RADIUS
    near2 = np.abs(w - 2.0) < _TAYLOR_RADIUS
    rest = ~(near1 | near2)
    out[near1] = _lg1p_taylor(w[near1] - 1.0)
    x2 = w[near2] - 2.0
    out[near2] = np.log1p(x2) + _lg1p_taylor(x2)
    out[rest] = _lg_core(w[rest])
    return _finish(out.reshape(np.shape(z)), flip.reshape(np.shape(z)), real_input)


def log_gamma1p(x):
    """``lnGamma(1 + x)`` accurate for small ``|x|``; needs ``re(x) > -1``."""
    x = np.asarray(x)
    real_input = not np.iscomplexobj(x)
    xc = np.atleast_1d(x.astype(complex))
    if np.any(xc.real <= -1.0):
        raise DomainError("log_gamma1p: requires re(x) > -1")
    flip = xc.imag < 0
    xc = np.where(flip, xc.conj(), xc)
    out = np.empty_like(xc)
    small = np.abs(xc) < _TAYLOR_RADIUS
    out[small] = _lg1p_taylor(xc[small])
    out[~small] = log_gamma(1.0 + xc[~small])
    return _finish(out.reshape(np.shape(x)), flip.reshape(np.shape(x)), real_input)


def digamma(z):
    """``psi(z)``, the logarithmic derivative of Gamma, for ``re(z) > 0``."""
    w, flip, real_input = _prepare(z, "digamma")
    n = _shifts(w)
    acc = np.zeros_like(w)
    for j in range(int(n.max(initial=0))):
        m = j < n
        acc[m] += 1.0 / (w[m] + j)
    s = w + n
    si2 = 1.0 / (s * s)
    out = np.log(s) - 0.5 / s - si2 * _poly_inv(_PSI_COEF, si2) - acc
    return _finish(out, flip, real_input)


def trigamma(z):
    """``psi'(z)`` for ``re(z) > 0``."""
    w, flip, real_input = _prepare(z, "trigamma")
    return _finish(_polygamma1(w), flip, real_input)


def _polygamma1(w):
    n = _shifts(w)
    acc = np.zeros_like(w)
    for j in range(int(n.max(initial=0))):
        m = j < n
        acc[m] += 1.0 / (w[m] + j) ** 2
    s = w + n
    si = 1.0 / s
    si2 = si * si
    return si + 0.5 * si2 + si * si2 * _poly_inv(_B, si2) + acc


def tetragamma(z):
    """``psi''(z)`` for ``re(z) > 0``; only used for degenerate-root limits."""
    w, flip, real_input = _prepare(z, "tetragamma")
    n = _shifts(w)
    acc = np.zeros_like(w)
    for j in range(int(n.max(initial=0))):
        m = j < n
        acc[m] += 1.0 / (w[m] + j) ** 3
    s = w + n
    si = 1.0 / s
    si2 = si * si
    coef = (2 * _K + 1) * _B
    out = -si2 - si2 * si - si2 * si2 * _poly_inv(coef, si2) - 2.0 * acc
    return _finish(out, flip, real_input)


# Whole-plane helpers for Laplace inversion.  Not part of the public surface:
# the branch of the logarithm is arbitrary there because callers exponentiate.

def _log_sin_pi(z):
    # log(sin(pi z)) without overflow for large |im z|; z has im >= 0
    e = np.exp(2j * np.pi * z)
    return -1j * np.pi * z + np.log(0.5j) + np.log1p(-e)


def log_gamma_any(z):
    """``lnGamma(z)`` modulo ``2*pi*i`` anywhere off the poles.

    Uses reflection for ``re(z) < 1/2``.  Only ``exp(log_gamma_any(z))`` is
    meaningful; the imaginary part is not on a continuous branch.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    flip = z.imag < 0
    w = np.where(flip, z.conj(), z)
    out = np.empty_like(w)
    left = w.real < 0.5
    right = ~left
    out[right] = _lg_core(w[right])
    wl = w[left]
    out[left] = np.log(np.pi) - _log_sin_pi(wl) - _lg_core(1.0 - wl)
    return np.where(flip, out.conj(), out)


def stirling_remainder1p(x):
    """``R(x) = lnGamma(1+x) - [(x + 1/2) ln x - x + ln(2 pi)/2]``.

    Evaluated from the asymptotic series whenever ``re(x) > 0`` and
    ``|x| >= 15`` so that no large terms cancel; elsewhere by direct
    subtraction (modulo ``2*pi*i`` in the left half-plane).
    """
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    out = np.empty_like(x)
    series = (x.real > 0) & (np.abs(x) >= _SHIFT)
    xs = x[series]
    xi = 1.0 / xs
    out[series] = xi * _poly_inv(_LG_COEF, xi * xi)
    xd = x[~series]
    out[~series] = (log_gamma_any(1.0 + xd)
                    - ((xd + 0.5) * np.log(xd) - xd + _HALF_LOG_2PI))
    return out
