"""Numerical inverse Laplace transforms.

``F(s) = int_0^inf f(t) exp(-s t) dt`` is inverted at a single ``t > 0``:

* :func:`talbot` -- fixed Talbot contour (Abate-Valko), needs ``F`` on a
  contour that wraps the negative real axis;
* :func:`hyperbolic` -- Weideman-Trefethen hyperbola, whose half-opening
  angle can be narrowed to stay clear of singularities off the real axis;
* :func:`stehfest` -- Gaver-Stehfest, real ``s`` only.

``F`` must accept a complex (or, for Stehfest, real) numpy array.
"""
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = ["talbot", "hyperbolic", "hyperbolic_nodes", "stehfest", "stehfest_weights"]


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise ValueError("inversion point t must be > 0")
    return t


def _finish(t, out):
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


def _eval(F, s):
    # one vectorised call of F on a (n_t, n_nodes) array
    return np.asarray(F(s.ravel())).reshape(s.shape)


def talbot(F, t, nodes=32):
    """Fixed Talbot inversion with ``nodes`` contour points; ``t`` may be an array."""
    t = _check_t(t)
    tt = np.atleast_1d(t)[:, None]
    m = int(nodes)
    r = 2.0 * m / (5.0 * tt)
    theta = np.arange(1, m) * (math.pi / m)
    cot = 1.0 / np.tan(theta)
    s = r * theta * (cot + 1j)
    sigma = theta + (theta * cot - 1.0) * cot
    f0 = 0.5 * np.real(_eval(F, r + 0j)[:, 0]) * np.exp(r[:, 0] * tt[:, 0])
    terms = np.real(np.exp(tt * s) * _eval(F, s) * (1.0 + 1j * sigma))
    return _finish(t, r[:, 0] / m * (f0 + terms.sum(axis=1)))


def hyperbolic_nodes(delta):
    """Node count for :func:`hyperbolic` at ``mu t = 2`` (about 1e-10 accuracy)."""
    alpha = 0.5 * (0.5 * math.pi - delta)
    h = 2.0 * math.pi * alpha / 29.0
    return int(math.ceil(math.acosh(16.0 / math.sin(alpha)) / h))


def hyperbolic(F, t, delta=0.0, nodes=None):
    """Inversion along ``s(u) = mu (1 + sin(i u - alpha))``.

    Parameters
    ----------
    F : callable
        Transform, analytic to the right of the hyperbola and real on the
        real axis (only the upper half of the contour is evaluated).
    t : float or array_like
        Inversion point(s).
    delta : float
        Angle in ``[0, pi/2)`` by which singularities approach the imaginary
        axis from the left; the asymptotes open at ``pi/2 + alpha`` with
        ``alpha = (pi/2 - delta)/2``.
    nodes : int, optional
        Number of quadrature points; chosen from ``delta`` when omitted.
    """
    t = _check_t(t)
    if not 0.0 <= delta < 0.5 * math.pi:
        raise ValueError("delta must be in [0, pi/2)")
    alpha = 0.5 * (0.5 * math.pi - delta)
    h = 2.0 * math.pi * alpha / 29.0
    n = hyperbolic_nodes(delta) if nodes is None else int(nodes)
    tt = np.atleast_1d(t)[:, None]
    mu = 2.0 / tt
    u = np.arange(n + 1) * h
    s = mu * (1.0 + np.sin(1j * u - alpha))
    ds = 1j * mu * np.cos(1j * u - alpha)
    v = np.exp(s * tt) * _eval(F, s) * ds
    v[:, 0] *= 0.5
    return _finish(t, h / math.pi * v.sum(axis=1).imag)


@lru_cache(maxsize=None)
def stehfest_weights(order):
    """Gaver-Stehfest weights ``V_1 .. V_N`` for even ``N``."""
    if order % 2 or order < 2:
        raise ValueError("Stehfest order must be even and >= 2")
    half = order // 2
    out = []
    for k in range(1, order + 1):
        acc = Fraction(0)
        for j in range((k + 1) // 2, min(k, half) + 1):
            den = (math.factorial(half - j) * math.factorial(j)
                   * math.factorial(j - 1) * math.factorial(k - j)
                   * math.factorial(2 * j - k))
            acc += Fraction(j ** half * math.factorial(2 * j), den)
        out.append(float((-1) ** (k + half) * acc))
    return tuple(out)


def stehfest(F, t, order=14):
    """Gaver-Stehfest inversion; ``F`` is only called on real positive ``s``."""
    t = _check_t(t)
    v = np.array(stehfest_weights(order), dtype=float)
    a = math.log(2.0) / np.atleast_1d(t)[:, None]
    s = a * np.arange(1, order + 1, dtype=float)
    terms = np.real(_eval(F, s)) * v
    # the weights alternate and reach ~1e9: fsum keeps the result independent
    # of how the points are batched
    return _finish(t, a[:, 0] * np.array([math.fsum(row) for row in terms]))
