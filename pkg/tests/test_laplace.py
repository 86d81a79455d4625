import math

import numpy as np
import pytest
import sympy

from drudeheat import laplace

T = np.geomspace(0.1, 10, 9)

PAIRS = [
    (lambda s: 1 / s, lambda t: np.ones_like(t)),
    (lambda s: s ** -0.5, lambda t: 1 / np.sqrt(np.pi * t)),
    (lambda s: 1 / (s + 1), lambda t: np.exp(-t)),
    (lambda s: 1 / (s + 1) ** 2, lambda t: t * np.exp(-t)),
]


@pytest.mark.parametrize("k", range(4))
def test_contour_methods_on_analytic_pairs(k):
    F, f = PAIRS[k]
    tol = 1e-6 if k < 2 else 1e-8
    for method in (laplace.talbot, laplace.hyperbolic):
        got = method(F, T)
        assert np.abs(got - f(T)).max() <= tol * max(1.0, np.abs(f(T)).max())


def test_hyperbolic_narrow_contour_complex_poles():
    # poles at -0.05 +- 1i sit 0.05 rad beyond the imaginary axis
    F = lambda s: 1 / ((s + 0.05) ** 2 + 1)
    t = np.array([0.5, 3.0, 10.0])
    got = laplace.hyperbolic(F, t, delta=math.atan2(1.0, 0.05))
    assert np.abs(got - np.exp(-0.05 * t) * np.sin(t)).max() < 1e-8


def test_stehfest_smooth_functions():
    for F, f in PAIRS[:2]:
        assert np.abs(laplace.stehfest(F, T) / f(T) - 1).max() < 1e-4
    # decaying exponentials are the classic weak spot: only short times
    t = np.array([0.1, 0.5, 1.0])
    assert np.abs(laplace.stehfest(PAIRS[2][0], t) / np.exp(-t) - 1).max() < 1e-3


def test_scalar_and_array_agree():
    F = PAIRS[1][0]
    for method in (laplace.talbot, laplace.hyperbolic, laplace.stehfest):
        arr = method(F, np.array([0.7, 2.0]))
        assert isinstance(method(F, 0.7), float)
        assert method(F, 0.7) == pytest.approx(arr[0], rel=1e-14)


def test_invalid_t():
    for method in (laplace.talbot, laplace.hyperbolic, laplace.stehfest):
        with pytest.raises(ValueError):
            method(lambda s: 1 / s, 0.0)
    with pytest.raises(ValueError):
        laplace.hyperbolic(lambda s: 1 / s, 1.0, delta=2.0)


@pytest.mark.parametrize("n", [8, 12, 14, 18])
def test_stehfest_weights_exact(n):
    # independent rational evaluation with sympy
    half = n // 2
    f = sympy.factorial
    for k in range(1, n + 1):
        acc = sum(sympy.Rational(j ** half * f(2 * j),
                                 f(half - j) * f(j) * f(j - 1) * f(k - j) * f(2 * j - k))
                  for j in range((k + 1) // 2, min(k, half) + 1))
        want = float((-1) ** (k + half) * acc)
        assert laplace.stehfest_weights(n)[k - 1] == pytest.approx(want, rel=1e-15)
    assert sum(laplace.stehfest_weights(n)) == pytest.approx(0.0, abs=1e-6 * max(map(abs, laplace.stehfest_weights(n))))


def test_stehfest_weights_reject_odd():
    with pytest.raises(ValueError):
        laplace.stehfest_weights(7)


def test_hyperbolic_node_count_grows_with_delta():
    assert laplace.hyperbolic_nodes(0.0) < laplace.hyperbolic_nodes(1.0) < laplace.hyperbolic_nodes(1.4)
