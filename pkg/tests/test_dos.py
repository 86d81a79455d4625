import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from scipy.signal import argrelmax

from drudeheat.dos import (
    InversionConfig,
    SpectralDensityResult,
    delta_weight,
    dos_low_energy_series,
    ground_energy,
    invert_dos,
    laplace_transform_density,
    peak_energy_scale,
    shifted_partition,
    single_oscillator_measure,
    undamped_dos,
    verify_positivity,
)
from drudeheat.model import BathSpec, SystemSpec
from drudeheat.thermo import internal_U, log_partition

FREE = SystemSpec()

# rho(U0 + eps * omega_d) for gamma = 1, from 30-digit mpmath invertlaplace
# (de Hoog) applied to Z exp(beta U0) - c_inf built from mpmath gamma functions.
DE_HOOG = {
    0.2: {0.01: -8.282642264359353, 0.1: -8.053877797436616, 1: -2.754037429382759,
          2: 7.657227898053273, 3: 0.4764489361729183, 5: 2.059557480006239},
    5.0: {0.01: 0.3352509346448699, 0.1: 0.34232782842046083, 1: 0.18981191167500586,
          2: 0.1379865220830227, 5: 0.08859250990447143},
}


@pytest.mark.parametrize("r", sorted(DE_HOOG))
@pytest.mark.parametrize("method", ["auto", "hyperbolic"])
def test_inversion_matches_frozen_reference(r, method):
    eps = np.array(list(DE_HOOG[r]))
    want = np.array(list(DE_HOOG[r].values()))
    res = invert_dos(FREE, BathSpec.from_ratio(r), eps, InversionConfig(method=method, check=None))
    assert np.abs(res.rho / want - 1).max() < 1e-8


def test_talbot_fails_gracefully_only_for_complex_roots():
    # documented limitation: fixed Talbot is accurate for real roots
    eps = np.array(list(DE_HOOG[5.0]))
    res = invert_dos(FREE, BathSpec.from_ratio(5), eps, InversionConfig(method="talbot", check=None))
    assert np.abs(res.rho / np.array(list(DE_HOOG[5.0].values())) - 1).max() < 1e-8


def test_unshifted_route_agrees_away_from_u0():
    b = BathSpec.from_ratio(5)
    eps = np.array([1.0, 2.0, 5.0])
    a = invert_dos(FREE, b, eps, InversionConfig(check=None)).rho
    c = invert_dos(FREE, b, eps, InversionConfig(shift=False, check=None)).rho
    assert np.abs(c / a - 1).max() < 1e-6


# --- ground-state energy and the shifted partition function ------------

def test_ground_energy_examples():
    assert abs(ground_energy(BathSpec(1, 4)) - 4 / (2 * math.pi) * math.log(2)) < 1e-15
    assert ground_energy(BathSpec(1e-12, 1.0)) < 1e-10
    assert ground_energy(BathSpec(1, 0.2)) == pytest.approx(0.16104039906835646, rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 1e3))
def test_ground_energy_is_low_temperature_limit(r):
    b = BathSpec.from_ratio(r)
    u0 = ground_energy(b)
    assert abs(internal_U(b, 1e6) - u0) <= 1e-8 * (1 + abs(u0))


def test_ground_energy_degenerate_continuity():
    u = ground_energy(BathSpec(1, 4))
    for d in (1e-8, -1e-8):
        assert abs(ground_energy(BathSpec(1, 4 / (1 - d))) - u) < 1e-7


def test_shifted_partition_is_z_exp_beta_u0():
    b = BathSpec.from_ratio(0.7)
    for beta in (0.01, 0.3, 4.0, 50.0):
        direct = math.exp(log_partition(FREE, b, beta) + beta * ground_energy(b))
        assert shifted_partition(FREE, b, beta) == pytest.approx(direct, rel=1e-11)


def test_shifted_partition_large_beta_series():
    r = 5.0
    b = BathSpec.from_ratio(r)
    beta = 1e3 / b.omega_d
    x = math.pi / (6 * beta * b.omega_d) * (r - 1)
    series = delta_weight(FREE, b) * (1 + x + x * x / 2)
    assert shifted_partition(FREE, b, beta) == pytest.approx(series, rel=1e-6)


def test_shifted_partition_wd_equals_gamma():
    box = SystemSpec(box_ratio=2.5)
    b = BathSpec(1, 1)
    assert shifted_partition(box, b, 1e9) == pytest.approx(2.5 * math.sqrt(math.pi), rel=1e-9)


def test_shifted_partition_conjugation_and_domain():
    b = BathSpec.from_ratio(5)
    z = shifted_partition(FREE, b, 1 + 1j)
    assert shifted_partition(FREE, b, 1 - 1j) == np.conj(z)
    with pytest.raises(ValueError):
        shifted_partition(FREE, b, -1 + 1j)
    with pytest.raises(ValueError):
        shifted_partition(FREE, b, 0.0)


def test_delta_weight_is_large_beta_limit():
    for r in (0.2, 1.0, 5.0):
        b = BathSpec.from_ratio(r)
        assert shifted_partition(FREE, b, 1e12) == pytest.approx(delta_weight(FREE, b), rel=1e-6)
    res = invert_dos(SystemSpec(box_ratio=3.0), BathSpec(1, 5), [0.5], InversionConfig(check=None))
    assert res.delta_weight == pytest.approx(3 * math.sqrt(math.pi / 5), rel=1e-12)


# --- sign structure --------------------------------------------------------

def _plateau(r):
    b = BathSpec.from_ratio(r)
    res = invert_dos(FREE, b, [1e-3], InversionConfig(check=None))
    return res.rho[0], delta_weight(FREE, b) / b.omega_d * math.pi / 6 * (r - 1)


@pytest.mark.parametrize("r", [0.2, 0.5, 2.0, 5.0])
def test_low_energy_plateau(r):
    got, want = _plateau(r)
    assert np.sign(got) == np.sign(r - 1)
    assert abs(got / want - 1) < 0.05


def test_plateau_vanishes_at_wd_equals_gamma():
    b = BathSpec(1, 1)
    res = invert_dos(FREE, b, [1e-4, 1e-3], InversionConfig(check=None))
    assert np.abs(res.rho * b.omega_d / res.delta_weight).max() < 1e-5


def test_series_against_inversion():
    b = BathSpec.from_ratio(5)
    eps = np.array([0.01, 0.02, 0.05, 0.1])
    res = invert_dos(FREE, b, eps, InversionConfig(check=None))
    rel = dos_low_energy_series(b, eps) / res.rho - 1
    # the residual is the first omitted order: the beta**-3 term of the large-beta
    # expansion, from exp(A/b) and the 1/(360 x**3) Stirling term of each gamma factor
    a = np.array([(1 + s * math.sqrt(1 - 4 / 5)) / (4 * math.pi) for s in (1, -1)])
    A = math.pi / 6 * 4
    c3 = A ** 3 / 6 - ((1 / a ** 3).sum() - (2 * math.pi) ** 3) / 360
    predicted = -c3 / 2 * eps ** 2 / A
    assert np.abs(rel / predicted - 1)[:3].max() < 0.05
    assert np.abs(rel[eps <= 0.05]).max() < 0.05


def test_series_examples_and_window():
    assert dos_low_energy_series(BathSpec(1, 1), 0.2) == 0.0
    with pytest.raises(ValueError):
        dos_low_energy_series(BathSpec(1, 5), 0.5)
    with pytest.raises(ValueError):
        dos_low_energy_series(BathSpec(1, 5), 0.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 100).filter(lambda r: abs(r - 1) > 1e-6))
def test_series_constant_sign(r):
    b = BathSpec.from_ratio(r)
    assert np.sign(dos_low_energy_series(b, 1e-6)) == np.sign(r - 1)


def test_weak_coupling_approaches_free_density():
    b = BathSpec.from_ratio(1e4)
    eps = np.linspace(0.1, 5, 30)
    res = invert_dos(FREE, b, eps)
    free = undamped_dos(FREE, b.omega_d, eps * b.omega_d)
    assert np.abs(res.rho / free - 1).max() < 0.02
    assert np.allclose(res.rho_scaled, res.rho * b.omega_d)


def test_undamped_scaled_form():
    box = SystemSpec(box_ratio=2.0)
    assert undamped_dos(box, 4.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        undamped_dos(box, 4.0, 0.0)


def test_peaks_follow_mode_frequency():
    b = BathSpec.from_ratio(0.2)
    eps = np.linspace(0.01, 8, 1600)
    res = invert_dos(FREE, b, eps, InversionConfig(check=None))
    peaks = eps[argrelmax(res.rho)[0]]
    omega = peak_energy_scale(b)
    assert len(peaks) >= 3
    for k, p in enumerate(peaks[:3], start=1):
        assert abs(p / (k * omega) - 1) < 0.15


def test_positivity_reports():
    r02 = invert_dos(FREE, BathSpec.from_ratio(0.2), np.linspace(0.01, 1, 50))
    rep = verify_positivity(r02)
    assert rep.negative_intervals and rep.negative_intervals[0][0] == pytest.approx(0.01)
    assert not rep.admissible
    r5 = invert_dos(FREE, BathSpec.from_ratio(5), np.linspace(0.01, 1, 50))
    assert verify_positivity(r5).negative_intervals == []
    zero = SpectralDensityResult(np.array([0.1, 0.2]), np.zeros(2), 1.0, 0.0, 1.0)
    assert verify_positivity(zero).negative_intervals == []


# --- inversion machinery ----------------------------------------------------

def test_talbot_stehfest_agree_in_smooth_region():
    res = invert_dos(FREE, BathSpec.from_ratio(5), np.linspace(0.02, 5, 100))
    big = np.abs(res.rho) > 0.01 * np.abs(res.rho).max()
    assert np.abs(res.rho_check / res.rho - 1)[big].max() < 1e-4
    assert not res.unreliable.any()


def test_disagreement_is_flagged():
    res = invert_dos(FREE, BathSpec.from_ratio(0.2), np.linspace(0.02, 5, 50))
    assert res.unreliable.any()


@pytest.mark.parametrize("r", [0.2, 5.0])
def test_round_trip(r):
    b = BathSpec.from_ratio(r)
    eps = np.concatenate([np.geomspace(1e-4, 0.1, 200)[:-1], np.linspace(0.1, 60, 6000)])
    res = invert_dos(FREE, b, eps, InversionConfig(check=None))
    beta = np.geomspace(0.2, 20, 10) / b.omega_d
    rel = np.abs(laplace_transform_density(res, beta) / shifted_partition(FREE, b, beta) - 1)
    assert rel.max() < 1e-3


def test_invert_dos_rejects_bad_grid():
    b = BathSpec(1, 5)
    for grid in ([0.0, 1.0], [-1.0], [np.nan]):
        with pytest.raises(ValueError):
            invert_dos(FREE, b, grid)
    with pytest.raises(ValueError):
        invert_dos(FREE, BathSpec.strict_ohmic(1), [1.0])


def test_inversion_config_validation():
    with pytest.raises(ValueError):
        InversionConfig(method="talbot", nodes=8)
    with pytest.raises(ValueError):
        InversionConfig(method="stehfest", nodes=15)
    with pytest.raises(ValueError):
        InversionConfig(method="stehfest", nodes=20)
    with pytest.raises(ValueError):
        InversionConfig(method="laguerre")
    InversionConfig(method="talbot", nodes=128)
    InversionConfig(method="stehfest", nodes=8)


# --- signed spectral measure -----------------------------------------------

def test_single_level_measure():
    m = single_oscillator_measure([(1.0, 1.0)], 1.0)
    assert m.atoms == ((0.5, 1.0), (1.5, -1.0))


def test_coincident_atoms_merge():
    m = single_oscillator_measure([(1.0, 1.0), (2.0, 3.0)], 1.0)
    assert m.atoms == ((0.5, 1.0), (1.5, 2.0), (2.5, -3.0))
    m = single_oscillator_measure([(1.0, 2.0), (2.0, 2.0)], 1.0)
    assert m.atoms == ((0.5, 2.0), (2.5, -2.0))


def test_measure_laplace_two_levels():
    levels = [(0.3, 1.0), (1.7, 2.0)]
    w = 0.8
    m = single_oscillator_measure(levels, w)
    want = sum(g * math.exp(-e) for e, g in levels) * (math.exp(w / 2) - math.exp(-w / 2))
    assert m.laplace(1.0) == pytest.approx(want, rel=1e-15)


def test_measure_laplace_symbolic():
    # exact check with rational levels: sum_k w_k x**(2 E_k) against the
    # product form Z_S(beta) * 2 sinh(beta w / 2), with x = exp(-beta / 2)
    x = sympy.Symbol("x", positive=True)
    levels = [(Fraction(1, 2), 1), (Fraction(3, 2), 2), (Fraction(4), 5)]
    w = Fraction(1)
    m = single_oscillator_measure([(float(e), float(g)) for e, g in levels], float(w))
    lhs = sum(sympy.Rational(str(wt)) * x ** int(round(2 * e)) for e, wt in m.atoms)
    rhs = sum(g * x ** int(2 * e) for e, g in levels) * (x ** -int(w) - x ** int(w))
    assert sympy.simplify(lhs - sympy.expand(rhs)) == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(0.1, 10)), min_size=1, max_size=3),
       st.floats(0.1, 3), st.floats(0.05, 3))
def test_measure_laplace_random(levels, w, beta):
    m = single_oscillator_measure(levels, w)
    want = sum(g * math.exp(-beta * e) for e, g in levels) * 2 * math.sinh(beta * w / 2)
    scale = sum(g * math.exp(-beta * e) for e, g in levels) * math.exp(beta * w / 2)
    assert abs(m.laplace(beta) - want) <= 1e-13 * scale
    assert list(m.energies) == sorted(m.energies)


def test_measure_errors():
    with pytest.raises(ValueError):
        single_oscillator_measure([], 1.0)
    with pytest.raises(ValueError):
        single_oscillator_measure([(1.0, 0.0)], 1.0)
