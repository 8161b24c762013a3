import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special as sc

from oracles import bessel_ratio_quad, log_bessel_k_quad
from opbayes.special import (
    DEBYE_ORDER,
    bessel_k,
    bessel_ratio,
    log_bessel_k,
    log_bessel_ratio,
    regularized_gamma_p,
    regularized_gamma_q,
)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# frozen from oracles.log_bessel_k_quad / bessel_ratio_quad (mpmath, 30 digits)
LOG_K_9407_1562 = -14.094627030111667
R_2_5 = 1.5618489975962142


def test_half_integer_closed_form():
    expected = math.log(math.sqrt(math.pi / 2.0) * math.exp(-1.0))
    assert log_bessel_k(0.5, 1.0) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("z", [1e-6, 0.3, 2.0, 40.0, 900.0])
def test_half_integer_family(z):
    # K_{3/2}(z) = sqrt(pi/(2z)) e^-z (1 + 1/z)
    expected = 0.5 * math.log(math.pi / (2 * z)) - z + math.log1p(1 / z)
    assert log_bessel_k(1.5, z) == pytest.approx(expected, rel=1e-13, abs=1e-13)


def test_order_symmetry_example():
    assert log_bessel_k(-1.5, 2.0) == log_bessel_k(1.5, 2.0)


def test_quadrature_value():
    assert rel(log_bessel_k(9.407, 15.62), LOG_K_9407_1562) < 1e-12


def test_ratio_half_integer():
    assert bessel_ratio(-0.5, 3.0) == pytest.approx(1.0, rel=1e-14)
    # recurrence: R_{1/2}(z) = 1/R_{-1/2}(z) + 1/z
    assert bessel_ratio(0.5, 3.0) == pytest.approx(1.0 + 1.0 / 3.0, rel=1e-14)


def test_ratio_quadrature_value():
    assert rel(bessel_ratio(2.0, 5.0), R_2_5) < 1e-12


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf, 1e-13])
def test_domain_errors(bad):
    with pytest.raises(ValueError):
        log_bessel_k(1.0, bad)
    with pytest.raises(ValueError):
        bessel_ratio(1.0, bad)


def test_non_finite_order():
    with pytest.raises(ValueError):
        log_bessel_k(math.inf, 1.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(-500, 500), st.floats(1e-8, 1e6))
def test_symmetry_property(order, z):
    assert abs(log_bessel_k(-order, z) - log_bessel_k(order, z)) < 1e-12


def _recurrence_grid():
    orders = np.linspace(-20, 20, 41) + 0.37
    zs = np.geomspace(0.01, 100, 13)
    return [(float(n), float(z)) for n in orders for z in zs]


def test_recurrence_residual():
    # K_{nu+1} - K_{nu-1} = (2 nu / z) K_nu, checked in scaled form
    worst = 0.0
    for nu, z in _recurrence_grid():
        lk = log_bessel_k(nu, z)
        up = math.exp(log_bessel_k(nu + 1, z) - lk)
        down = math.exp(log_bessel_k(nu - 1, z) - lk)
        resid = (up - down - 2 * nu / z) / max(up, down, abs(2 * nu / z))
        worst = max(worst, abs(resid))
    assert worst < 1e-9


@pytest.mark.parametrize("order", [0.0, 0.3, 2.5, 9.407, 49.9, 50.1, 120.0, 500.0, -7.25])
@pytest.mark.parametrize("z", [1e-8, 0.01, 1.0, 15.62, 300.0, 1e6])
def test_quadrature_agreement(order, z):
    ref = log_bessel_k_quad(order, z)
    assert abs(log_bessel_k(order, z) - ref) <= 1e-9 * max(1.0, abs(ref))


@pytest.mark.parametrize("order,z", [(1e4, 3e3), (1e6, 50.0), (1e8, 7.8e4), (-1e8, 7.8e4)])
def test_large_orders_match_quadrature(order, z):
    ref = log_bessel_k_quad(order, z)
    assert abs(log_bessel_k(order, z) - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("order", [-60.5, -3.7, -1.0, -0.4, 0.0, 0.5, 4.0, 49.6, 50.5, 700.0, 1e5])
@pytest.mark.parametrize("z", [1e-6, 0.5, 5.0, 250.0])
def test_ratio_matches_quadrature(order, z):
    assert rel(bessel_ratio(order, z), bessel_ratio_quad(order, z)) < 1e-10


def test_ratio_matches_scipy_moderate_range():
    for nu in (0.2, 1.0, 3.3, 10.0):
        for z in (0.1, 1.0, 10.0):
            expected = sc.kve(nu + 1, z) / sc.kve(nu, z)
            assert rel(bessel_ratio(nu, z), expected) < 1e-12


def test_ratio_across_regime_boundary_is_continuous():
    z = 20.0
    below = bessel_ratio(DEBYE_ORDER - 1e-9, z)
    above = bessel_ratio(DEBYE_ORDER + 1e-9, z)
    assert rel(below, above) < 1e-10


def test_bessel_k_overflow_reports_inf():
    assert bessel_k(400.0, 1e-3) == math.inf
    assert bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) / math.e)


@pytest.mark.parametrize("n", [1e2, 1e3, 1e4])
def test_large_order_ratio_scaling(n):
    # R_{b n}(a sqrt(n)) ~ 2 b sqrt(n) / a
    for a, b in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.7)]:
        scaled = bessel_ratio(b * n, a * math.sqrt(n)) * a / (2 * b * math.sqrt(n))
        assert scaled > 1.0


def test_large_order_ratio_scaling_is_monotone_and_tight():
    for a, b in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.7)]:
        gaps = [
            abs(bessel_ratio(b * n, a * math.sqrt(n)) * a / (2 * b * math.sqrt(n)) - 1)
            for n in (1e2, 1e3, 1e4)
        ]
        assert gaps[0] > gaps[1] > gaps[2]
    n = 1e4
    assert abs(bessel_ratio(n, math.sqrt(n)) / (2 * math.sqrt(n)) - 1) < 0.01


def test_log_ratio_consistency():
    for nu, z in [(3.0, 2.0), (80.0, 10.0), (-80.0, 10.0), (-0.5, 1.0)]:
        direct = log_bessel_k(nu + 1, z) - log_bessel_k(nu, z)
        assert log_bessel_ratio(nu, z) == pytest.approx(direct, rel=1e-11, abs=1e-11)


# -- incomplete gamma ------------------------------------------------------


@pytest.mark.parametrize("a", [0.05, 0.5, 1.0, 3.407, 17.0, 250.0])
@pytest.mark.parametrize("x", [1e-6, 0.1, 1.0, 3.0, 20.0, 260.0])
def test_incomplete_gamma_matches_scipy(a, x):
    assert regularized_gamma_p(a, x) == pytest.approx(sc.gammainc(a, x), rel=1e-12, abs=1e-14)
    assert regularized_gamma_q(a, x) == pytest.approx(sc.gammaincc(a, x), rel=1e-11, abs=1e-14)


def test_incomplete_gamma_exponential_case():
    for x in (0.01, 1.0, 5.0):
        assert regularized_gamma_p(1.0, x) == pytest.approx(-math.expm1(-x), rel=1e-14)


def test_incomplete_gamma_edges():
    assert regularized_gamma_p(2.0, 0.0) == 0.0
    assert regularized_gamma_q(2.0, 0.0) == 1.0
    assert regularized_gamma_p(2.0, math.inf) == 1.0
    with pytest.raises(ValueError):
        regularized_gamma_p(0.0, 1.0)
    with pytest.raises(ValueError):
        regularized_gamma_p(1.0, -1.0)
