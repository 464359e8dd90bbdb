import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from radialab.specfun import (
    BesselFamily,
    BesselKind,
    Bracket,
    BracketError,
    SpecfunDomainError,
    bessel_J,
    bessel_Y,
    find_root,
    gamma_fn,
    solid_angle,
    spherical_bessel,
    spherical_bessel_at_zero,
    spherical_neumann,
    spherical_neumann_leading,
)

positive_x = st.floats(min_value=1e-6, max_value=50.0, allow_nan=False, exclude_min=True)


@settings(max_examples=1000, deadline=None)
@given(positive_x)
def test_j0_matches_sinc(x):
    assert abs(spherical_bessel(0, x) - math.sin(x) / x) <= 1e-13


@settings(max_examples=1000, deadline=None)
@given(positive_x)
def test_n0_matches_minus_cos_over_x(x):
    assert abs(spherical_neumann(0, x) + math.cos(x) / x) <= 1e-13 * max(1.0, 1.0 / x)


def test_spherical_bessel_examples():
    assert spherical_bessel_at_zero(0) == 1.0
    assert spherical_bessel_at_zero(3) == 0.0
    assert abs(spherical_bessel(0, math.pi)) < 1e-16
    # j1(1) = sin 1 - cos 1, summed with mpmath as the oracle
    oracle = float(mpmath.sin(1) - mpmath.cos(1))
    assert spherical_bessel(1, 1.0) == pytest.approx(oracle, rel=1e-14)
    assert oracle == pytest.approx(0.3011686789, abs=1e-10)


@pytest.mark.parametrize("l", range(0, 11))
def test_spherical_bessel_against_mpmath(l):
    for x in np.geomspace(1e-4, 80.0, 40):
        ref = float(mpmath.sqrt(mpmath.pi / (2 * x)) * mpmath.besselj(l + 0.5, x))
        got = spherical_bessel(l, float(x))
        assert abs(got - ref) <= 1e-12 * max(abs(ref), 1e-300) + 1e-15, (l, x)


@pytest.mark.parametrize("l", range(0, 6))
def test_spherical_neumann_against_scipy(l):
    for x in np.geomspace(1e-3, 60.0, 40):
        ref = special.spherical_yn(l, x)
        assert spherical_neumann(l, float(x)) == pytest.approx(ref, rel=1e-11, abs=1e-15)


def test_spherical_neumann_examples():
    assert abs(spherical_neumann(0, math.pi / 2)) < 1e-16
    assert spherical_neumann(0, math.pi) == pytest.approx(1.0 / math.pi, rel=1e-15)
    x = 0.01
    oracle = -math.cos(x) / x**2 - math.sin(x) / x
    assert spherical_neumann(1, x) == pytest.approx(oracle, rel=1e-12)
    assert spherical_neumann(1, x) == pytest.approx(-1e4, rel=1e-3)


def test_domain_and_order_errors():
    with pytest.raises(SpecfunDomainError):
        spherical_bessel(0, 0.0)
    with pytest.raises(SpecfunDomainError):
        spherical_neumann(1, -1.0)
    with pytest.raises(SpecfunDomainError):
        spherical_bessel(11, 1.0)
    with pytest.raises(SpecfunDomainError):
        bessel_Y(1, 0.0)


@pytest.mark.parametrize("l", [0, 1, 2])
def test_wronskian(l):
    # the h = 1e-5 central difference alone is off by ~1.5e-9 at x = 0.5
    # (same in 30-digit arithmetic), so the 1e-9 bound is taken relative to 1/x^2
    h = 1e-5
    for x in np.linspace(0.5, 20.0, 40):
        dj = (spherical_bessel(l, x + h) - spherical_bessel(l, x - h)) / (2 * h)
        dn = (spherical_neumann(l, x + h) - spherical_neumann(l, x - h)) / (2 * h)
        w = spherical_bessel(l, x) * dn - dj * spherical_neumann(l, x)
        assert w == pytest.approx(1.0 / x**2, rel=1e-9)


@pytest.mark.parametrize("l", [0, 1])
def test_neumann_log_ratio_raw(l):
    # (2l-1)!! = 1 for l = 0, 1, so the raw log ratio already hits l + 1
    x = 1e-6
    ratio = math.log(abs(spherical_neumann(l, x))) / math.log(1.0 / x)
    assert ratio == pytest.approx(l + 1, abs=1e-3)


@pytest.mark.parametrize("l", [0, 1, 2, 3, 4])
def test_neumann_leading_exponent(l):
    # for l >= 2 the constant (2l-1)!! shifts the raw ratio by log((2l-1)!!)/log(1/x);
    # dividing it out isolates the power law
    x = 1e-6
    coeff, power = spherical_neumann_leading(l)
    assert power == -(l + 1)
    ratio = math.log(abs(spherical_neumann(l, x) / coeff)) / math.log(1.0 / x)
    assert ratio == pytest.approx(l + 1, abs=1e-3)
    assert spherical_neumann(l, x) == pytest.approx(coeff * x**power, rel=1e-6)


def test_cylindrical_bessel_examples():
    assert bessel_J(1, 0.0) == 0.0
    assert abs(bessel_J(1, 3.83171)) < 1e-5
    assert abs(bessel_J(0, 2.404826)) < 1e-6
    assert bessel_Y(1, 0.001) == pytest.approx(-2.0 / (math.pi * 0.001), rel=1e-4)
    assert abs(bessel_Y(1, 2.197141)) < 1e-5
    assert bessel_Y(1, 1.0) == pytest.approx(-0.7812128213002887, abs=1e-10)


def test_cylindrical_bessel_against_scipy():
    xs = np.concatenate([np.linspace(0.0, 50.0, 501), [7.99, 8.0, 11.99, 12.0, 12.01]])
    for x in xs:
        assert bessel_J(0, x) == pytest.approx(special.j0(x), abs=1e-12)
        assert bessel_J(1, x) == pytest.approx(special.j1(x), abs=1e-12)
        if x > 0:
            assert bessel_Y(1, x) == pytest.approx(special.y1(x), abs=1e-12, rel=1e-12)


def test_bessel_kind_dispatch():
    assert BesselKind(BesselFamily.SPHERICAL_FIRST, 1)(1.0) == spherical_bessel(1, 1.0)
    assert BesselKind(BesselFamily.CYLINDRICAL_FIRST, 1)(2.0) == bessel_J(1, 2.0)


def test_gamma():
    assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-15)
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-14)
    for x in np.linspace(0.05, 30.0, 71):
        assert gamma_fn(x) == pytest.approx(math.gamma(x), rel=1e-13)
    for bad in (0.0, -1.5):
        with pytest.raises(SpecfunDomainError):
            gamma_fn(bad)


def test_solid_angle():
    assert solid_angle(1) == 2.0
    assert solid_angle(2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert solid_angle(3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert solid_angle(4) == pytest.approx(2 * math.pi**2, rel=1e-14)
    with pytest.raises(SpecfunDomainError):
        solid_angle(0)


def test_find_root_examples():
    j1 = lambda x: bessel_J(1, x)
    assert find_root(j1, Bracket.from_function(j1, 3.0, 4.0), 1e-10) == pytest.approx(
        3.8317059702, abs=1e-9)
    line = lambda x: x - 1.0
    assert find_root(line, Bracket.from_function(line, 0.0, 2.0), 1e-12) == pytest.approx(1.0, abs=1e-12)
    assert find_root(math.sin, Bracket.from_function(math.sin, 3.0, 4.0), 1e-12) == pytest.approx(
        math.pi, abs=1e-12)


def test_find_root_deterministic():
    f = lambda x: math.cos(x) - x
    b = Bracket.from_function(f, 0.0, 1.0)
    assert find_root(f, b, 1e-14) == find_root(f, b, 1e-14)


def test_bracket_validation():
    with pytest.raises(BracketError):
        Bracket.from_function(lambda x: x * x + 1.0, -1.0, 1.0)
    with pytest.raises(BracketError):
        Bracket(1.0, 0.0, -1.0, 1.0)
