import math

import numpy as np
import pytest

from radialab import weakform
from radialab.models import SINGULAR_DELTA
from radialab.weakform import FamilyInconsistencyError, SignConvention, TestFunction

WELL_KS = (math.pi / 2, 3 * math.pi / 2, 5 * math.pi / 2)


def test_bump_derivatives_match_finite_differences():
    phi = TestFunction(0.7)
    r = np.linspace(0.01, 0.65, 30)
    h = 1e-5
    d_fd = (phi(r + h) - phi(r - h)) / (2 * h)
    np.testing.assert_allclose(phi.derivative(r), d_fd, atol=1e-8)
    d2_fd = (phi(r + h) - 2 * phi(r) + phi(r - h)) / h**2
    np.testing.assert_allclose(phi.laplacian(r), d2_fd + 2 / r * phi.derivative(r), atol=2e-4)
    assert phi(np.array([0.7, 1.0])).tolist() == [0.0, 0.0]
    assert phi(np.array([0.0]))[0] == pytest.approx(phi.center_value)


def test_bump_integrates_laplacian_to_zero():
    # the divergence theorem on a compactly supported bump
    from radialab.quad import integrate_radial

    for D in (2.0, 3.0):
        phi = TestFunction(0.5)
        assert abs(integrate_radial(lambda r: phi.laplacian(r, D), 0, 0.5, D).value) < 1e-13


def test_sin_over_r_has_no_source():
    est = weakform.well_residual(math.pi, regular=True)
    assert abs(est.coefficient) < 1e-8 and est.is_zero


@pytest.mark.parametrize("k", WELL_KS)
def test_cos_over_r_source(k):
    est = weakform.well_residual(k, regular=False)
    assert est.coefficient == pytest.approx(-4 * math.pi / k, rel=1e-6)
    assert est.relative_spread < 1e-6 and est.consistent


def test_cos_coefficient_follows_inverse_k_law():
    ks = np.array(WELL_KS + (7 * math.pi / 2,))
    cs = np.array([weakform.well_residual(k, regular=False).coefficient for k in ks])
    slope, intercept = np.polyfit(np.log(ks), np.log(-cs), 1)
    pred = slope * np.log(ks) + intercept
    r2 = 1 - np.sum((np.log(-cs) - pred) ** 2) / np.sum((np.log(-cs) - np.log(-cs).mean()) ** 2)
    assert slope == pytest.approx(-1.0, abs=1e-6)
    assert math.exp(intercept) == pytest.approx(4 * math.pi, rel=1e-6)
    assert r2 >= 0.9999


def test_coulomb_green_function():
    assert weakform.coulomb_green_residual().coefficient == pytest.approx(-1.0, abs=1e-6)


@pytest.mark.parametrize("lb,kappa", [(1.0, 1.0), (0.5, 2.0), (1.0, 0.0)])
def test_debye_huckel(lb, kappa):
    est = weakform.debye_huckel_residual(lb, kappa)
    assert est.coefficient == pytest.approx(-4 * math.pi * lb, rel=1e-6)


@pytest.mark.parametrize("D", [2, 3])
@pytest.mark.parametrize("Z", [1.0, 2.0])
def test_hydrogen_source_is_invisible(D, Z):
    est = weakform.hydrogen_residual_check(D, Z)
    assert abs(est.coefficient) < 1e-8


def test_hydrogen_control_without_coulomb_term():
    est = weakform.hydrogen_residual_check(3, 1.0, include_coulomb=False, strict=False)
    assert abs(est.coefficient) > 0.1
    assert not est.consistent
    with pytest.raises(FamilyInconsistencyError) as info:
        weakform.hydrogen_residual_check(3, 1.0, include_coulomb=False)
    assert info.value.estimate.relative_spread > 1e-3


def test_linearity():
    k = math.pi / 2
    alpha, beta = 2.5, -0.75
    f = lambda r: np.cos(k * r) / (k * r)
    g = lambda r: np.sin(k * r) / (k * r)
    combo = weakform.distributional_residual(lambda r: alpha * f(r) + beta * g(r), k * k,
                                             singular_exponent_hint=-1.0)
    cf = weakform.distributional_residual(f, k * k, singular_exponent_hint=-1.0).coefficient
    cg = weakform.distributional_residual(g, k * k).coefficient
    assert combo.coefficient == pytest.approx(alpha * cf + beta * cg, rel=1e-9, abs=1e-12)


def test_sign_convention_matters():
    # exp(-r)/r solves lap - 1 with a point source; lap + 1 leaves an extended residual
    f = lambda r: np.exp(-r) / r
    good = weakform.distributional_residual(f, 1.0, SignConvention.SCHRODINGER_BOUND,
                                            singular_exponent_hint=-1.0)
    assert good.coefficient == pytest.approx(-4 * math.pi, rel=1e-9)
    bad = weakform.distributional_residual(f, 1.0, "helmholtz", singular_exponent_hint=-1.0,
                                           strict=False)
    assert not bad.consistent


def test_green_identity():
    k = math.pi / 2
    f = lambda r: np.cos(k * r) / (k * r)
    df = lambda r: (-k * r * np.sin(k * r) - np.cos(k * r)) / (k * r * r)
    lap_f = lambda r: -k * k * f(r)
    for R in (0.3, 0.5, 0.7):
        direct, by_parts = weakform.green_identity_pairing(f, df, lap_f, TestFunction(R), 1e-5)
        assert direct == pytest.approx(by_parts, abs=1e-6)


def test_implied_potential_for_singular_family():
    k = math.pi / 2
    est = weakform.well_residual(k, regular=False)
    # lim r cos(kr)/(kr) = 1/k
    term = weakform.implied_delta_potential(est, 1.0 / k)
    assert term.radial_power == 1
    assert term.prefactor == pytest.approx(SINGULAR_DELTA.prefactor, rel=1e-9)


def test_family_validation_and_serialization():
    with pytest.raises(ValueError):
        weakform.well_residual(1.0, True, family=[TestFunction(0.3), TestFunction(0.3), TestFunction(0.5)])
    est = weakform.well_residual(1.0, False, family=weakform.default_family(2.0))
    d = est.to_dict()
    assert [p["support_radius"] for p in d["pairings"]] == pytest.approx([0.6, 1.0, 1.4])
    with pytest.raises(ValueError):
        TestFunction(0.0)
