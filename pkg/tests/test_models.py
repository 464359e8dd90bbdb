import math

import numpy as np
import pytest
from scipy import special

from radialab import models
from radialab.models import EnergyStatus, Family, ModelError


def test_hydrogen_energies():
    assert models.hydrogen_ground_state(3, 1.0).energy == pytest.approx(-0.5, rel=1e-15)
    assert models.hydrogen_ground_state(3, 2.0).energy == pytest.approx(-2.0, rel=1e-15)
    assert models.hydrogen_ground_state(2, 1.0).energy == pytest.approx(-2.0, rel=1e-15)
    for D in (1.5, 2, 4, 6):
        assert models.hydrogen_ground_state(D, 1.3).energy == pytest.approx(
            -2 * 1.3**2 / (D - 1) ** 2, rel=1e-14)


def test_hydrogen_hidden_delta_only_for_integer_dimension():
    h3 = models.hydrogen_ground_state(3, 1.0)
    term = h3.potential.delta_term
    # -Z Omega_3 / (D - 1) r^2 delta(r)
    assert term.prefactor == pytest.approx(-4 * math.pi / 2, rel=1e-15)
    assert term.radial_power == 2
    assert models.hydrogen_ground_state(2.5, 1.0).potential.delta_term is None


def test_hydrogen_scaled_examples():
    m = models.hydrogen_scaled(3, 1.0)
    assert m.wavenumber == pytest.approx(2.0)
    assert m.energy == pytest.approx(-2.0)
    r = np.linspace(0, 10, 101)
    for D in (2.0, 1.5):
        other = models.hydrogen_scaled(D, 1.0)
        assert other.energy == pytest.approx(m.energy, rel=1e-15)
        np.testing.assert_allclose(other.profile(r), m.profile(r), rtol=0, atol=1e-15)


def test_delta_1d_examples():
    assert models.delta_1d(4.0).wavenumber == pytest.approx(models.hydrogen_scaled(1.0 + 1e-12, 1.0).wavenumber,
                                                            rel=1e-9)
    assert models.delta_1d(2.0).energy == pytest.approx(-0.5, rel=1e-15)
    assert -1e-12 < models.delta_1d(1e-6).energy < 0
    with pytest.raises(ModelError):
        models.delta_1d(0.0)


@pytest.mark.parametrize("D", [1.5, 2, 3, 5])
@pytest.mark.parametrize("Z", [0.5, 1, 2])
def test_dimensional_bridge(D, Z):
    scaled = models.hydrogen_scaled(D, Z)
    delta = models.delta_1d(4 * Z)
    assert abs(scaled.energy - delta.energy) <= 1e-12
    r = np.linspace(0, 10, 1001)
    assert np.max(np.abs(scaled.profile(r) - delta.profile(r))) <= 1e-12


def test_well_examples():
    assert models.spherical_well_regular(1, 1).wavenumber == pytest.approx(math.pi)
    assert models.spherical_well_regular(1, 1).energy == pytest.approx(math.pi**2 / 2)
    assert models.spherical_well_regular(2, 1).wavenumber == pytest.approx(2 * math.pi)
    assert models.spherical_well_regular(1, 2).energy == pytest.approx(math.pi**2 / 8)
    s = models.spherical_well_singular(1, 1)
    assert s.energy == pytest.approx(math.pi**2 / 8)
    assert s.normalization == pytest.approx(math.sqrt(math.pi / 8))
    assert models.spherical_well_singular(3, 1).wavenumber == pytest.approx(5 * math.pi / 2)
    assert s.potential.delta_term == models.SINGULAR_DELTA


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 7.0])
def test_energy_ratio(a):
    assert models.energy_ratio_ground(a) == pytest.approx(4.0, rel=1e-15)


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
def test_wall_boundary_condition(n, a):
    for m in (models.spherical_well_regular(n, a), models.spherical_well_singular(n, a)):
        assert abs(m.psi(np.array([a]))[0]) <= 1e-12


def test_interlacing():
    reg = [m.k_n for m in models.analytic_spectrum(1.0, Family.REGULAR, 20)]
    sing = [m.k_n for m in models.analytic_spectrum(1.0, Family.SINGULAR, 20)]
    lower = [0.0] + reg[:-1]
    for lo, s, hi in zip(lower, sing, reg):
        assert lo < s < hi
    merged = sorted(reg + sing)
    assert merged[0::2] == sing and merged[1::2] == reg


def test_in_well_regular_profile():
    Z = 1.2
    m = models.hydrogen_in_well(1.0, Z, Family.REGULAR)
    r = np.array([0.0, 1e-3, 0.3, 0.9])
    expected = special.j1(np.sqrt(8 * Z * r[1:])) / np.sqrt(r[1:])
    np.testing.assert_allclose(m.profile(r)[1:], expected, rtol=1e-12)
    assert m.profile(r)[0] == pytest.approx(math.sqrt(2 * Z), rel=1e-15)
    # series J1(v)/sqrt(r) = sqrt(2Z) (1 - Z r + ...): slope over value is -Z
    assert m.cusp_expected == -Z and m.cusp_literature == Z
    assert m.energy_status is EnergyStatus.ZERO


def test_in_well_singular_profile():
    m = models.hydrogen_in_well(1.0, 1.0, "singular")
    r = np.array([1e-6, 1e-5, 0.5])
    np.testing.assert_allclose(m.profile(r), -special.y1(np.sqrt(8 * r)) / np.sqrt(r), rtol=1e-12)
    # -Y1(v)/sqrt(r) -> 2/(pi v sqrt(r)) = 1/(pi sqrt(2Z) r), up to an r ln r correction
    np.testing.assert_allclose(r[:2] * m.profile(r[:2]), 1 / (math.pi * math.sqrt(2)), rtol=1e-3)
    assert m.energy_status is EnergyStatus.DIVERGENT
    assert m.origin_exponent == -1.0


def test_in_well_regular_vanishes_at_critical_charge():
    v1 = 3.8317059702075125
    a = 1.7
    m = models.hydrogen_in_well(a, v1**2 / (8 * a), Family.REGULAR)
    assert abs(m.profile(np.array([a]))[0]) < 1e-14


def test_catalog_is_deterministic():
    first = models.catalog()
    second = models.catalog()
    assert [m.name for m in first] == [m.name for m in second]
    assert [m.to_dict() for m in first] == [m.to_dict() for m in second]
    assert len({m.name for m in first}) == 7


def test_validation():
    with pytest.raises(ModelError):
        models.spherical_well_regular(0)
    with pytest.raises(ModelError):
        models.spherical_well_singular(1, -1.0)
    with pytest.raises(ModelError):
        models.hydrogen_ground_state(1.0, 1.0)
    with pytest.raises(ModelError):
        models.hydrogen_ground_state(3, -1.0)
