import json

import numpy as np
import pytest

from radialab import diagnostics, models
from radialab.diagnostics import DiagnosticsError
from radialab.models import Family
from radialab.specfun import spherical_neumann

V1 = 3.8317059702075125


@pytest.mark.parametrize("D", [2, 3, 4, 6])
@pytest.mark.parametrize("Z", [1.0, 2.0])
def test_hydrogen_cusp(D, Z):
    rep = diagnostics.cusp_check(models.hydrogen_ground_state(D, Z))
    assert rep.satisfied and rep.applicable
    assert rep.measured == pytest.approx(-2 * Z / (D - 1), abs=1e-5)
    assert rep.richardson_change < 1e-7


def test_cusp_examples():
    assert diagnostics.cusp_check(models.hydrogen_ground_state(3, 1)).expected == -1.0
    assert diagnostics.cusp_check(models.hydrogen_ground_state(4, 1)).expected == pytest.approx(-2 / 3)
    sing = diagnostics.cusp_check(models.hydrogen_in_well(1.0, V1**2 / 8, Family.SINGULAR))
    assert not sing.applicable and not sing.satisfied


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 4.0])
def test_delta_cusp(alpha):
    rep = diagnostics.cusp_check(models.delta_1d(alpha), tolerance=1e-8)
    assert abs(rep.measured + alpha / 2) <= 1e-8 and rep.satisfied


def test_in_well_cusp_sign():
    zc = V1**2 / 8
    rep = diagnostics.cusp_check(models.hydrogen_in_well(1.0, zc, Family.REGULAR))
    # series oracle: J1(v)/sqrt(r) = sqrt(2Z) (1 - Z r + Z^2 r^2/3 - ...)
    assert rep.measured == pytest.approx(-zc, abs=1e-8)
    assert rep.literature == pytest.approx(zc)
    assert abs(rep.measured - rep.literature) > 1.0
    d = rep.to_dict()
    assert {"measured", "expected", "literature"} <= set(d)


def test_satisfied_iff_within_tolerance():
    m = models.hydrogen_ground_state(3, 1.0)
    rep = diagnostics.cusp_check(m, tolerance=1e-5)
    assert rep.satisfied == (rep.abs_deviation <= 1e-5)
    tight = diagnostics.cusp_check(m, tolerance=1e-16)
    assert tight.satisfied == (tight.abs_deviation <= 1e-16)


def test_richardson_consistency_on_catalog():
    for m in models.catalog():
        rep = diagnostics.cusp_check(m)
        if rep.applicable:
            assert rep.richardson_change < 1e-7, m.name


@pytest.mark.parametrize("p", [-2.0, -1.0, 0.0, 1.0])
def test_exponent_fit_on_synthetic(p):
    rep = diagnostics.leading_exponent(lambda r: r**p * (1 + r))
    assert rep.leading_exponent == pytest.approx(p, abs=1e-4)


def test_exponent_examples():
    s = models.spherical_well_singular(1, 1.0)
    assert diagnostics.leading_exponent(s.profile).leading_exponent == pytest.approx(-1, abs=1e-3)
    r = models.spherical_well_regular(1, 1.0)
    assert diagnostics.leading_exponent(r.profile).leading_exponent == pytest.approx(0, abs=1e-3)
    k = 2.0
    n1 = lambda x: np.array([spherical_neumann(1, k * v) for v in x])
    assert diagnostics.leading_exponent(n1).leading_exponent == pytest.approx(-2, abs=1e-3)


def test_exponent_sign_change_rejected():
    with pytest.raises(DiagnosticsError):
        diagnostics.leading_exponent(np.sin, r_window=np.linspace(4.0, 2.0, 8))
    with pytest.raises(DiagnosticsError):
        diagnostics.leading_exponent(lambda r: r, r_window=[1.0, 0.0])


def test_singularity_report_integrability_rule():
    rep = diagnostics.leading_exponent(lambda r: 1 / r, D=3)
    assert rep.square_integrable and rep.density_exponent == pytest.approx(0.0)
    # marginal: 2p + D - 1 = -1 exactly after snapping, so not integrable
    marginal = diagnostics.leading_exponent(lambda r: 1 / r, D=2)
    assert marginal.density_exponent == pytest.approx(-1.0) and not marginal.square_integrable
    json.dumps(rep.to_dict())


def test_square_integrability_examples():
    assert diagnostics.square_integrability(0, 3)
    assert not diagnostics.square_integrability(1, 3)
    assert not diagnostics.square_integrability(0, 2)
    assert diagnostics.square_integrability(1, 5)
    with pytest.raises(DiagnosticsError):
        diagnostics.square_integrability(-1, 3)


@pytest.mark.parametrize("l,D", [(0, 3), (1, 3), (2, 3), (0, 2), (1, 4), (1, 5)])
def test_neumann_quadrature_agrees_with_exponent_rule(l, D):
    res = diagnostics.neumann_norm(l, D)
    assert res.converged == diagnostics.square_integrability(l, D)
    assert res.divergent != diagnostics.square_integrability(l, D)


def test_criterion_equivalence_on_catalog():
    for m in models.catalog():
        analytic, numeric = diagnostics.confirm_square_integrability(m)
        assert analytic == numeric, m.name


def test_classify_catalog_table():
    rows = {r.model: r for r in diagnostics.classify_catalog()}
    assert rows["well-singular"].exponent == pytest.approx(-1, abs=1e-3)
    assert rows["well-singular"].square_integrable
    assert rows["hydrogen"].cusp_satisfied and rows["hydrogen"].cusp_measured == pytest.approx(-1)
    assert not rows["neumann-l1"].square_integrable
    assert not rows["hydrogen-in-well-singular"].cusp_satisfied
    csv_text = diagnostics.rows_to_csv(list(rows.values()))
    assert csv_text.splitlines()[0] == "model,p,square_integrable,cusp_measured,cusp_expected,satisfied"
    assert len(csv_text.splitlines()) == len(rows) + 1


def test_classification_is_deterministic():
    assert diagnostics.rows_to_csv(diagnostics.classify_catalog()) == \
        diagnostics.rows_to_csv(diagnostics.classify_catalog())
