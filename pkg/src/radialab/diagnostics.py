"""Origin behaviour of radial wavefunctions: cusps, leading exponents, integrability."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import quad
from .models import Family, RadialModel, catalog
from .specfun import spherical_neumann

CUSP_TOLERANCE = 1e-5
CUSP_STEPS = (1e-3, 5e-4, 2.5e-4)
EXPONENT_WINDOW = tuple(np.geomspace(1e-5, 1e-8, 8))
# fitted exponents this close to a half-integer are snapped before the
# integrability test, so the marginal log-divergent case is decided exactly
EXPONENT_SNAP = 1e-3


class DiagnosticsError(ValueError):
    pass


@dataclass(frozen=True)
class CuspReport:
    model: str
    measured: float
    expected: Optional[float]
    abs_deviation: float
    satisfied: bool
    applicable: bool = True
    literature: Optional[float] = None
    richardson_change: float = 0.0

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "measured": _num(self.measured),
            "expected": self.expected,
            "literature": self.literature,
            "abs_deviation": _num(self.abs_deviation),
            "satisfied": self.satisfied,
            "applicable": self.applicable,
            "richardson_change": _num(self.richardson_change),
        }


@dataclass(frozen=True)
class SingularityReport:
    leading_exponent: float
    fit_residual: float
    dimension: Optional[float] = None
    square_integrable: Optional[bool] = None
    density_exponent: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "leading_exponent": self.leading_exponent,
            "fit_residual": self.fit_residual,
            "dimension": self.dimension,
            "square_integrable": self.square_integrable,
            "density_exponent": self.density_exponent,
        }


def _num(x):
    return x if math.isfinite(x) else None


def _one_sided_log_derivative(psi: Callable, h: float) -> float:
    p0, p1, p2 = (float(v) for v in psi(np.array([0.0, h, 2.0 * h])))
    return (-3.0 * p0 + 4.0 * p1 - p2) / (2.0 * h) / p0


def log_derivative_at_origin(psi: Callable, steps: Sequence[float] = CUSP_STEPS,
                             scale: float = 1.0) -> tuple[float, float]:
    """psi'(0+)/psi(0) from one-sided second-order stencils plus Richardson extrapolation.

    Returns (estimate, change between the last two extrapolation levels).
    """
    hs = [h * scale for h in steps]
    table = [[_one_sided_log_derivative(psi, h) for h in hs]]
    # stencil error ~ c2 h^2 + c3 h^3 + ...
    for order in (2, 3)[: len(hs) - 1]:
        prev = table[-1]
        row = []
        for i in range(len(prev) - 1):
            ratio = (hs[i] / hs[i + 1]) ** order
            row.append((ratio * prev[i + 1] - prev[i]) / (ratio - 1.0))
        table.append(row)
    best = table[-1][-1]
    change = abs(table[-1][-1] - table[-2][-1])
    return best, change


def cusp_check(model: RadialModel, tolerance: float = CUSP_TOLERANCE) -> CuspReport:
    """Compare psi'(0+)/psi(0) with the model's cusp value."""
    if model.family is Family.SINGULAR or not math.isfinite(float(model.profile(np.array([0.0]))[0])):
        return CuspReport(model.name, math.nan, model.cusp_expected, math.inf, False,
                          applicable=False, literature=model.cusp_literature)
    scale = model.params.get("a", 1.0)
    measured, change = log_derivative_at_origin(model.profile, scale=scale)
    expected = model.cusp_expected
    if expected is None:
        return CuspReport(model.name, measured, None, math.nan, False, True,
                          model.cusp_literature, change)
    dev = abs(measured - expected)
    return CuspReport(model.name, measured, expected, dev, dev <= tolerance, True,
                      model.cusp_literature, change)


def leading_exponent(psi: Callable, r_window: Sequence[float] = EXPONENT_WINDOW,
                     D: Optional[float] = None) -> SingularityReport:
    """Slope of log|psi| against log r over a window approaching the origin."""
    r = np.asarray(r_window, dtype=float)
    if np.any(r <= 0):
        raise DiagnosticsError("window must lie in r > 0")
    vals = np.asarray(psi(r), dtype=float)
    if np.any(vals == 0) or not (np.all(vals > 0) or np.all(vals < 0)):
        raise DiagnosticsError("psi changes sign (or vanishes) inside the fit window")
    x, y = np.log(r), np.log(np.abs(vals))
    (slope, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
    resid = float(np.sqrt(res[0] / len(r))) if len(res) else 0.0
    p = float(slope)
    if D is None:
        return SingularityReport(p, resid)
    density = 2.0 * _snap(p) + D - 1.0
    return SingularityReport(p, resid, D, density > -1.0, density)


def _snap(p: float) -> float:
    nearest = round(2.0 * p) / 2.0
    return nearest if abs(p - nearest) <= EXPONENT_SNAP else p


def square_integrability(l: int, D: int) -> bool:
    """Is an r^-(l+1) singularity square-integrable in D dimensions?

    The density r^(-2(l+1)) times r^(D-1) must be integrable at 0; the
    marginal exponent -1 (log divergence) is not.
    """
    if l < 0 or D < 1:
        raise DiagnosticsError("need l >= 0 and D >= 1")
    return -2 * (l + 1) + D - 1 > -1


def neumann_norm(l: int, D: int, k: float = 1.0, a: float = 1.0) -> quad.QuadResult:
    """Quadrature of |n_l(k r)|^2 over the D-ball of radius a."""
    def f(r):
        return np.array([spherical_neumann(l, k * x) ** 2 for x in np.atleast_1d(r)])

    return quad.integrate_radial(f, 0.0, a, D, -2.0 * (l + 1))


def confirm_square_integrability(model: RadialModel) -> tuple[bool, bool]:
    """(analytic verdict from the origin exponent, quadrature verdict from norm())."""
    density = 2.0 * model.origin_exponent + model.dimension - 1.0
    analytic = density > -1.0
    res = quad.norm(model)
    return analytic, bool(res.converged and not res.divergent)


@dataclass(frozen=True)
class ClassificationRow:
    model: str
    exponent: float
    square_integrable: bool
    norm_converged: bool
    cusp_measured: Optional[float]
    cusp_expected: Optional[float]
    cusp_satisfied: Optional[bool]

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "p": self.exponent,
            "square_integrable": self.square_integrable,
            "norm_converged": self.norm_converged,
            "cusp_measured": self.cusp_measured,
            "cusp_expected": self.cusp_expected,
            "satisfied": self.cusp_satisfied,
        }


def _window_for(model: RadialModel) -> Sequence[float]:
    return tuple(np.asarray(EXPONENT_WINDOW) * model.params.get("a", 1.0))


def classify_model(model: RadialModel) -> ClassificationRow:
    sing = leading_exponent(model.profile, _window_for(model), model.dimension)
    _, numeric = confirm_square_integrability(model)
    cusp = cusp_check(model)
    return ClassificationRow(
        model=model.name,
        exponent=sing.leading_exponent,
        square_integrable=bool(sing.square_integrable),
        norm_converged=numeric,
        cusp_measured=_num(cusp.measured) if cusp.applicable else None,
        cusp_expected=cusp.expected,
        cusp_satisfied=cusp.satisfied,
    )


def classify_neumann(l: int, D: int = 3) -> ClassificationRow:
    sing = leading_exponent(lambda r: np.array([spherical_neumann(l, x) for x in r]),
                            EXPONENT_WINDOW[:4] if l > 2 else EXPONENT_WINDOW, D)
    res = neumann_norm(l, D)
    return ClassificationRow(f"neumann-l{l}", sing.leading_exponent, bool(sing.square_integrable),
                             bool(res.converged), None, None, None)


def classify_catalog(a: float = 1.0, Z: float = 1.0, D: float = 3.0,
                     neumann_orders: Sequence[int] = (0, 1, 2)) -> list[ClassificationRow]:
    rows = [classify_model(m) for m in catalog(a, Z, D)]
    rows += [classify_neumann(l, 3) for l in neumann_orders]
    return rows


def rows_to_csv(rows: Sequence[ClassificationRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["model", "p", "square_integrable", "cusp_measured", "cusp_expected", "satisfied"])
    for row in rows:
        w.writerow([row.model, repr(row.exponent), row.square_integrable,
                    "" if row.cusp_measured is None else repr(row.cusp_measured),
                    "" if row.cusp_expected is None else repr(row.cusp_expected),
                    "" if row.cusp_satisfied is None else row.cusp_satisfied])
    return buf.getvalue()
