"""Radial quadrature over D-balls.

Everything reduces to ``integrate_radial``: adaptive Gauss-Kronrod (7/15)
bisection of  int f(r) Omega_D r^(D-1) dr, with a power substitution
r = t**beta at an r = 0 endpoint when the integrand has an integrable
power-law singularity there. When refinement stalls, an endpoint-cutoff
study decides whether the integral genuinely diverges.
"""
from __future__ import annotations

import csv
import heapq
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .models import DeltaTerm, PotentialSpec, RadialModel
from .specfun import solid_angle

# Kronrod 15-point nodes (non-negative half) and weights; Gauss 7-point
# weights sit on the odd-indexed Kronrod nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps

DEFAULT_TOL = 1e-11
MAX_SUBDIVISIONS = 400
# refinement never splits intervals narrower than this fraction of the span
MIN_WIDTH_FRACTION = 1e-30
# endpoint cutoffs (fractions of the span) for the divergence study
CUTOFF_FRACTIONS = tuple(10.0 ** (-2 * j) for j in range(2, 8))
# successive cutoff increments that shrink by less than this factor count as divergent
DIVERGENCE_RATIO = 0.5


class QuadratureError(ArithmeticError):
    pass


class ScanFitError(ValueError):
    pass


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    converged: bool
    divergent: bool
    subdivisions: int

    def __post_init__(self):
        if self.converged and self.divergent:
            raise ValueError("a result cannot be both converged and divergent")
        if not self.abs_error_estimate >= 0:
            raise ValueError("error estimate must be >= 0")

    def to_dict(self) -> dict:
        return {
            "value": _json_float(self.value),
            "abs_error_estimate": _json_float(self.abs_error_estimate),
            "converged": self.converged,
            "divergent": self.divergent,
            "subdivisions": self.subdivisions,
        }


def _json_float(x: float):
    if math.isfinite(x):
        return float(x)
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


# ------------------------------------------------------------- core engine


def _gk15(g: Callable, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    x = center + half * KRONROD_NODES
    y = np.asarray(g(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)][0]
        raise QuadratureError(f"non-finite integrand at r = {bad!r}")
    kron = half * float(KRONROD_WEIGHTS @ y)
    gauss = half * float(GAUSS_WEIGHTS @ y)
    # QUADPACK-style error heuristic
    mean = kron / (b - a) if b != a else 0.0
    resasc = abs(half) * float(KRONROD_WEIGHTS @ np.abs(y - mean))
    resabs = abs(half) * float(KRONROD_WEIGHTS @ np.abs(y))
    err = abs(kron - gauss)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50 * _EPS):
        err = max(50.0 * _EPS * resabs, err)
    return kron, float(err)


def _adaptive(g: Callable, a: float, b: float, tol: float, max_sub: int):
    """Returns (value, error, converged, subdivisions)."""
    value, err = _gk15(g, a, b)
    heap = [(-err, a, b, value, err)]
    total, total_err = value, err
    min_width = abs(b - a) * MIN_WIDTH_FRACTION
    n = 1
    while total_err > max(tol, tol * abs(total)):
        if n >= max_sub:
            return total, total_err, False, n
        neg, lo, hi, v, e = heapq.heappop(heap)
        if hi - lo <= min_width:
            heapq.heappush(heap, (neg, lo, hi, v, e))
            return total, total_err, False, n
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(g, lo, mid)
        v2, e2 = _gk15(g, mid, hi)
        total += v1 + v2 - v
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
        n += 1
        # re-sum to keep rounding from accumulating in the running totals
        if n % 64 == 0:
            total = math.fsum(item[3] for item in heap)
        total_err = math.fsum(item[4] for item in heap)
    total = math.fsum(item[3] for item in heap)
    return total, total_err, True, n


def _endpoint_beta(hint: float, D: float) -> float:
    # integrand ~ r^(hint + D - 1); r = t^beta turns it into ~ t^(beta (hint + D) - 1)
    s = hint + D
    if 0.0 < s < 1.0:
        return 1.0 / s
    return 1.0


def _finite_interval(F: Callable, lo: float, hi: float, beta: float, tol: float, max_sub: int):
    if beta == 1.0 or lo != 0.0:
        return _adaptive(F, lo, hi, tol, max_sub)

    def g(t):
        return F(t**beta) * beta * t ** (beta - 1.0)

    return _adaptive(g, 0.0, hi ** (1.0 / beta), tol, max_sub)


def _tail(F: Callable, start: float, tol: float, max_sub: int):
    def g(t):
        return F(start + t / (1.0 - t)) / (1.0 - t) ** 2

    return _adaptive(g, 0.0, 1.0, tol, max_sub)


def _cutoff_study(F: Callable, lo: float, hi: float, tol: float, max_sub: int) -> tuple[bool, float]:
    """Integrate on [lo + delta, hi] for shrinking delta; flags divergence at lo."""
    span = hi - lo if math.isfinite(hi) else 1.0
    top = hi if math.isfinite(hi) else lo + 1.0
    values = []
    for frac in CUTOFF_FRACTIONS:
        v, _, _, _ = _adaptive(F, lo + frac * span, top, tol, max_sub)
        values.append(v)
    incs = np.diff(values)
    if np.any(incs == 0.0):
        return False, values[-1]
    ratios = np.abs(incs[1:] / incs[:-1])
    same_sign = np.all(np.sign(incs[-3:]) == np.sign(incs[-1]))
    divergent = bool(same_sign and np.all(ratios[-3:] >= DIVERGENCE_RATIO))
    return divergent, math.copysign(math.inf, incs[-1]) if divergent else values[-1]


def integrate_radial(f: Callable, lo: float, hi: float, D: float = 3.0,
                     singular_exponent_hint: float = 0.0, tol: float = DEFAULT_TOL,
                     max_subdivisions: int = MAX_SUBDIVISIONS) -> QuadResult:
    """int_lo^hi f(r) Omega_D r^(D-1) dr.

    ``f`` must accept numpy arrays. ``singular_exponent_hint`` is the
    exponent s in f ~ r^s near r = 0; it selects the endpoint substitution.
    ``hi`` may be ``inf`` for decaying integrands.
    """
    if not lo >= 0:
        raise ValueError("lo must be >= 0")
    if not lo < hi:
        raise ValueError("need lo < hi")
    if not tol > 0:
        raise ValueError("tol must be > 0")
    omega = solid_angle(D)
    weight_power = D - 1.0

    def F(r):
        r = np.asarray(r, dtype=float)
        return omega * np.asarray(f(r), dtype=float) * r**weight_power

    beta = _endpoint_beta(singular_exponent_hint, D)
    if math.isinf(hi):
        split = lo + 1.0
        v1, e1, c1, n1 = _finite_interval(F, lo, split, beta, tol, max_subdivisions)
        v2, e2, c2, n2 = _tail(F, split, tol, max_subdivisions)
        value, err, ok, n = v1 + v2, e1 + e2, c1 and c2, n1 + n2
    else:
        value, err, ok, n = _finite_interval(F, lo, hi, beta, tol, max_subdivisions)
    if ok:
        return QuadResult(value, err, True, False, n)
    divergent, estimate = _cutoff_study(F, lo, hi, tol, max_subdivisions)
    if divergent:
        return QuadResult(estimate, math.inf, False, True, n)
    return QuadResult(value, err, False, False, n)


# --------------------------------------------------------------- expectations


def _density_hint(model: RadialModel) -> float:
    return 2.0 * model.origin_exponent


def _density(model: RadialModel) -> Callable:
    def rho(r):
        return np.abs(model.psi(r)) ** 2

    return rho


def norm(model: RadialModel, tol: float = DEFAULT_TOL) -> QuadResult:
    """int |psi|^2 dV over the model's ball (raw profile if unnormalised)."""
    return integrate_radial(_density(model), 0.0, model.r_max, model.dimension,
                            _density_hint(model), tol)


def normalized(model: RadialModel, tol: float = DEFAULT_TOL) -> RadialModel:
    """Copy of ``model`` with a numerically determined normalisation constant."""
    from dataclasses import replace

    if model.normalized:
        return model
    res = norm(model, tol)
    if not res.converged:
        raise QuadratureError(f"cannot normalise {model.name}: norm integral did not converge")
    return replace(model, normalization=1.0 / math.sqrt(res.value))


def _expectation(model: RadialModel, weight: Callable, extra_exponent: float,
                 tol: float) -> QuadResult:
    rho = _density(model)

    def f(r):
        return weight(r) * rho(r)

    res = integrate_radial(f, 0.0, model.r_max, model.dimension,
                           _density_hint(model) + extra_exponent, tol)
    if model.normalized or res.divergent:
        return res
    n = norm(model, tol)
    value = res.value / n.value
    err = abs(value) * (res.abs_error_estimate / max(abs(res.value), 1e-300)
                        + n.abs_error_estimate / n.value)
    return QuadResult(value, err, res.converged and n.converged, False,
                      res.subdivisions + n.subdivisions)


def expectation_r(model: RadialModel, tol: float = DEFAULT_TOL) -> QuadResult:
    """<r> = int r |psi|^2 dV."""
    return _expectation(model, lambda r: r, 1.0, tol)


def expectation_coulomb(model: RadialModel, tol: float = DEFAULT_TOL) -> QuadResult:
    """<-Z/r>; flagged divergent when the density is too singular at the origin."""
    z = model.potential.coulomb_strength
    if z == 0.0:
        return QuadResult(0.0, 0.0, True, False, 0)
    return _expectation(model, lambda r: -z / r, -1.0, tol)


def expectation_kinetic(model: RadialModel, tol: float = DEFAULT_TOL,
                        rel_step: float = 1e-5) -> QuadResult:
    """<T> = (1/2) int |psi'|^2 dV with psi' from relative central differences.

    The reported error adds the differencing error, estimated by repeating
    the integral at twice the step (O(h^2) truncation) plus a rounding term.
    """

    def integral(step: float) -> QuadResult:
        def grad2(r):
            r = np.asarray(r, dtype=float)
            d = (model.psi(r * (1 + step)) - model.psi(r * (1 - step))) / (2 * r * step)
            return 0.5 * d * d

        return integrate_radial(grad2, 0.0, model.r_max, model.dimension,
                                2.0 * model.origin_exponent - 2.0, tol)

    res = integral(rel_step)
    if res.divergent:
        return res
    coarse = integral(2.0 * rel_step)
    fd_err = abs(res.value - coarse.value) / 3.0 + 10.0 * _EPS / rel_step * abs(res.value)
    err = res.abs_error_estimate + fd_err
    if model.normalized:
        return QuadResult(res.value, err, res.converged and coarse.converged, False,
                          res.subdivisions + coarse.subdivisions)
    n = norm(model, tol)
    return QuadResult(res.value / n.value, err / n.value + abs(res.value) * n.abs_error_estimate / n.value**2,
                      res.converged and coarse.converged and n.converged, False,
                      res.subdivisions + coarse.subdivisions + n.subdivisions)


# --------------------------------------------------------- regularised delta


def gaussian_mollifier(r, eps: float, D: float = 3.0):
    """Normalised D-dimensional Gaussian exp(-r^2 / 2 eps^2) / ((2 pi)^(D/2) eps^D)."""
    r = np.asarray(r, dtype=float)
    return np.exp(-0.5 * (r / eps) ** 2) / ((2.0 * math.pi) ** (0.5 * D) * eps**D)


@dataclass(frozen=True)
class RegularizationScan:
    epsilons: tuple
    values: tuple
    fitted_exponent: float
    fitted_prefactor: float
    r_squared: float
    limit_verdict: str

    def __post_init__(self):
        eps = np.asarray(self.epsilons)
        if len(eps) < 4:
            raise ValueError("a scan needs at least 4 epsilons")
        if not np.all(eps > 0) or not np.all(np.diff(eps) < 0):
            raise ValueError("epsilons must be positive and strictly decreasing")

    def to_dict(self) -> dict:
        return {
            "epsilons": list(self.epsilons),
            "values": list(self.values),
            "fitted_exponent": self.fitted_exponent,
            "fitted_prefactor": self.fitted_prefactor,
            "r_squared": self.r_squared,
            "limit_verdict": self.limit_verdict,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epsilon", "value"])
        for e, v in zip(self.epsilons, self.values):
            w.writerow([repr(float(e)), repr(float(v))])
        return buf.getvalue()


def classify_exponent(exponent: float, finite_band: float = 0.1) -> str:
    if exponent > finite_band:
        return "zero"
    if exponent < -finite_band:
        return "divergent"
    return "finite"


def fit_power_law(epsilons: Sequence[float], values: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares fit values ~ prefactor * eps**exponent; returns (exponent, prefactor, R^2)."""
    v = np.asarray(values, dtype=float)
    if np.any(v == 0) or not (np.all(v > 0) or np.all(v < 0)):
        raise ScanFitError("values change sign (or vanish) across the scan; no power law")
    x = np.log(np.asarray(epsilons, dtype=float))
    y = np.log(np.abs(v))
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(np.sign(v[0]) * math.exp(intercept)), r2


def delta_expectation_at(model: RadialModel, term: DeltaTerm, eps: float,
                         tol: float = 1e-12) -> float:
    """<prefactor r^p delta(r)> with delta replaced by a Gaussian of width eps."""
    D = model.dimension
    p = term.radial_power
    if not model.normalized:
        model = normalized(model)
    rho = _density(model)

    def f(r):
        return term.prefactor * r**p * gaussian_mollifier(r, eps, D) * rho(r)

    hi = min(model.r_max, 12.0 * eps)
    res = integrate_radial(f, 0.0, hi, D, _density_hint(model) + p, tol)
    if not res.converged:
        raise QuadratureError(f"regularised delta integral failed at eps = {eps}")
    return res.value


def regularized_delta_expectation(model: RadialModel, potential: PotentialSpec | DeltaTerm,
                                  epsilons: Sequence[float], n_jobs: int = 1,
                                  finite_band: float = 0.1) -> RegularizationScan:
    term = potential if isinstance(potential, DeltaTerm) else potential.delta_term
    if term is None:
        raise ValueError("potential has no delta term")
    eps = tuple(float(e) for e in epsilons)
    if not model.normalized:
        model = normalized(model)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            values = tuple(pool.map(lambda e: delta_expectation_at(model, term, e), eps))
    else:
        values = tuple(delta_expectation_at(model, term, e) for e in eps)
    exponent, prefactor, r2 = fit_power_law(eps, values)
    return RegularizationScan(eps, values, exponent, prefactor, r2,
                              classify_exponent(exponent, finite_band))


DEFAULT_EPSILONS = (1e-2, 1e-3, 1e-4, 1e-5)


@dataclass(frozen=True)
class EnergyReport:
    model: str
    kinetic: QuadResult
    coulomb: QuadResult
    delta: Optional[RegularizationScan]
    total_verdict: str
    total: float

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "kinetic": self.kinetic.to_dict(),
            "coulomb": self.coulomb.to_dict(),
            "delta": None if self.delta is None else self.delta.to_dict(),
            "total_verdict": self.total_verdict,
            "total": _json_float(self.total),
        }


def energy_report(model: RadialModel, epsilons: Sequence[float] = DEFAULT_EPSILONS) -> EnergyReport:
    """Split <H> into kinetic, Coulomb and hidden-delta parts.

    The eigen-equation pins <T> + <V_delta> to the eigenvalue minus the
    Coulomb part, so the total is divergent exactly when <V_coulomb> is.
    """
    kinetic = expectation_kinetic(model)
    coulomb = expectation_coulomb(model)
    delta = None
    if model.potential.delta_term is not None and model.dimension == 3.0:
        delta = regularized_delta_expectation(model, model.potential, epsilons)
    if coulomb.divergent:
        return EnergyReport(model.name, kinetic, coulomb, delta, "divergent",
                            math.copysign(math.inf, coulomb.value))
    return EnergyReport(model.name, kinetic, coulomb, delta, "finite", model.energy)
