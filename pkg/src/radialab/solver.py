"""Numerov shooting for radial eigenproblems.

The radial equation is written as u'' = Q(r) u with u = r^((D-1)/2) psi
(u = r psi in three dimensions). Origin behaviour is imposed through an
:class:`OriginCondition`; in these variables the two spherical-well
families differ only in the launch data: u(0) = 0 for the regular
sin(kr)/(kr) family and u'(0) = 0 for the singular cos(kr)/(kr) one.
"""
from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .models import EigenResult, Family
from .specfun import Bracket, find_root

log = logging.getLogger(__name__)

EPS_FACTOR = 1e-6
DEFAULT_TOL = 1e-13
_OVERFLOW = 1e200


class ShootingError(RuntimeError):
    pass


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    node_count: int

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ValueError(f"need 0 < r_min < r_max, got ({self.r_min}, {self.r_max})")
        if self.node_count < 3:
            raise ValueError("need at least 3 nodes")

    @property
    def step(self) -> float:
        return (self.r_max - self.r_min) / (self.node_count - 1)

    @property
    def nodes(self) -> np.ndarray:
        r = self.r_min + self.step * np.arange(self.node_count)
        r[-1] = self.r_max
        return r


class OriginKind(str, enum.Enum):
    REGULAR_DIRICHLET = "regular_dirichlet"
    SINGULAR_NEUMANN = "singular_neumann"
    SERIES_START = "series_start"


@dataclass(frozen=True)
class OriginCondition:
    """Launch data at the origin.

    ``series_start`` evaluates u = r**exponent * sum_j coefficients[j] r**j
    on every node with r <= fill_radius (at least the first two nodes).
    """

    kind: OriginKind
    coefficients: tuple = ()
    exponent: float = 0.0
    fill_radius: float = 0.0

    def __post_init__(self):
        if OriginKind(self.kind) is OriginKind.SERIES_START and len(self.coefficients) < 2:
            raise ValueError("series_start needs at least two expansion coefficients")

    @classmethod
    def regular(cls) -> "OriginCondition":
        return cls(OriginKind.REGULAR_DIRICHLET)

    @classmethod
    def singular(cls) -> "OriginCondition":
        return cls(OriginKind.SINGULAR_NEUMANN)

    @classmethod
    def series(cls, coefficients: Sequence[float], exponent: float = 0.0,
               fill_radius: float = 0.0) -> "OriginCondition":
        return cls(OriginKind.SERIES_START, tuple(float(c) for c in coefficients),
                   float(exponent), float(fill_radius))


@dataclass(frozen=True)
class ShootResult:
    eigenvalue: float
    boundary_mismatch: float
    node_count_found: int
    iterations: int
    bracket_used: Bracket

    def to_dict(self) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "boundary_mismatch": self.boundary_mismatch,
            "node_count_found": self.node_count_found,
            "iterations": self.iterations,
            "bracket": [self.bracket_used.lo, self.bracket_used.hi],
        }


def _launch(origin: OriginCondition, r: np.ndarray, q0: float) -> np.ndarray:
    kind = OriginKind(origin.kind)
    if kind is OriginKind.SERIES_START:
        acc = np.zeros_like(r)
        for c in reversed(origin.coefficients):
            acc = acc * r + c
        return r**origin.exponent * acc
    # u'' = q0 u with q0 frozen at the first node: exact for constant Q
    if q0 < 0:
        w = math.sqrt(-q0)
        if kind is OriginKind.REGULAR_DIRICHLET:
            return np.sin(w * r) / w
        return np.cos(w * r)
    if q0 > 0:
        w = math.sqrt(q0)
        if kind is OriginKind.REGULAR_DIRICHLET:
            return np.sinh(w * r) / w
        return np.cosh(w * r)
    return r.copy() if kind is OriginKind.REGULAR_DIRICHLET else np.ones_like(r)


def numerov_integrate(Q: Callable, grid: RadialGrid, origin: OriginCondition) -> np.ndarray:
    """Integrate u'' = Q(r) u outward over ``grid``; returns u at every node.

    The solution is rescaled (with a warning) if it approaches overflow;
    this leaves zeros and sign pattern unchanged.
    """
    r = grid.nodes
    h = grid.step
    q = np.asarray(Q(r), dtype=float) * np.ones_like(r)
    if not np.all(np.isfinite(q)):
        raise ShootingError("Q is not finite on the grid")
    n_start = 2
    if OriginKind(origin.kind) is OriginKind.SERIES_START and origin.fill_radius > r[1]:
        n_start = int(np.searchsorted(r, origin.fill_radius, side="right"))
        n_start = max(2, min(n_start, len(r)))
    u = np.empty_like(r)
    u[:n_start] = _launch(origin, r[:n_start], float(q[0]))

    # summed form: with y = (1 - h^2 Q / 12) u the scheme is
    # y[i+1] - 2 y[i] + y[i-1] = h^2 Q[i] u[i]; carrying the first difference
    # of y instead of two past values keeps rounding error from piling up
    w = (1.0 - h * h / 12.0 * q).tolist()
    hq = (h * h * q).tolist()
    out = u.tolist()
    i0 = n_start - 1
    y = w[i0] * out[i0]
    dy = y - w[i0 - 1] * out[i0 - 1]
    for i in range(i0, len(r) - 1):
        dy += hq[i] * out[i]
        y += dy
        nxt = y / w[i + 1]
        out[i + 1] = nxt
        if abs(nxt) > _OVERFLOW:
            warnings.warn("numerov: rescaling solution to avoid overflow", RuntimeWarning,
                          stacklevel=2)
            out[: i + 2] = [x / _OVERFLOW for x in out[: i + 2]]
            y /= _OVERFLOW
            dy /= _OVERFLOW
    return np.asarray(out)


def count_nodes(u: np.ndarray, rel_floor: float = 1e-9) -> int:
    """Sign changes of u, ignoring samples below rel_floor * max|u| (the end-point zeros)."""
    u = np.asarray(u)
    keep = np.abs(u) > rel_floor * np.max(np.abs(u))
    s = np.sign(u[keep])
    return int(np.count_nonzero(s[1:] != s[:-1]))


class _Counter:
    def __init__(self, f: Callable[[float], float]):
        self.f = f
        self.calls = 0

    def __call__(self, x: float) -> float:
        self.calls += 1
        return self.f(x)


def _sweep(f: Callable[[float], float], points: Sequence[float], wanted: int) -> list[Bracket]:
    brackets = []
    prev_x, prev_f = points[0], f(points[0])
    for x in points[1:]:
        fx = f(x)
        if prev_f * fx < 0:
            brackets.append(Bracket(prev_x, x, prev_f, fx))
            if len(brackets) >= wanted:
                break
        prev_x, prev_f = x, fx
    return brackets


# -------------------------------------------------------------- hard wall


def well_grid(a: float, n: int, node_count: Optional[int] = None,
              eps_factor: float = EPS_FACTOR) -> RadialGrid:
    if node_count is None:
        node_count = max(4001, 400 * (n + 1) + 1)
    return RadialGrid(eps_factor * a, a, node_count)


def _well_origin(family: Family) -> OriginCondition:
    return OriginCondition.regular() if family is Family.REGULAR else OriginCondition.singular()


def _well_mismatch(grid: RadialGrid, origin: OriginCondition) -> Callable[[float], float]:
    def mismatch(k: float) -> float:
        return float(numerov_integrate(lambda r: -k * k + 0.0 * r, grid, origin)[-1])

    return mismatch


def _well_sweep_points(a: float, n_max: int) -> np.ndarray:
    # steps of pi/(4a), offset half a step so no sample lands on an exact root
    step = math.pi / (4.0 * a)
    k_top = (n_max + 1) * math.pi / a
    return step * (np.arange(int(k_top / step) + 1) + 0.5)


def _polish(mismatch: Callable, bracket: Bracket, tol: float, grid: RadialGrid,
            origin: OriginCondition) -> ShootResult:
    counter = _Counter(mismatch)
    k = find_root(counter, bracket, tol)
    u = numerov_integrate(lambda r: -k * k + 0.0 * r, grid, origin)
    return ShootResult(k, float(u[-1]), count_nodes(u[:-1]), counter.calls, bracket)


def eigen_shoot(a: float, family: Family | str, n: int, tol: float = DEFAULT_TOL,
                node_count: Optional[int] = None, eps_factor: float = EPS_FACTOR) -> ShootResult:
    """n-th wavenumber of the hard-wall sphere for one origin family.

    The mismatch u(a; k) is swept over k in (0, (n+1) pi / a]; the n-th sign
    change is polished with Brent and the eigenfunction must have n - 1
    interior nodes.
    """
    family = Family(family)
    if n < 1:
        raise ValueError("n must be >= 1")
    grid = well_grid(a, n, node_count, eps_factor)
    origin = _well_origin(family)
    mismatch = _well_mismatch(grid, origin)
    points = _well_sweep_points(a, n)
    brackets = _sweep(mismatch, points, n)
    if len(brackets) < n:
        raise ShootingError(
            f"found {len(brackets)} of {n} sign changes sweeping k in [{points[0]:.6g}, {points[-1]:.6g}]"
        )
    res = _polish(mismatch, brackets[n - 1], tol, grid, origin)
    if res.node_count_found != n - 1:
        raise ShootingError(f"state n={n} has {res.node_count_found} interior nodes, expected {n - 1}")
    return res


def eigen_spectrum(a: float, family: Family | str, n_max: int, tol: float = DEFAULT_TOL,
                   node_count: Optional[int] = None,
                   eps_factor: float = EPS_FACTOR) -> list[EigenResult]:
    """First n_max numeric eigenpairs from a single sweep."""
    family = Family(family)
    grid = well_grid(a, n_max, node_count, eps_factor)
    origin = _well_origin(family)
    mismatch = _well_mismatch(grid, origin)
    points = _well_sweep_points(a, n_max)
    brackets = _sweep(mismatch, points, n_max)
    if len(brackets) < n_max:
        raise ShootingError(
            f"found {len(brackets)} of {n_max} sign changes sweeping k in [{points[0]:.6g}, {points[-1]:.6g}]"
        )
    out = []
    for n, br in enumerate(brackets, start=1):
        res = _polish(mismatch, br, tol, grid, origin)
        if res.node_count_found != n - 1:
            raise ShootingError(f"state n={n} has {res.node_count_found} interior nodes")
        out.append(EigenResult(n=n, k_n=res.eigenvalue, E_n=0.5 * res.eigenvalue**2, family=family,
                               source="numeric", mismatch=res.boundary_mismatch,
                               iterations=res.iterations))
    return out


# ------------------------------------------------------- Coulomb problems


def coulomb_series(Z: float, s: float, k_squared: float, terms: int = 24) -> list[float]:
    """Frobenius coefficients of u = r^s sum c_j r^j for u'' = [s(s-1)/r^2 - 2Z/r + k^2] u."""
    c = [1.0]
    for j in range(1, terms):
        prev2 = c[j - 2] if j >= 2 else 0.0
        c.append((-2.0 * Z * c[j - 1] + k_squared * prev2) / (j * (2.0 * s + j - 1.0)))
    return c


def _zero_energy_mismatch(a: float, node_count: int, eps_factor: float) -> Callable[[float], float]:
    grid = RadialGrid(eps_factor * a, a, node_count)

    def mismatch(Z: float) -> float:
        origin = OriginCondition.series(coulomb_series(Z, 1.0, 0.0), exponent=1.0)
        return float(numerov_integrate(lambda r: -2.0 * Z / r, grid, origin)[-1])

    return mismatch


def critical_charge(a: float = 1.0, tol: float = 1e-12, node_count: int = 20001,
                    eps_factor: float = EPS_FACTOR) -> float:
    """Smallest Z for which the E = 0 solution u'' + (2Z/r) u = 0 vanishes at r = a.

    The launch uses u = r - Z r^2 + ... from the regular Frobenius series.
    """
    if not a > 0:
        raise ValueError("a must be > 0")
    mismatch = _zero_energy_mismatch(a, node_count, eps_factor)
    points = (0.25 / a) * np.arange(1, 41)
    brackets = _sweep(mismatch, points, 1)
    if not brackets:
        raise ShootingError(f"no sign change sweeping Z in [{points[0]:.6g}, {points[-1]:.6g}]")
    return find_root(mismatch, brackets[0], tol)


def hydrogen_bound_state(D: float, Z: float, tol: float = 1e-13, node_count: int = 20001,
                         eps_factor: float = EPS_FACTOR, box_lengths: float = 30.0) -> ShootResult:
    """Lowest E < 0 for u'' = [(D-1)(D-3)/(4 r^2) - 2Z/r - 2E] u, u(r_max) = 0.

    The box r_max = box_lengths / k_est uses k_est = 2Z/(D-1) only to size
    the grid; the energy sweep spans a factor 256 around it.
    """
    if not D > 1:
        raise ValueError("D must be > 1")
    s = 0.5 * (D - 1.0)
    k_est = 2.0 * Z / (D - 1.0)
    r_max = box_lengths / k_est
    grid = RadialGrid(eps_factor * r_max, r_max, node_count)
    # the Numerov stencil is poor where u ~ r^s bends sharply; take the
    # (entire) Frobenius series out to a fraction of the decay length
    fill = 0.4 / k_est
    centrifugal = s * (s - 1.0)

    def mismatch(E: float) -> float:
        k2 = -2.0 * E
        origin = OriginCondition.series(coulomb_series(Z, s, k2, 40), exponent=s, fill_radius=fill)
        u = numerov_integrate(lambda r: centrifugal / (r * r) - 2.0 * Z / r + k2, grid, origin)
        return float(u[-1] / np.max(np.abs(u)))

    e_scale = 0.5 * k_est * k_est
    points = -e_scale * 2.0 ** np.arange(4.0, -4.0 - 1e-9, -0.125)
    brackets = _sweep(mismatch, points, 1)
    if not brackets:
        raise ShootingError(f"no bound state found sweeping E in [{points[0]:.6g}, {points[-1]:.6g}]")
    counter = _Counter(mismatch)
    E = find_root(counter, brackets[0], tol)
    k2 = -2.0 * E
    origin = OriginCondition.series(coulomb_series(Z, s, k2, 40), exponent=s, fill_radius=fill)
    u = numerov_integrate(lambda r: centrifugal / (r * r) - 2.0 * Z / r + k2, grid, origin)
    # nodes counted inside the classically relevant region only
    inner = u[grid.nodes < 0.5 * r_max]
    return ShootResult(E, float(u[-1]), count_nodes(inner), counter.calls, brackets[0])


def hydrogen_energy_scan(D_list: Sequence[float], Z: float = 1.0,
                         node_count: int = 20001) -> list[tuple[float, float, float]]:
    """(D, E_numeric, E_analytic) for each dimension."""
    out = []
    for D in D_list:
        res = hydrogen_bound_state(D, Z, node_count=node_count)
        out.append((float(D), res.eigenvalue, -2.0 * Z * Z / (D - 1.0) ** 2))
    return out


def zero_energy_wall_values(a: float, charges: Sequence[float], node_count: int = 20001,
                            eps_factor: float = EPS_FACTOR) -> list[float]:
    """u(a) of the regular E = 0 solution for each charge; zeros mark critical charges."""
    mismatch = _zero_energy_mismatch(a, node_count, eps_factor)
    return [mismatch(float(z)) for z in charges]
