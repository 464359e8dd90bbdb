"""Measure point sources hidden in the distributional Laplacian of a radial function.

For a radial f and smooth compactly supported test functions phi, the
pairing

    S(phi) = int [ f lap(phi) + sign * k^2 f phi + w(r) f phi ] dV

equals c * phi(0) exactly when (lap + sign * k^2 + w) f = c delta(r) as a
distribution. Evaluating S over a family of bumps with different radii
and checking that S / phi(0) does not depend on the radius separates a
true point source from an extended one.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .models import DeltaTerm
from .quad import integrate_radial

DEFAULT_RADII = (0.3, 0.5, 0.7)
ZERO_THRESHOLD = 1e-8
SPREAD_TOLERANCE = 1e-6
PAIRING_TOL = 1e-13


class SignConvention(str, enum.Enum):
    HELMHOLTZ = "helmholtz"  # lap f + k^2 f
    SCHRODINGER_BOUND = "schrodinger_bound"  # lap f - k^2 f (bound states, screening)


class FamilyInconsistencyError(ValueError):
    """S(phi)/phi(0) depends on the test function: the source is not a point source."""

    def __init__(self, message: str, estimate: "DeltaEstimate"):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class TestFunction:
    """Bump exp(-1 / (1 - (r/R)^2)) for r < R, zero beyond."""

    __test__ = False  # not a pytest class

    support_radius: float
    label: str = ""

    def __post_init__(self):
        if not self.support_radius > 0:
            raise ValueError("support radius must be > 0")

    @property
    def center_value(self) -> float:
        return math.exp(-1.0)

    def _parts(self, r):
        r = np.asarray(r, dtype=float)
        R = self.support_radius
        inside = r < R
        u = np.where(inside, 1.0 - (r / R) ** 2, 1.0)
        phi = np.where(inside, np.exp(-1.0 / u), 0.0)
        # phi' = g phi with g = -2 r / (R^2 u^2)
        g = -2.0 * r / (R * R * u * u)
        dg = -2.0 / (R * R * u * u) - 8.0 * r * r / (R**4 * u**3)
        return inside, u, phi, g, dg

    def __call__(self, r):
        return self._parts(r)[2]

    def derivative(self, r):
        inside, _, phi, g, _ = self._parts(r)
        return np.where(inside, g * phi, 0.0)

    def laplacian(self, r, D: float = 3.0):
        """Radial Laplacian phi'' + (D-1)/r phi' from the closed-form derivatives."""
        inside, u, phi, g, dg = self._parts(r)
        # (D - 1) g / r has the removable 1/r folded in
        g_over_r = -2.0 / (self.support_radius**2 * u * u)
        return np.where(inside, (dg + g * g + (D - 1.0) * g_over_r) * phi, 0.0)


def default_family(domain_radius: float = 1.0, radii: Sequence[float] = DEFAULT_RADII):
    return [TestFunction(f * domain_radius, label=f"R={f:g}a") for f in radii]


@dataclass(frozen=True)
class DeltaEstimate:
    coefficient: float
    spread: float
    test_count: int
    k_squared_used: float
    relative_spread: float
    scale: float
    zero_threshold: float
    pairings: tuple = field(default=())
    radii: tuple = field(default=())

    @property
    def is_zero(self) -> bool:
        return abs(self.coefficient) < self.zero_threshold

    @property
    def consistent(self) -> bool:
        return self.relative_spread <= SPREAD_TOLERANCE

    def to_dict(self) -> dict:
        return {
            "coefficient": self.coefficient,
            "spread": self.spread,
            "relative_spread": self.relative_spread,
            "test_count": self.test_count,
            "k_squared_used": self.k_squared_used,
            "scale": self.scale,
            "zero_threshold": self.zero_threshold,
            "is_zero": self.is_zero,
            "consistent": self.consistent,
            "pairings": [
                {"support_radius": R, "pairing": s} for R, s in zip(self.radii, self.pairings)
            ],
        }


def _pair(integrand: Callable, R: float, D: float, hint: float) -> float:
    res = integrate_radial(integrand, 0.0, R, D, hint, tol=PAIRING_TOL, max_subdivisions=2000)
    if not res.converged:
        raise ArithmeticError(
            f"pairing integral did not converge on [0, {R}] (divergent={res.divergent})"
        )
    return res.value


def distributional_residual(f: Callable, k_squared: float,
                            sign_convention: SignConvention | str = SignConvention.HELMHOLTZ,
                            family: Optional[Sequence[TestFunction]] = None,
                            D: float = 3.0, extra_potential: Optional[Callable] = None,
                            singular_exponent_hint: float = 0.0,
                            zero_threshold: float = ZERO_THRESHOLD,
                            strict: bool = True) -> DeltaEstimate:
    """Coefficient c of delta(r) in (lap + sign k^2 + extra_potential) f.

    ``extra_potential`` is a multiplicative term w(r) (e.g. 2Z/r for the
    Coulomb problem). With ``strict`` a family-dependent ratio raises
    :class:`FamilyInconsistencyError`; otherwise the estimate is returned
    with ``consistent`` False.
    """
    family = list(family) if family is not None else default_family()
    radii = [t.support_radius for t in family]
    if len(family) < 3 or len(set(radii)) != len(radii):
        raise ValueError("need at least 3 test functions with distinct radii")
    sign = 1.0 if SignConvention(sign_convention) is SignConvention.HELMHOLTZ else -1.0

    ratios, pairings, scales = [], [], []
    for phi in family:
        def integrand(r, phi=phi):
            fr = f(r)
            ph = phi(r)
            out = fr * phi.laplacian(r, D) + sign * k_squared * fr * ph
            if extra_potential is not None:
                out = out + extra_potential(r) * fr * ph
            return out

        s = _pair(integrand, phi.support_radius, D, singular_exponent_hint)
        scale = _pair(lambda r, phi=phi: np.abs(f(r)) * phi(r), phi.support_radius, D,
                      singular_exponent_hint)
        pairings.append(s)
        ratios.append(s / phi.center_value)
        scales.append(scale / phi.center_value)

    c = math.fsum(ratios) / len(ratios)
    spread = max(abs(x - c) for x in ratios)
    scale = max(scales)
    threshold = zero_threshold * max(scale, 1.0)
    rel = spread / max(abs(c), threshold)
    est = DeltaEstimate(c, spread, len(family), k_squared, rel, scale, threshold,
                        tuple(pairings), tuple(radii))
    if strict and rel > 10.0 * SPREAD_TOLERANCE:
        raise FamilyInconsistencyError(
            f"S(phi)/phi(0) varies across test functions (relative spread {rel:.3g}): "
            "residual is not a point source", est)
    return est


def debye_huckel_residual(lambda_b: float, kappa: float,
                          family: Optional[Sequence[TestFunction]] = None) -> DeltaEstimate:
    """Point charge behind lambda_B exp(-kappa r)/r under (lap - kappa^2); expect -4 pi lambda_B."""
    if not lambda_b > 0 or not kappa >= 0:
        raise ValueError("need lambda_B > 0 and kappa >= 0")

    def f(r):
        return lambda_b * np.exp(-kappa * r) / r

    return distributional_residual(f, kappa * kappa, SignConvention.SCHRODINGER_BOUND, family,
                                   singular_exponent_hint=-1.0)


def coulomb_green_residual(family: Optional[Sequence[TestFunction]] = None) -> DeltaEstimate:
    """lap(1/(4 pi r)) = -delta(r)."""
    return distributional_residual(lambda r: 1.0 / (4.0 * math.pi * r), 0.0,
                                   SignConvention.HELMHOLTZ, family, singular_exponent_hint=-1.0)


def hydrogen_residual_check(D: int, Z: float, family: Optional[Sequence[TestFunction]] = None,
                            include_coulomb: bool = True, strict: bool = True) -> DeltaEstimate:
    """Residual of exp(-2 Z r/(D-1)) under lap + 2Z/r - k^2 in D dimensions.

    Any r^(D-1) delta term pairs to zero against a smooth phi, so the
    expected coefficient is 0. Dropping the Coulomb term leaves an
    extended 1/r source whose ratio depends on the test function.
    """
    if D not in (2, 3):
        raise ValueError("D must be 2 or 3")
    k = 2.0 * Z / (D - 1)

    def f(r):
        return np.exp(-k * r)

    coulomb = (lambda r: 2.0 * Z / r) if include_coulomb else None
    return distributional_residual(f, k * k, SignConvention.SCHRODINGER_BOUND, family, D=D,
                                   extra_potential=coulomb, strict=strict)


def well_residual(k: float, regular: bool, family: Optional[Sequence[TestFunction]] = None,
                  strict: bool = True) -> DeltaEstimate:
    """Residual of sin(kr)/(kr) (regular) or cos(kr)/(kr) under lap + k^2."""
    if regular:
        f = lambda r: np.sinc(k * r / np.pi)
        hint = 0.0
    else:
        f = lambda r: np.cos(k * r) / (k * r)
        hint = -1.0
    return distributional_residual(f, k * k, SignConvention.HELMHOLTZ, family,
                                   singular_exponent_hint=hint, strict=strict)


def implied_delta_potential(estimate: DeltaEstimate, origin_residue: float) -> DeltaTerm:
    """Potential prefactor * r * delta(r) (hartree) that turns the residual into a Schrodinger equation.

    ``origin_residue`` is lim r psi(r) as r -> 0. From lap psi + k^2 psi = c delta:
    -(1/2) lap psi + (c / (2 origin_residue)) r delta psi = (k^2/2) psi.
    """
    if origin_residue == 0:
        raise ValueError("a regular function needs no r delta(r) potential")
    return DeltaTerm(estimate.coefficient / (2.0 * origin_residue), 1)


def green_identity_pairing(f: Callable, df: Callable, lap_f: Callable, phi: TestFunction,
                           eps: float) -> tuple[float, float]:
    """Both sides of int f lap(phi) dV = int_eps^R phi lap(f) dV + surface term at eps.

    Returns (direct, integrated_by_parts). The direct side integrates over
    the full ball; the small-ball contribution inside eps is O(eps^2) for
    a 1/r singularity.
    """
    R = phi.support_radius
    direct = integrate_radial(lambda r: f(r) * phi.laplacian(r), 0.0, R, 3.0, -1.0,
                              tol=PAIRING_TOL, max_subdivisions=2000).value
    volume = integrate_radial(lambda r: phi(r) * lap_f(r), eps, R, 3.0,
                              tol=PAIRING_TOL, max_subdivisions=2000).value
    e = np.array([eps])
    surface = float(-4.0 * math.pi * eps**2 * (f(e) * phi.derivative(e) - phi(e) * df(e))[0])
    return direct, volume + surface
