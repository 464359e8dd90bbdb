"""Special functions used across the package.

Spherical Bessel/Neumann functions of integer order, cylindrical Bessel
functions J0, J1 and Y1, the Gamma function, the D-dimensional solid angle
and a bracketed Brent root finder. Everything here is scalar, pure and
written against :mod:`math` only.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

L_MAX = 10

# Switch between power series and Hankel asymptotics for J and Y.  At x = 12
# the asymptotic remainder is ~1e-11 and the series cancellation error
# ~1e-12, so both branches agree to better than 1e-10 there.
SERIES_CUTOFF = 12.0

EULER_GAMMA = 0.57721566490153286061

# Lanczos coefficients, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


class SpecfunDomainError(ValueError):
    """Argument outside the domain of a special function."""


class BracketError(ValueError):
    """Root bracket without a sign change."""


class BesselFamily(enum.Enum):
    SPHERICAL_FIRST = "spherical_first"
    SPHERICAL_SECOND = "spherical_second"
    CYLINDRICAL_FIRST = "cylindrical_first"
    CYLINDRICAL_SECOND = "cylindrical_second"


@dataclass(frozen=True)
class BesselKind:
    family: BesselFamily
    order: int

    def __post_init__(self):
        spherical = self.family in (BesselFamily.SPHERICAL_FIRST, BesselFamily.SPHERICAL_SECOND)
        if spherical and self.order < 0:
            raise SpecfunDomainError("spherical Bessel order must be >= 0")

    def __call__(self, x: float) -> float:
        if self.family is BesselFamily.SPHERICAL_FIRST:
            return spherical_bessel(self.order, x)
        if self.family is BesselFamily.SPHERICAL_SECOND:
            return spherical_neumann(self.order, x)
        if self.family is BesselFamily.CYLINDRICAL_FIRST:
            return bessel_J(self.order, x)
        return bessel_Y(self.order, x)


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BracketError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if not self.f_lo * self.f_hi < 0:
            raise BracketError(
                f"no sign change on [{self.lo}, {self.hi}]: f = ({self.f_lo}, {self.f_hi})"
            )

    @classmethod
    def from_function(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, f(lo), f(hi))


def _check_positive(x: float, name: str) -> None:
    if not math.isfinite(x):
        raise SpecfunDomainError(f"{name}: non-finite argument {x!r}")
    if x <= 0.0:
        raise SpecfunDomainError(f"{name}: argument must be > 0, got {x!r}")


def _check_order(l: int, l_max: int) -> None:
    if l < 0:
        raise SpecfunDomainError(f"order must be >= 0, got {l}")
    if l > l_max:
        raise SpecfunDomainError(f"order {l} exceeds l_max = {l_max}")


# ---------------------------------------------------------------- spherical


def spherical_bessel(l: int, x: float, l_max: int = L_MAX) -> float:
    """Spherical Bessel function of the first kind j_l(x) for x > 0.

    l = 0 and l = 1 use closed forms, with a power series below x = 1 for
    l >= 1. Higher orders use Miller's downward recurrence normalised against
    whichever of j_0, j_1 is larger in magnitude, so the result stays
    accurate near zeros of j_0.
    """
    _check_order(l, l_max)
    _check_positive(x, "spherical_bessel")
    s, c = math.sin(x), math.cos(x)
    j0 = s / x
    if l == 0:
        return j0
    if x < 1.0:
        # closed forms for l >= 1 cancel catastrophically as x -> 0
        return _spherical_bessel_series(l, x)
    j1 = s / (x * x) - c / x
    if l == 1:
        return j1

    start = l + int(x) + 40
    f_next, f_cur = 0.0, 1e-300
    value_l = 0.0
    f0 = f1 = 0.0
    for m in range(start, 0, -1):
        f_prev = (2 * m + 1) / x * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        if abs(f_cur) > 1e250:
            f_cur *= 1e-250
            f_next *= 1e-250
            value_l *= 1e-250
        if m - 1 == l:
            value_l = f_cur
        if m - 1 == 1:
            f1 = f_cur
    f0 = f_cur
    if abs(j0) >= abs(j1):
        return value_l * (j0 / f0)
    return value_l * (j1 / f1)


def _spherical_bessel_series(l: int, x: float) -> float:
    # x^l/(2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+2k+1)!!/(2l+1)!!)
    dfact = 1.0
    for i in range(1, 2 * l + 2, 2):
        dfact *= i
    term = x**l / dfact
    total = term
    y = -0.5 * x * x
    for k in range(1, 30):
        term *= y / (k * (2 * l + 2 * k + 1))
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def spherical_bessel_at_zero(l: int) -> float:
    """Limit of j_l(x) as x -> 0+."""
    _check_order(l, L_MAX)
    return 1.0 if l == 0 else 0.0


def spherical_neumann(l: int, x: float, l_max: int = L_MAX) -> float:
    """Spherical Neumann function n_l(x) = y_l(x) for x > 0 (upward recurrence)."""
    _check_order(l, l_max)
    _check_positive(x, "spherical_neumann")
    c, s = math.cos(x), math.sin(x)
    n0 = -c / x
    if l == 0:
        return n0
    n1 = -c / (x * x) - s / x
    for m in range(1, l):
        n0, n1 = n1, (2 * m + 1) / x * n1 - n0
    return n1


def spherical_neumann_leading(l: int) -> tuple[float, int]:
    """Coefficient and exponent of the small-x behaviour n_l(x) ~ coef * x**exp."""
    _check_order(l, L_MAX)
    dfact = 1.0
    for i in range(1, 2 * l, 2):
        dfact *= i
    return -dfact, -(l + 1)


# -------------------------------------------------------------- cylindrical


def _hankel_pq(nu: int, x: float) -> tuple[float, float]:
    mu = 4.0 * nu * nu
    p, q = 1.0, 0.0
    term = 1.0
    k = 1
    last = math.inf
    while k < 60:
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(term) > last:
            break
        last = abs(term)
        if k % 2 == 1:
            q += term * (-1) ** ((k - 1) // 2)
        else:
            p += term * (-1) ** (k // 2)
        if abs(term) < 1e-17:
            break
        k += 1
    return p, q


def _j_series(nu: int, x: float) -> float:
    half = 0.5 * x
    term = half**nu / math.factorial(nu)
    total = term
    y = -half * half
    for k in range(1, 200):
        term *= y / (k * (k + nu))
        total += term
        if abs(term) < 1e-17 * max(abs(total), 1e-300) and k > 2:
            break
    return total


def bessel_J(nu: int, x: float) -> float:
    """Cylindrical Bessel function J_nu(x), nu in {0, 1}, x >= 0."""
    if nu not in (0, 1):
        raise SpecfunDomainError(f"bessel_J supports orders 0 and 1, got {nu}")
    if not math.isfinite(x):
        raise SpecfunDomainError(f"bessel_J: non-finite argument {x!r}")
    if x < 0.0:
        raise SpecfunDomainError(f"bessel_J: argument must be >= 0, got {x!r}")
    if x <= SERIES_CUTOFF:
        return _j_series(nu, x)
    p, q = _hankel_pq(nu, x)
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_Y(nu: int, x: float) -> float:
    """Cylindrical Bessel function of the second kind Y_1(x), x > 0."""
    if nu != 1:
        raise SpecfunDomainError(f"bessel_Y supports order 1 only, got {nu}")
    _check_positive(x, "bessel_Y")
    if x > SERIES_CUTOFF:
        p, q = _hankel_pq(1, x)
        chi = x - 0.75 * math.pi
        return math.sqrt(2.0 / (math.pi * x)) * (p * math.sin(chi) + q * math.cos(chi))

    # Y1 = (2/pi) J1 ln(x/2) - 2/(pi x)
    #      - (1/pi) sum_k (psi(k+1) + psi(k+2)) (-x^2/4)^k (x/2) / (k! (k+1)!)
    half = 0.5 * x
    y = -half * half
    term = half
    harmonic = 0.0  # H_k
    psi_sum = -2.0 * EULER_GAMMA + 1.0  # psi(1) + psi(2)
    total = term * psi_sum
    for k in range(1, 200):
        term *= y / (k * (k + 1))
        harmonic += 1.0 / k
        psi_sum = -2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (k + 1)
        contrib = term * psi_sum
        total += contrib
        if abs(contrib) < 1e-17 * max(abs(total), 1e-300) and k > 2:
            break
    return (2.0 / math.pi) * _j_series(1, x) * math.log(half) - 2.0 / (math.pi * x) - total / math.pi


# ------------------------------------------------------------------ gamma


def gamma_fn(x: float) -> float:
    """Gamma function for x > 0 (Lanczos approximation with reflection below 1/2)."""
    _check_positive(x, "gamma_fn")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power to avoid overflow for large x
    half = t ** (0.5 * (z + 0.5))
    return math.sqrt(2.0 * math.pi) * half * half * math.exp(-t) * acc


def solid_angle(D: float) -> float:
    """Surface measure of the unit sphere in D dimensions, 2 pi^(D/2) / Gamma(D/2)."""
    if not math.isfinite(D) or D <= 0:
        raise SpecfunDomainError(f"solid_angle: dimension must be > 0, got {D!r}")
    if D == 1:
        return 2.0
    return 2.0 * math.pi ** (0.5 * D) / gamma_fn(0.5 * D)


# ------------------------------------------------------------ root finding


def find_root(f: Callable[[float], float], bracket: Bracket, tol: float = 1e-12,
              max_iter: int = 200) -> float:
    """Brent's method on a sign-changing bracket.

    Terminates when the bracket is narrower than ``tol`` or f hits an exact
    zero. Interpolation steps that do not shrink the bracket fast enough are
    replaced by bisection, so convergence is guaranteed.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    a, b = bracket.lo, bracket.hi
    fa, fb = bracket.f_lo, bracket.f_hi
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if abs(fa) < abs(fb):
        a, b, fa, fb = b, a, fb, fa
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if fb == 0.0 or abs(b - c) <= tol:
            return b
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        m = 0.5 * (c - b)
        tol1 = 2.0 * 2.2e-16 * abs(b) + 0.25 * tol
        if abs(m) <= tol1:
            # |c - b| <= tol/2 + a few ulp of b
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q0 = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0))
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = m
        else:
            d = e = m
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += math.copysign(tol1, m)
        fb = f(b)
    raise RuntimeError(f"find_root did not converge in {max_iter} iterations")
