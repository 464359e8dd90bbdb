"""Catalog of closed-form radial systems.

All quantities are in atomic units (hbar = m = e = a0 = 4 pi eps = 1,
energies in hartree). A :class:`RadialModel` bundles an unnormalised radial
profile with its normalisation constant, eigenvalue data and a structured
description of the potential that the profile actually solves.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .specfun import bessel_J, bessel_Y, gamma_fn, solid_angle


class Family(str, enum.Enum):
    REGULAR = "regular"
    SINGULAR = "singular"


class EnergyStatus(str, enum.Enum):
    FINITE = "finite"
    ZERO = "zero"
    DIVERGENT = "divergent"


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class UnitsConfig:
    """Atomic units; only the well radius and nuclear charge are free."""

    well_radius: float = 1.0
    charge: float = 1.0
    unit_system: str = "atomic"

    def __post_init__(self):
        if self.unit_system != "atomic":
            raise ModelError(f"unsupported unit system {self.unit_system!r}")
        if not self.well_radius > 0:
            raise ModelError("well radius must be > 0")
        if not self.charge >= 0:
            raise ModelError("charge must be >= 0")


@dataclass(frozen=True)
class DeltaTerm:
    """``prefactor * r**radial_power * delta(r)``."""

    prefactor: float
    radial_power: int

    def __post_init__(self):
        if int(self.radial_power) != self.radial_power or self.radial_power < 0:
            raise ModelError(f"radial power must be a non-negative integer, got {self.radial_power}")

    def to_dict(self) -> dict:
        return {"prefactor": self.prefactor, "radial_power": int(self.radial_power)}


@dataclass(frozen=True)
class PotentialSpec:
    """Coulomb term ``-coulomb_strength / r`` plus an optional delta term and hard wall."""

    coulomb_strength: float = 0.0
    delta_term: Optional[DeltaTerm] = None
    hard_wall_radius: Optional[float] = None

    def coulomb(self, r):
        return -self.coulomb_strength / r

    def to_dict(self) -> dict:
        return {
            "coulomb_strength": self.coulomb_strength,
            "delta_term": None if self.delta_term is None else self.delta_term.to_dict(),
            "hard_wall_radius": self.hard_wall_radius,
        }


@dataclass(frozen=True)
class RadialModel:
    name: str
    dimension: float
    profile: Callable = field(compare=False, repr=False)
    energy: float
    wavenumber: float
    potential: PotentialSpec
    family: Family
    r_max: float = math.inf
    normalization: Optional[float] = None
    energy_status: EnergyStatus = EnergyStatus.FINITE
    origin_exponent: float = 0.0
    cusp_expected: Optional[float] = None
    cusp_literature: Optional[float] = None
    params: dict = field(default_factory=dict, compare=False)

    @property
    def normalized(self) -> bool:
        return self.normalization is not None

    def psi(self, r):
        """Wavefunction; the bare profile when no normalisation is known."""
        c = 1.0 if self.normalization is None else self.normalization
        return c * self.profile(r)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "D": self.dimension,
            "Z": self.params.get("Z"),
            "a": self.params.get("a"),
            "k": self.wavenumber,
            "E": self.energy,
            "energy_status": self.energy_status.value,
            "family": self.family.value,
            "normalization": self.normalization,
            "origin_exponent": self.origin_exponent,
            "cusp_expected": self.cusp_expected,
            "cusp_literature": self.cusp_literature,
            "r_max": None if math.isinf(self.r_max) else self.r_max,
            "potential": self.potential.to_dict(),
            "params": dict(sorted(self.params.items())),
        }


@dataclass(frozen=True)
class EigenResult:
    n: int
    k_n: float
    E_n: float
    family: Family
    source: str = "analytic"
    mismatch: Optional[float] = None
    iterations: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "family": self.family.value,
            "k_n": self.k_n,
            "E_n": self.E_n,
            "source": self.source,
            "mismatch": self.mismatch,
            "iterations": self.iterations,
        }


# ----------------------------------------------------------------- profiles


def _exp_profile(decay: float) -> Callable:
    def profile(r):
        return np.exp(-decay * np.abs(r))

    return profile


def _sinc_profile(k: float) -> Callable:
    def profile(r):
        return np.sinc(k * np.asarray(r, dtype=float) / np.pi)

    return profile


def _cos_over_profile(k: float) -> Callable:
    def profile(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return np.cos(k * r) / (k * r)

    return profile


def _in_well_regular_profile(Z: float) -> Callable:
    root = math.sqrt(2.0 * Z)

    def scalar(r: float) -> float:
        if r == 0.0:
            return root  # J1(sqrt(8 Z r)) / sqrt(r) -> sqrt(2 Z)
        return bessel_J(1, math.sqrt(8.0 * Z * r)) / math.sqrt(r)

    return np.vectorize(scalar, otypes=[float])


def _in_well_singular_profile(Z: float) -> Callable:
    def scalar(r: float) -> float:
        if r == 0.0:
            return math.inf
        return -bessel_Y(1, math.sqrt(8.0 * Z * r)) / math.sqrt(r)

    return np.vectorize(scalar, otypes=[float])


def _exp_ball_norm(decay: float, D: float) -> float:
    # int_0^inf Omega_D r^(D-1) exp(-2 decay r) dr = Omega_D Gamma(D) / (2 decay)^D
    return solid_angle(D) * gamma_fn(D) / (2.0 * decay) ** D


def _check_dimension(D: float) -> None:
    if not D > 1:
        raise ModelError(f"dimension must be > 1 (use delta_1d for D = 1), got {D}")


def _hidden_delta(Z: float, D: float) -> Optional[DeltaTerm]:
    # -Z Omega_D / (D - 1) r^(D-1) delta(r); only recorded for integer D
    if float(D).is_integer():
        return DeltaTerm(-Z * solid_angle(D) / (D - 1), int(D) - 1)
    return None


# A singular 1/r profile solves the radial equation only with an extra
# -(1/2) 4 pi r delta(r) potential.
SINGULAR_DELTA = DeltaTerm(-2.0 * math.pi, 1)


# ------------------------------------------------------------------- catalog


def hydrogen_ground_state(D: float, Z: float) -> RadialModel:
    """Ground state of -Z/r in D dimensions: psi = exp(-2 Z r / (D - 1))."""
    _check_dimension(D)
    if not Z > 0:
        raise ModelError("Z must be > 0")
    k = 2.0 * Z / (D - 1.0)
    return RadialModel(
        name="hydrogen",
        dimension=D,
        profile=_exp_profile(k),
        energy=-0.5 * k * k,
        wavenumber=k,
        potential=PotentialSpec(coulomb_strength=Z, delta_term=_hidden_delta(Z, D)),
        family=Family.REGULAR,
        normalization=1.0 / math.sqrt(_exp_ball_norm(k, D)),
        cusp_expected=-k,
        params={"Z": Z, "D": D},
    )


def hydrogen_scaled(D: float, Z: float) -> RadialModel:
    """Hydrogen with the charge rescaled to Z (D - 1); profile exp(-2 Z r) for every D."""
    _check_dimension(D)
    if not Z > 0:
        raise ModelError("Z must be > 0")
    z_eff = Z * (D - 1.0)
    model = hydrogen_ground_state(D, z_eff)
    return RadialModel(
        name="hydrogen-scaled",
        dimension=D,
        profile=model.profile,
        energy=model.energy,
        wavenumber=model.wavenumber,
        potential=model.potential,
        family=Family.REGULAR,
        normalization=model.normalization,
        cusp_expected=model.cusp_expected,
        params={"Z": Z, "D": D, "Z_eff": z_eff},
    )


def delta_1d(alpha_prime: float) -> RadialModel:
    """Bound state of psi'' + alpha' delta(x) psi = k^2 psi on the full line."""
    if not alpha_prime > 0:
        raise ModelError("alpha' must be > 0")
    k = 0.5 * alpha_prime
    return RadialModel(
        name="delta-1d",
        dimension=1.0,
        profile=_exp_profile(k),
        energy=-alpha_prime**2 / 8.0,
        wavenumber=k,
        # V = -(alpha'/2) delta(x) in hartree
        potential=PotentialSpec(delta_term=DeltaTerm(-0.5 * alpha_prime, 0)),
        family=Family.REGULAR,
        normalization=math.sqrt(k),
        cusp_expected=-k,
        params={"alpha_prime": alpha_prime},
    )


def _check_well(n: int, a: float) -> None:
    if int(n) != n or n < 1:
        raise ModelError(f"quantum number must be an integer >= 1, got {n}")
    if not a > 0:
        raise ModelError(f"well radius must be > 0, got {a}")


def spherical_well_regular(n: int, a: float = 1.0) -> RadialModel:
    _check_well(n, a)
    k = n * math.pi / a
    return RadialModel(
        name="well-regular",
        dimension=3.0,
        profile=_sinc_profile(k),
        energy=0.5 * k * k,
        wavenumber=k,
        potential=PotentialSpec(hard_wall_radius=a),
        family=Family.REGULAR,
        r_max=a,
        normalization=k / math.sqrt(2.0 * math.pi * a),
        cusp_expected=0.0,
        params={"n": n, "a": a},
    )


def spherical_well_singular(n: int, a: float = 1.0) -> RadialModel:
    _check_well(n, a)
    k = (2 * n - 1) * math.pi / (2.0 * a)
    return RadialModel(
        name="well-singular",
        dimension=3.0,
        profile=_cos_over_profile(k),
        energy=0.5 * k * k,
        wavenumber=k,
        potential=PotentialSpec(delta_term=SINGULAR_DELTA, hard_wall_radius=a),
        family=Family.SINGULAR,
        r_max=a,
        normalization=(2 * n - 1) * math.sqrt(math.pi / (8.0 * a**3)),
        origin_exponent=-1.0,
        params={"n": n, "a": a},
    )


def hydrogen_in_well(a: float, Z: float, family: Family | str = Family.REGULAR) -> RadialModel:
    """Zero-energy hydrogen states truncated at the wall r = a.

    The regular profile is J1(sqrt(8 Z r)) / sqrt(r), the singular one
    -Y1(sqrt(8 Z r)) / sqrt(r). Neither is normalised here.
    """
    if not a > 0 or not Z > 0:
        raise ModelError("a and Z must be > 0")
    family = Family(family)
    if family is Family.REGULAR:
        return RadialModel(
            name="hydrogen-in-well-regular",
            dimension=3.0,
            profile=_in_well_regular_profile(Z),
            energy=0.0,
            wavenumber=0.0,
            potential=PotentialSpec(coulomb_strength=Z, hard_wall_radius=a),
            family=family,
            r_max=a,
            energy_status=EnergyStatus.ZERO,
            cusp_expected=-Z,
            # the expansion 1 + Z r is sometimes quoted for this profile
            cusp_literature=Z,
            params={"a": a, "Z": Z},
        )
    return RadialModel(
        name="hydrogen-in-well-singular",
        dimension=3.0,
        profile=_in_well_singular_profile(Z),
        energy=0.0,
        wavenumber=0.0,
        potential=PotentialSpec(coulomb_strength=Z, delta_term=SINGULAR_DELTA, hard_wall_radius=a),
        family=family,
        r_max=a,
        energy_status=EnergyStatus.DIVERGENT,
        origin_exponent=-1.0,
        cusp_expected=-Z,
        params={"a": a, "Z": Z},
    )


def energy_ratio_ground(a: float = 1.0) -> float:
    """E_1 of the regular well over E_1 of the singular well (exactly 4)."""
    return spherical_well_regular(1, a).energy / spherical_well_singular(1, a).energy


def analytic_spectrum(a: float, family: Family | str, n_max: int) -> list[EigenResult]:
    family = Family(family)
    build = spherical_well_regular if family is Family.REGULAR else spherical_well_singular
    out = []
    for n in range(1, n_max + 1):
        m = build(n, a)
        out.append(EigenResult(n=n, k_n=m.wavenumber, E_n=m.energy, family=family))
    return out


def catalog(a: float = 1.0, Z: float = 1.0, D: float = 3.0) -> list[RadialModel]:
    """Representative instance of every closed-form model."""
    from .specfun import Bracket, find_root

    j1 = lambda x: bessel_J(1, x)
    v1 = find_root(j1, Bracket.from_function(j1, 3.0, 4.5), 1e-14)
    z_crit = v1 * v1 / (8.0 * a)
    return [
        hydrogen_ground_state(D, Z),
        hydrogen_scaled(D, Z),
        delta_1d(4.0 * Z),
        spherical_well_regular(1, a),
        spherical_well_singular(1, a),
        hydrogen_in_well(a, z_crit, Family.REGULAR),
        hydrogen_in_well(a, z_crit, Family.SINGULAR),
    ]
