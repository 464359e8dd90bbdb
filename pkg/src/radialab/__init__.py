"""Radial wavefunctions with hidden point sources: analytic models, quadrature, weak-form residuals and shooting."""

__version__ = "0.1.0"

from .models import (  # noqa: E402
    DeltaTerm,
    EigenResult,
    Family,
    PotentialSpec,
    RadialModel,
    catalog,
    delta_1d,
    hydrogen_ground_state,
    hydrogen_in_well,
    hydrogen_scaled,
    spherical_well_regular,
    spherical_well_singular,
)

__all__ = [
    "DeltaTerm", "EigenResult", "Family", "PotentialSpec", "RadialModel", "catalog",
    "delta_1d", "hydrogen_ground_state", "hydrogen_in_well", "hydrogen_scaled",
    "spherical_well_regular", "spherical_well_singular", "__version__",
]
