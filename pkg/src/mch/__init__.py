"""Traveling waves and wave breaking for the modified Camassa-Holm equation

    u_t - u_xxt = u u_xxx + 2 u_x u_xx - 3 u^2 u_x.

Submodules
----------
elliptic   Jacobi elliptic functions and elliptic integrals (AGM, Carlson).
quartic    the traveling-wave quartic, its roots and the quadric constraints.
classify   wave categories from root orderings, stumpon points, gluing.
profile    profiles by singular quadrature, closed-form peakons, composites.
weakform   weak-form residuals and structure checks of profiles.
pde        pseudospectral and characteristic solvers, invariants, breaking.
cli        the ``mch`` command.
"""

from .classify import (AmbiguousBoundary, ClassificationError, NoBoundedWave, Orientation,
                       Tag, WaveCategory, classify, gluing_compatible, level_set_points,
                       stumpon_points)
from .elliptic import agm, amplitude, complete_K, incomplete_F, jacobi
from .profile import (SCHEMA, WaveProfile, assemble_composite, build_quadrature,
                      explicit_decay_peakon, explicit_periodic_peakon, fit_local_exponent, period)
from .quartic import (TravelingWavePolynomial, WaveParameters, constraint_residual, find_roots,
                      reduced_axes, stumpon_a)
from .weakform import TestFunctionFamily, tw_conditions, weak_residual

__version__ = "0.1.0"

__all__ = [
    "AmbiguousBoundary", "ClassificationError", "NoBoundedWave", "Orientation", "Tag",
    "WaveCategory", "classify", "gluing_compatible", "level_set_points", "stumpon_points",
    "agm", "amplitude", "complete_K", "incomplete_F", "jacobi",
    "SCHEMA", "WaveProfile", "assemble_composite", "build_quadrature", "explicit_decay_peakon",
    "explicit_periodic_peakon", "fit_local_exponent", "period",
    "TravelingWavePolynomial", "WaveParameters", "constraint_residual", "find_roots",
    "reduced_axes", "stumpon_a", "TestFunctionFamily", "tw_conditions", "weak_residual",
]
