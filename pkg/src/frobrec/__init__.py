"""Exact WDVV reconstruction of genus-zero potentials of orbifold projective lines."""

__version__ = "0.1.0"

from .orbifold import (  # noqa: E402
    Coordinate,
    Divisor,
    OrbifoldData,
    Twisted,
    Unit,
    coordinate_degree,
    metric,
    metric_inverse,
    new_orbifold,
    symmetry_factor,
)
from .reconstruct import reconstruct, seed, solve  # noqa: E402
from .series import Potential, admissible_keys, lookup, third_derivative_coefficient  # noqa: E402
from .verify import check_presentation, limit_algebra, sweep_residuals, to_gw_invariant, verify  # noqa: E402
from .wdvv import WdvvInstance, wdvv_form, wdvv_residual  # noqa: E402

__all__ = [
    "Coordinate", "Divisor", "OrbifoldData", "Twisted", "Unit", "coordinate_degree", "metric",
    "metric_inverse", "new_orbifold", "symmetry_factor", "reconstruct", "seed", "solve", "Potential",
    "admissible_keys", "lookup", "third_derivative_coefficient", "check_presentation", "limit_algebra",
    "sweep_residuals", "to_gw_invariant", "verify", "WdvvInstance", "wdvv_form", "wdvv_residual",
]
