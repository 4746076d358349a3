"""Exact rational polyhedra: constraint systems, LP, projection, regions."""

from .fme import fme_eliminate, infeasible_marker, remove_redundant
from .lp import FeasibilityReport, LPResult, check_farkas, lp_feasible, maximize, solve_lp
from .region import (ContainmentWitness, EqualityResult, RateRegion, UnboundedRegionError,
                     box_region, canonical_system, enumerate_vertices, hull_region, region_contains,
                     region_equal, region_from_system)
from .system import (EQ, LE, LT, Constraint, ConstraintSystem, VariableSpace, as_fraction,
                     fraction_str, system_from_dicts)

__all__ = [
    "EQ", "LE", "LT", "Constraint", "ConstraintSystem", "VariableSpace", "as_fraction",
    "fraction_str", "system_from_dicts",
    "FeasibilityReport", "LPResult", "check_farkas", "lp_feasible", "maximize", "solve_lp",
    "fme_eliminate", "infeasible_marker", "remove_redundant",
    "ContainmentWitness", "EqualityResult", "RateRegion", "UnboundedRegionError", "box_region",
    "canonical_system", "enumerate_vertices", "hull_region", "region_contains", "region_equal",
    "region_from_system",
]
