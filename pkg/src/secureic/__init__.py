"""Exact outer and inner bounds for secure index coding.

Problem instances, polymatroidal outer bounds, secure composite coding
inner bounds and the machinery (exact LP, Fourier-Motzkin projection,
canonical regions) that turns them into comparable rate regions.
"""

from .analysis import (INFEASIBLE, MATCHED_NO_KEY, MATCHED_WITH_KEY, UNMATCHED, CapacityReport,
                       ConfigPolicy, LinearCode, certify_capacity, classify_sweep, reproduce_table1,
                       verify_linear_code)
from .inner_bounds import (CompositeSystemSpec, DecodingConfiguration, apply_zero_forcing,
                           build_composite_system, detect_conflict, full_decoding, inner_bound,
                           inner_region, parse_config)
from .model import (ParseError, ProblemInstance, canonicalize, enumerate_instances,
                    is_securely_feasible, parse_instance)
from .outer_bounds import (build_g_system, build_h_system, check_gh_equivalence, g_to_h, h_to_g,
                           nonsecure_outer_region, outer_region, secure_outer_region)
from .polyhedra import RateRegion, fme_eliminate, lp_feasible, region_equal

__all__ = [
    "INFEASIBLE", "MATCHED_NO_KEY", "MATCHED_WITH_KEY", "UNMATCHED", "CapacityReport",
    "ConfigPolicy", "LinearCode", "certify_capacity", "classify_sweep", "reproduce_table1",
    "verify_linear_code",
    "CompositeSystemSpec", "DecodingConfiguration", "apply_zero_forcing", "build_composite_system",
    "detect_conflict", "full_decoding", "inner_bound", "inner_region", "parse_config",
    "ParseError", "ProblemInstance", "canonicalize", "enumerate_instances", "is_securely_feasible",
    "parse_instance",
    "build_g_system", "build_h_system", "check_gh_equivalence", "g_to_h", "h_to_g",
    "nonsecure_outer_region", "outer_region", "secure_outer_region",
    "RateRegion", "fme_eliminate", "lp_feasible", "region_equal",
]
