"""Polymatroidal outer bounds on two small instances.

Builds the g-system, projects it onto the rates and prints the explicit
region.  Run with ``python demos/01_outer_bounds.py``.
"""

from secureic import build_g_system, nonsecure_outer_region, parse_instance, secure_outer_region
from secureic.outer_bounds import check_gh_equivalence, project_to_rates
from secureic.polyhedra import region_from_system

# receiver 1 knows nothing, receivers 2 and 3 know each other's message
plain = parse_instance("(1|-),(2|3),(3|2);(e|-)")
sys = build_g_system(plain, secure=False)
print(f"non-secure g-system: {len(sys.space)} variables, {len(sys)} constraints")
print("projected:", nonsecure_outer_region(plain).pretty())

# same receivers, eavesdropper knows message 1
eve = parse_instance("(1|-),(2|3),(3|2);(e|1)")
region = secure_outer_region(eve)
print("\nsecure region for", eve)
print("  facets:  ", region.pretty())
print("  vertices:", [tuple(str(x) for x in v) for v in region.vertices])

# the extra decoding rows matter: drop them and the bound gets looser
p = parse_instance("(1|3),(2|3),(3|2);(e|-)")
loose = region_from_system(project_to_rates(build_g_system(p, additional_decoding=False), 3))
print("\n", p)
print("  with decoding rows:   ", secure_outer_region(p).pretty())
print("  without decoding rows:", loose.pretty())

# the entropic (h) form of the non-secure bound gives the same region
res = check_gh_equivalence(plain)
print("\ng-region == h-region:", res.equal, "->", res.h_region.pretty())
