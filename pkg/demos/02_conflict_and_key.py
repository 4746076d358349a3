"""Composite coding on (1|-),(2|3),(3|2);(e|1): a conflict, then a key.

With D = ({1}, {1,2}, {1,3}) the strict inequalities squeeze R_2 and R_3
from both sides.  A shared key of vanishing rate removes the squeeze and
the inner bound meets the outer bound.
"""

from secureic import (CompositeSystemSpec, apply_zero_forcing, build_composite_system,
                      certify_capacity, detect_conflict, inner_region, parse_config,
                      parse_instance, secure_outer_region)

p = parse_instance("(1|-),(2|3),(3|2);(e|1)")
D = parse_config("1:1;2:1,2;3:1,3", p.n)

sys, forced = apply_zero_forcing(build_composite_system(CompositeSystemSpec(p, (D,))))
print("forced to zero:", ", ".join(forced))
for c in sys.constraints:
    if c.rel == "<":
        print("  ", c.pretty(sys.space))

rep = detect_conflict(sys, p.n)
print("\nconflict:", rep.conflict)
for a, b in rep.opposing_pairs:
    print("   ", a.pretty(sys.space), "  vs  ", b.pretty(sys.space))

keyed = inner_region(CompositeSystemSpec(p, (D,), key=True))
print("\nkey limit region:", keyed.pretty())
print("outer region:    ", secure_outer_region(p).pretty())
print("equal:", keyed == secure_outer_region(p))

report = certify_capacity(p)
print("\n" + report.summary())
