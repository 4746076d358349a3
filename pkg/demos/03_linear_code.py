"""Exhaustive check of the two-bit code Y = (x1, x2 xor x3).

Every one of the 8 message tuples is enumerated; decoding is checked as a
function of (Y, side information) and leakage as an exact conditional
mutual information.
"""

from secureic import LinearCode, parse_instance, secure_outer_region, verify_linear_code

p = parse_instance("(1|-),(2|3),(3|2);(e|1)")
good = LinearCode.from_expressions([1, 1, 1], ["x1", "x2+x3"])
rep = verify_linear_code(p, good)
print("Y = (x1, x2+x3)")
print("  rates:", tuple(str(r) for r in rep.rates))
print("  decodes:", rep.decodes)
print("  leakage (bits):", {i: str(v) for i, v in rep.leakage.items()})
print("  inside the outer bound:", secure_outer_region(p).contains(rep.rates))

# sending x2 in the clear is neither decodable for receiver 3 nor secure
bad = LinearCode.from_expressions([1, 1, 1], ["x1", "x2"])
rep = verify_linear_code(p, bad)
print("\nY = (x1, x2)")
print("  decodes:", rep.decodes)
print("  leakage (bits):", {i: str(v) for i, v in rep.leakage.items()})
