"""The golden n=3 table and the n=3 sweep; pass ``4`` on the command line for n=4.

The n=4 conflict count takes a couple of minutes and the n=4 capacity
sweep about 15 minutes.
"""

import sys
import time

from secureic import classify_sweep, reproduce_table1
from secureic.analysis import count_conflict_free

t = time.time()
rows = reproduce_table1()
for r in rows:
    mark = "ok " if r.match else "BAD"
    print(f"{mark} {r.problem.render():34s} {r.region.pretty()}")
print(f"{sum(r.match for r in rows)}/{len(rows)} rows in {time.time() - t:.1f} s\n")

n = int(sys.argv[1]) if len(sys.argv) > 1 else 3
t = time.time()
total, free = count_conflict_free(n)
print(f"n={n}: {total} securely feasible, {free} without conflicts ({time.time() - t:.0f} s)")

t = time.time()
summary = classify_sweep(n)
print(summary.counts(), f"({time.time() - t:.0f} s)")
