"""Contrary-to-duty census on the two-by-two moment.

Every binary utility assignment is tried; for the ones where both agents can
have a violable obligation towards the same proposition, the quadrant pattern
is printed.  The run is repeated with two worlds per quadrant, which is the
smallest size where a quadrant can hold mixed utilities.
"""

from tdstit.ctd import fig1_census

for per_cell in (1, 2):
    c = fig1_census(per_cell)
    print(f"== {per_cell} world(s) per quadrant: {len(c.entries)} assignments, "
          f"{len(c.satisfiable)} with a joint violable obligation")
    by_pattern = {}
    for e in c.satisfiable:
        by_pattern.setdefault(e.pattern or "-", []).append(e)
    for name in sorted(by_pattern):
        entries = by_pattern[name]
        sample = entries[0]
        print(f"  pattern {name:>3}: {len(entries):3d} assignments, e.g. utils "
              f"{''.join(map(str, sample.utils))} with phi = {sorted(sample.witness)}")
