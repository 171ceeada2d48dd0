"""Neutral-to-utilitarian transformation over a batch of generated models."""

import sys

from tdstit.gen import sample_models
from tdstit.syntax import enumerate_formulas
from tdstit.transform import check_util_criteria, derive_util, truth_preservation_test

count = int(sys.argv[1]) if len(sys.argv) > 1 else 20
formulas = {n: list(enumerate_formulas(2, ("p", "q"), n)) for n in (1, 2)}

checks = mismatches = violations = 0
for n in sample_models(count, seed=3):
    u = derive_util(n)
    violations += check_util_criteria(n, u).count()
    r = truth_preservation_test(n, formulas[n.agents], u=u)
    checks += r.formulas * r.worlds
    mismatches += r.mismatches
    print(f"{n.agents} agent(s), {len(n.worlds):2d} worlds, "
          f"{sum(u.util.values()):2d} best worlds, mismatches {r.mismatches}")

print(f"\n{count} models, {checks} world/formula checks, {mismatches} mismatches, "
      f"{violations} criterion violations")
