"""Two agents, one moment, four worlds.

Builds the small model where agent 1 picks the first digit of a world name
and agent 2 the second, then evaluates a few formulas in both semantics.
"""

from tdstit import parse
from tdstit.dominance import dominance_table, states
from tdstit.framecheck import check_frame
from tdstit.gen import m1_model
from tdstit.semantics import Evaluator
from tdstit.transform import derive_util

m = m1_model()
print("worlds:", ", ".join(m.worlds))
print("agent 1 cells:", [sorted(c) for c in m.cells(0, 1)])
print("agent 2 cells:", [sorted(c) for c in m.cells(0, 2)])
print("frame findings:", [(v.condition, "warning") for v in check_frame(m).warnings])

neutral = Evaluator(m)
for text in ("p", "box p", "O{1} p", "O{2} p", "[1] p"):
    f = parse(text, 2)
    print(f"{text:>8}: true at {sorted(neutral.extension(f))}")

u = derive_util(m)
print("\nutilities from the ideal sets:", u.util)
print("states of agent 1:", [sorted(s) for s in states(m, 1, 0).blocks])
t = dominance_table(u, 0, 1)
print("agent 1 strict dominance matrix:\n", t.strict.astype(int))

util = Evaluator(u)
for text in ("O{1} p", "O{2} p", "O{1} ~p"):
    f = parse(text, 2)
    same = neutral.extension(f) == util.extension(f)
    print(f"{text:>8}: neutral and utilitarian agree: {same}")
