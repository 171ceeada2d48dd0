"""Brute-force evaluation of the raw frame conditions.

Everything here works from plain pair sets and spells each condition out
with explicit quantifiers, independently of ``tdstit.framecheck``.
"""

from itertools import product


def pairs_of_blocks(blocks):
    return {(a, b) for blk in blocks for a in blk for b in blk}


def raw_relations(m):
    W = list(m.worlds)
    box = pairs_of_blocks(m.moments)
    stit = {i: pairs_of_blocks([c for (mom, k), cs in m.choice.items() if k == i for c in cs])
            for i in range(1, m.agents + 1)}
    grand = pairs_of_blocks([c for cs in m.grand.values() for c in cs])
    g = set(m.g_edges)
    ought = {i: {(w, v) for w in W for v in m.ideal_at(w, i)} for i in range(1, m.agents + 1)}
    return W, box, stit, grand, g, ought


def failing_conditions(m):
    W, box, stit, grand, g, ought = raw_relations(m)
    agents = range(1, m.agents + 1)
    R = lambda rel, w: {v for v in W if (w, v) in rel}
    bad = set()
    if any(not stit[i] <= box for i in agents):
        bad.add("C1")
    for w in W:
        for vs in product(sorted(R(box, w)), repeat=m.agents):
            common = set(W)
            for i, v in zip(agents, vs):
                common &= R(stit[i], v)
            if not common:
                bad.add("C2")
    for w in W:
        inter = set(W)
        for i in agents:
            inter &= R(stit[i], w)
        if not R(grand, w) <= inter:
            bad.add("C3")
    for w, u, v in product(W, repeat=3):
        if (w, u) in g and (w, v) in g and not ((u, v) in g or u == v or (v, u) in g):
            bad.add("T4")
        if (u, w) in g and (v, w) in g and not ((u, v) in g or u == v or (v, u) in g):
            bad.add("T5")
        if (w, u) in g and (u, v) in box and not any(
                (w, z) in grand and (z, v) in g for z in W):
            bad.add("T6")
        if (w, u) in g and (u, v) in g and (w, v) not in g:
            bad.add("TRANS")
    for w, u in product(W, repeat=2):
        if (w, u) in box and (w, u) in g:
            bad.add("T7")
    for i in agents:
        if not ought[i] <= box:
            bad.add("D8")
        for w in W:
            if not any((w, v) in box and all((w, u) in ought[i] for u in R(stit[i], v))
                       for v in W):
                bad.add("D9")
        for w, u, v in product(W, repeat=3):
            if (w, u) in box and (w, v) in ought[i] and (u, v) not in ought[i]:
                bad.add("D10")
        for w, u in product(W, repeat=2):
            if (w, u) in ought[i] and not any(
                    (w, v) in box and (v, u) in stit[i]
                    and all((w, z) in ought[i] for z in R(stit[i], v)) for v in W):
                bad.add("D11")
    return bad
