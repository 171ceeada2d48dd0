"""Seeded model generation, targeted mutations and small named fixtures.

Generated frames are built from a tree of moments.  Every root-to-leaf
branch is a history and a world is a (moment, history-through-it) pair, so
the frame conditions hold by construction:

* at an internal moment with per-agent choice counts ``c_1..c_n`` there are
  ``c_1 * ... * c_n`` children, labelled by tuples; agent ``i``'s cell of a
  world groups the histories whose next child has the same ``i``-th label
  and the grand cell groups histories with the same next child;
* a leaf moment holds exactly one world and every agent has one cell there;
* ``G`` links ``(m, h)`` to ``(m', h)`` whenever ``m'`` lies strictly below
  ``m`` on ``h``.

``depth`` counts moment levels, so ``depth=1`` is a single one-world moment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .model import NeutralModel, UtilModel, transitive_closure
from .semantics import evaluate
from .syntax import (And, Agent, BOT, Box, G, Grand, H, Not, Ought, TOP, Var,
                     name_formula)


class MutationError(ValueError):
    """The requested condition cannot be broken on this model."""


@dataclass(frozen=True)
class GenParams:
    agents: int = 2
    depth: int = 2
    choices: tuple = (2, 2)
    seed: int = 0
    valuation_density: float = 0.5
    ideal_density: float = 0.5
    vars: tuple = ("p", "q")

    def __post_init__(self):
        if self.agents < 1 or self.depth < 1:
            raise ValueError("agents and depth must be >= 1")
        if len(self.choices) != self.agents or any(c < 1 for c in self.choices):
            raise ValueError("choices needs one count >= 1 per agent")

    def world_count(self) -> int:
        k = int(np.prod(self.choices))
        return self.depth * k ** (self.depth - 1)


def gen_model(p: GenParams) -> NeutralModel:
    rng = np.random.default_rng(p.seed)
    labels = list(itertools.product(*(range(c) for c in p.choices)))
    # moments in breadth-first order; a moment is its path of child labels
    levels = [[()]]
    for _ in range(p.depth - 1):
        levels.append([path + (lab,) for path in levels[-1] for lab in labels])
    leaves = levels[-1]
    paths = [path for level in levels for path in level]
    mom_id = {path: k for k, path in enumerate(paths)}

    def through(path):
        return [h for h, leaf in enumerate(leaves) if leaf[:len(path)] == path]

    def wid(path, h):
        return f"m{mom_id[path]}h{h}"

    worlds, moments, choice, grand, ideal = [], [], {}, {}, {}
    for path in paths:
        m = mom_id[path]
        hs = through(path)
        block = [wid(path, h) for h in hs]
        worlds.extend(block)
        moments.append(block)
        if len(path) == p.depth - 1:
            for i in range(1, p.agents + 1):
                choice[(m, i)] = [block]
            grand[m] = [block]
        else:
            nxt = {h: leaves[h][len(path)] for h in hs}
            for i in range(1, p.agents + 1):
                groups: dict = {}
                for h in hs:
                    groups.setdefault(nxt[h][i - 1], []).append(wid(path, h))
                choice[(m, i)] = list(groups.values())
            groups = {}
            for h in hs:
                groups.setdefault(nxt[h], []).append(wid(path, h))
            grand[m] = list(groups.values())
        for i in range(1, p.agents + 1):
            cells = choice[(m, i)]
            picked = [c for c in cells if rng.random() < p.ideal_density]
            if not picked:
                picked = [cells[int(rng.integers(len(cells)))]]
            ideal[(m, i)] = [w for c in picked for w in c]

    edges = set()
    for path in paths:
        for h in through(path):
            leaf = leaves[h]
            for cut in range(len(path) + 1, p.depth):
                edges.add((wid(path, h), wid(leaf[:cut], h)))

    valuation = {v: [w for w in worlds if rng.random() < p.valuation_density] for v in p.vars}
    return NeutralModel(agents=p.agents, worlds=tuple(worlds), moments=moments,
                        choice=choice, grand=grand, g_edges=frozenset(edges),
                        valuation=valuation, ideal=ideal)


def random_util(m, seed: int = 0, max_util: int = 2) -> UtilModel:
    """Same skeleton and valuation as ``m`` with seeded utilities in ``0..max_util``."""
    rng = np.random.default_rng(seed)
    util = {w: int(rng.integers(max_util + 1)) for w in m.worlds}
    return UtilModel(agents=m.agents, worlds=m.worlds, moments=m.moments, choice=m.choice,
                     grand=m.grand, g_edges=m.g_edges, valuation=m.valuation, util=util)


def param_grid(max_worlds: int = 16, agents=(1, 2), max_depth: int = 3, max_choice: int = 3):
    """All generator shapes within the given bounds, in a fixed order."""
    out = []
    for n in agents:
        for choices in itertools.product(range(1, max_choice + 1), repeat=n):
            for d in range(1, max_depth + 1):
                p = GenParams(agents=n, depth=d, choices=choices)
                if p.world_count() <= max_worlds:
                    out.append(p)
    return out


def sample_models(count: int, seed: int = 0, max_worlds: int = 16, agents=(1, 2),
                  max_depth: int = 3):
    """``count`` seeded models cycling over :func:`param_grid` shapes.

    Shapes with a single world are skipped; they are covered by hand.
    """
    grid = [p for p in param_grid(max_worlds, agents, max_depth) if p.world_count() > 1]
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        shape = grid[k % len(grid)]
        out.append(gen_model(replace(shape, seed=int(rng.integers(2**31)))))
    return out


def standard_model(seed: int = 0) -> NeutralModel:
    """The two-agent, two-level, 2x2-choice model used for mutation tests."""
    return gen_model(GenParams(agents=2, depth=2, choices=(2, 2), seed=seed))


def random_formula(rng, depth: int = 4, vars=("p", "q"), agents: int = 2):
    """A random core formula of nesting depth at most ``depth``.

    ``rng`` is a :class:`numpy.random.Generator`.
    """
    if depth == 0 or rng.random() < 0.2:
        k = int(rng.integers(len(vars) + 2))
        return Var(vars[k]) if k < len(vars) else (TOP if k == len(vars) else BOT)
    kind = int(rng.integers(8))
    if kind == 0:
        return And(random_formula(rng, depth - 1, vars, agents),
                   random_formula(rng, depth - 1, vars, agents))
    sub = random_formula(rng, depth - 1, vars, agents)
    if kind in (1, 2):
        return Agent(int(rng.integers(1, agents + 1)), sub) if kind == 1 \
            else Ought(int(rng.integers(1, agents + 1)), sub)
    return (Not, Box, Grand, G, H)[kind - 3](sub)


def random_formulas(count: int, seed: int = 0, depth: int = 4, vars=("p", "q"),
                    agents: int = 2) -> list:
    rng = np.random.default_rng(seed)
    return [random_formula(rng, depth, vars, agents) for _ in range(count)]


# -- named fixtures ----------------------------------------------------------

def m1_model() -> NeutralModel:
    """Single moment ``w00 w01 w10 w11``; agent 1 splits on the first digit,
    agent 2 on the second; ideal sets ``{w00, w01}`` and ``{w00, w10}``."""
    ws = ("w00", "w01", "w10", "w11")
    return NeutralModel(
        agents=2, worlds=ws, moments=[ws],
        choice={(0, 1): [["w00", "w01"], ["w10", "w11"]],
                (0, 2): [["w00", "w10"], ["w01", "w11"]]},
        grand={0: [[w] for w in ws]}, g_edges=frozenset(),
        valuation={"p": ["w00", "w01"]},
        ideal={(0, 1): ["w00", "w01"], (0, 2): ["w00", "w10"]})


def chain_model(length: int = 3, agents: int = 1) -> NeutralModel:
    """Linear time ``c0 -> c1 -> ...``, one world per moment."""
    ws = tuple(f"c{k}" for k in range(length))
    edges = {(ws[a], ws[b]) for a in range(length) for b in range(a + 1, length)}
    return NeutralModel(
        agents=agents, worlds=ws, moments=[[w] for w in ws],
        choice={(k, i): [[w]] for k, w in enumerate(ws) for i in range(1, agents + 1)},
        grand={k: [[w]] for k, w in enumerate(ws)}, g_edges=frozenset(edges),
        valuation={}, ideal={(k, i): [w] for k, w in enumerate(ws)
                             for i in range(1, agents + 1)})


def grid_util_model(utils, worlds_per_cell: int = 1, valuation=None) -> UtilModel:
    """One moment, two agents with two choices each.

    Agent 1 chooses the row, agent 2 the column.  The four intersections are
    ``a`` (top-left), ``b`` (top-right), ``c`` (bottom-left), ``d``
    (bottom-right); with ``worlds_per_cell = k`` each holds worlds
    ``a0..a{k-1}`` and ``utils`` lists utilities in that order.  Grand cells
    are singletons.
    """
    names = [f"{q}{t}" if worlds_per_cell > 1 else q
             for q in "abcd" for t in range(worlds_per_cell)]
    if len(utils) != len(names):
        raise ValueError(f"need {len(names)} utilities")
    block = {q: [n for n in names if n[0] == q] for q in "abcd"}
    return UtilModel(
        agents=2, worlds=tuple(names), moments=[names],
        choice={(0, 1): [block["a"] + block["b"], block["c"] + block["d"]],
                (0, 2): [block["a"] + block["c"], block["b"] + block["d"]]},
        grand={0: [[n] for n in names]}, g_edges=frozenset(),
        valuation=valuation or {}, util=dict(zip(names, (int(u) for u in utils))))


# -- mutations ---------------------------------------------------------------

MUTATION_TARGETS = ("C1", "C2", "C3", "T4", "T5", "T6", "T7", "TRANS",
                    "D8", "D9", "D10", "D11")


def _parts(m: NeutralModel) -> dict:
    return dict(agents=m.agents, worlds=m.worlds,
                moments=[set(b) for b in m.moments],
                choice={k: [set(c) for c in v] for k, v in m.choice.items()},
                grand={k: [set(c) for c in v] for k, v in m.grand.items()},
                g_edges=set(m.g_edges), valuation=dict(m.valuation),
                ideal={k: set(v) for k, v in m.ideal.items()},
                ought_edges=None)


def _build(parts) -> NeutralModel:
    parts = dict(parts)
    parts["choice"] = {k: [c for c in v if c] for k, v in parts["choice"].items()}
    parts["grand"] = {k: [c for c in v if c] for k, v in parts["grand"].items()}
    parts["g_edges"] = frozenset(parts["g_edges"])
    return NeutralModel(**parts)


def _candidates(m: NeutralModel, target: str):
    """Yield zero-argument builders, each producing one mutated model."""
    nm = len(m.moments)
    agents = range(1, m.agents + 1)
    srt = lambda ws: sorted(ws, key=m.index.get)

    if target == "C1":
        for i in agents:
            for x in m.worlds:
                for mom in range(nm):
                    if mom == m.moment_of(x) or not m.cells(mom, i):
                        continue
                    def build(i=i, x=x, mom=mom):
                        p = _parts(m)
                        for cell in p["choice"][(m.moment_of(x), i)]:
                            cell.discard(x)
                        p["choice"][(mom, i)][0].add(x)
                        return _build(p)
                    yield build
    elif target == "C2":
        for mom in range(nm):
            for i in agents:
                cells = m.cells(mom, i)
                for a, b in itertools.permutations(range(len(cells)), 2):
                    for x in srt(cells[a]):
                        if len(cells[a]) < 2:
                            continue
                        def build(mom=mom, i=i, a=a, b=b, x=x):
                            p = _parts(m)
                            new = p["choice"][(mom, i)]
                            new[a].discard(x)
                            new[b].add(x)
                            old_ideal = p["ideal"].get((mom, i), set())
                            keep = set().union(*[c for c in new if c <= old_ideal])
                            p["ideal"][(mom, i)] = keep or set(new[b])
                            return _build(p)
                        yield build
    elif target == "C3":
        for mom in range(nm):
            cells = m.grand_cells(mom)
            for a, b in itertools.combinations(range(len(cells)), 2):
                def build(mom=mom, a=a, b=b):
                    p = _parts(m)
                    g = p["grand"][mom]
                    g[a] |= g[b]
                    g[b] = set()
                    return _build(p)
                yield build
    elif target in ("T4", "T5", "T7"):
        for w, u in sorted(m.g_edges, key=lambda e: (m.index[e[0]], m.index[e[1]])):
            unrelated = lambda a, b: a != b and (a, b) not in m.g_edges and (b, a) not in m.g_edges
            if target == "T4":
                new = [(w, v) for v in srt(m.worlds)
                       if m.moment_of(v) != m.moment_of(w) and unrelated(u, v)]
            elif target == "T5":
                new = [(x, u) for x in srt(m.worlds)
                       if m.moment_of(x) != m.moment_of(u) and unrelated(w, x)]
            else:
                new = [(w, v) for v in srt(m.moments[m.moment_of(w)]) if v != w]
            for e in new:
                def build(e=e):
                    p = _parts(m)
                    p["g_edges"] = set(transitive_closure(p["g_edges"] | {e}))
                    return _build(p)
                yield build
        if target == "T7":
            for block in m.moments:
                for w, v in itertools.permutations(srt(block), 2):
                    def build(e=(w, v)):
                        p = _parts(m)
                        p["g_edges"] = set(transitive_closure(p["g_edges"] | {e}))
                        return _build(p)
                    yield build
    elif target == "TRANS":
        for a, b in sorted(m.g_edges):
            if any((b, c) in m.g_edges for c in m.worlds):
                def build(e=(a, b)):
                    p = _parts(m)
                    # drop a shortcut edge a->c that transitivity requires
                    c = next(c for c in srt(m.worlds) if (e[1], c) in m.g_edges)
                    p["g_edges"].discard((e[0], c))
                    return _build(p)
                yield build
    elif target == "T6":
        for m1, m2 in itertools.combinations(range(nm), 2):
            def build(m1=m1, m2=m2):
                p = _parts(m)
                p["moments"][m1] |= p["moments"][m2]
                p["moments"][m2] = set()
                merged = p["moments"][m1]
                for i in agents:
                    p["choice"][(m1, i)] = [set(merged)]
                    p["choice"][(m2, i)] = []
                    p["ideal"][(m1, i)] = set(merged)
                    p["ideal"].pop((m2, i), None)
                p["grand"][m1] = [set(merged)]
                p["grand"][m2] = []
                return _renumber(p)
            yield build
    elif target == "D8":
        for mom in range(nm):
            for i in agents:
                for x in m.worlds:
                    if m.moment_of(x) != mom:
                        def build(mom=mom, i=i, x=x):
                            p = _parts(m)
                            p["ideal"][(mom, i)].add(x)
                            return _build(p)
                        yield build
    elif target == "D9":
        for mom in range(nm):
            for i in agents:
                def build(mom=mom, i=i):
                    p = _parts(m)
                    p["ideal"][(mom, i)] = set()
                    return _build(p)
                yield build
    elif target == "D11":
        for mom in range(nm):
            for i in agents:
                ideal = m.ideal_set(mom, i)
                for cell in m.cells(mom, i):
                    if len(cell) < 2:
                        continue
                    for x in srt(cell):
                        def build(mom=mom, i=i, x=x, cell=cell):
                            p = _parts(m)
                            target_set = p["ideal"][(mom, i)]
                            if cell <= target_set:
                                if any(c <= target_set and c != cell for c in m.cells(mom, i)):
                                    target_set.discard(x)
                                else:
                                    target_set.discard(x)
                                    other = next(c for c in m.cells(mom, i) if c != cell)
                                    target_set |= other
                            else:
                                target_set.add(x)
                            return _build(p)
                        yield build
    elif target == "D10":
        for mom in range(nm):
            block = srt(m.moments[mom])
            for i in agents:
                cells = m.cells(mom, i)
                if len(block) < 2 or len(cells) < 2:
                    continue
                for w in block:
                    for cell in cells:
                        if cell == m.ideal_set(mom, i):
                            continue
                        def build(mom=mom, i=i, w=w, cell=cell):
                            edges = {k: {(a, b) for a in m.worlds for b in m.ideal_at(a, k)}
                                     for k in agents}
                            edges[i] = {(a, b) for a, b in edges[i] if a != w}
                            edges[i] |= {(w, b) for b in cell}
                            return replace(m, ought_edges=edges)
                        yield build
    else:
        raise MutationError(f"unknown mutation target {target!r}")


def _renumber(p) -> NeutralModel:
    """Drop emptied moments and shift moment indices down."""
    keep = [k for k, b in enumerate(p["moments"]) if b]
    new_index = {old: new for new, old in enumerate(keep)}
    p["moments"] = [p["moments"][k] for k in keep]
    p["choice"] = {(new_index[mom], i): cells for (mom, i), cells in p["choice"].items()
                   if mom in new_index}
    p["grand"] = {new_index[mom]: cells for mom, cells in p["grand"].items() if mom in new_index}
    p["ideal"] = {(new_index[mom], i): ws for (mom, i), ws in p["ideal"].items()
                  if mom in new_index}
    return _build(p)


def mutate(m: NeutralModel, target: str, seed: int = 0) -> NeutralModel:
    """A minimally edited copy of ``m`` on which ``target`` fails.

    Candidate edits are tried in a seeded order and the first one that makes
    the frame checker report ``target`` is returned.
    """
    from .framecheck import check_frame

    builders = list(_candidates(m, target))
    order = np.random.default_rng(seed).permutation(len(builders))
    for k in order:
        try:
            mutated = builders[k]()
        except Exception:  # an edit that breaks the partition structure
            continue
        if target in check_frame(mutated).conditions():
            return mutated
    raise MutationError(f"cannot break {target} on this model")


def irr_valuation(m, w, p: str):
    """Copy of ``m`` where ``p`` is false exactly on the moment of ``w``.

    On frames without G edges inside moments the marker
    ``box ~p & box (G p & H p)`` is then true at ``w``.
    """
    here = m.moments[m.moment_of(w)]
    val = dict(m.valuation)
    val[p] = frozenset(m.worlds) - here
    return replace(m, valuation=val)


def irr_marker_holds(m, w, p: str) -> bool:
    return evaluate(m, w, name_formula(p))
