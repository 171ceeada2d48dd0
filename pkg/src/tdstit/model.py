"""Finite neutral and utilitarian models.

Moments, agent choices and grand-coalition choices are stored as partitions
(lists of blocks) rather than edge sets, so each of those relations is an
equivalence relation by construction.  Cross-relation conditions (cells
inside moments, grand cells inside agent cells, ...) are *not* enforced here;
they are the business of :mod:`tdstit.framecheck`, which needs to be able to
look at broken frames.

Worlds are identified by strings.  Internally every world also has a bit
position, and world sets are handled as ``int`` bitmasks by the evaluator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping


class ModelError(ValueError):
    """Structurally malformed model data (not a frame-condition failure)."""


def transitive_closure(edges) -> frozenset:
    succ: dict = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
    closed = set()
    for start in list(succ):
        seen = set()
        stack = list(succ[start])
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ.get(x, ()))
        closed.update((start, x) for x in seen)
    return frozenset(closed)


def _check_partition(blocks, universe, what):
    seen = set()
    for b in blocks:
        if not b:
            raise ModelError(f"{what}: empty block")
        unknown = b - universe
        if unknown:
            raise ModelError(f"{what}: unknown worlds {sorted(unknown)}")
        if seen & b:
            raise ModelError(f"{what}: overlapping blocks at {sorted(seen & b)}")
        seen |= b
    if seen != universe:
        raise ModelError(f"{what}: worlds {sorted(universe - seen)} not covered")


@dataclass(frozen=True, eq=False)
class _Frame:
    """Shared skeleton: worlds, moments, choices, grand choices, G, valuation.

    ``choice[(m, i)]`` lists agent ``i``'s cells filed under moment ``m``;
    over all moments the cells of one agent must partition ``worlds``.
    ``grand[m]`` likewise lists grand-coalition cells.
    """

    agents: int
    worlds: tuple
    moments: tuple
    choice: Mapping
    grand: Mapping
    g_edges: frozenset
    valuation: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.agents < 1:
            raise ModelError("need at least one agent")
        if not self.worlds:
            raise ModelError("world set is empty")
        if len(set(self.worlds)) != len(self.worlds):
            raise ModelError("duplicate world ids")
        universe = frozenset(self.worlds)
        object.__setattr__(self, "moments", tuple(frozenset(b) for b in self.moments))
        _check_partition(self.moments, universe, "moments")
        nm = len(self.moments)
        choice = {}
        for (m, i), cells in self.choice.items():
            if not 0 <= m < nm or not 1 <= i <= self.agents:
                raise ModelError(f"choice entry ({m}, {i}) out of range")
            choice[(m, i)] = tuple(frozenset(c) for c in cells)
        for i in range(1, self.agents + 1):
            blocks = [c for m in range(nm) for c in choice.get((m, i), ())]
            _check_partition(blocks, universe, f"choice of agent {i}")
        grand = {}
        for m, cells in self.grand.items():
            if not 0 <= m < nm:
                raise ModelError(f"grand entry {m} out of range")
            grand[m] = tuple(frozenset(c) for c in cells)
        _check_partition([c for m in range(nm) for c in grand.get(m, ())], universe,
                         "grand coalition choice")
        object.__setattr__(self, "choice", choice)
        object.__setattr__(self, "grand", grand)
        edges = frozenset((a, b) for a, b in self.g_edges)
        for a, b in edges:
            if a not in universe or b not in universe:
                raise ModelError(f"G edge ({a}, {b}) mentions an unknown world")
        object.__setattr__(self, "g_edges", edges)
        val = {}
        for var, ws in self.valuation.items():
            ws = frozenset(ws)
            if ws - universe:
                raise ModelError(f"valuation of {var} mentions unknown worlds")
            val[var] = ws
        object.__setattr__(self, "valuation", val)

    # -- lookups -------------------------------------------------------------

    @cached_property
    def index(self) -> dict:
        return {w: k for k, w in enumerate(self.worlds)}

    @cached_property
    def _moment_index(self) -> dict:
        return {w: m for m, block in enumerate(self.moments) for w in block}

    @cached_property
    def _cell_index(self) -> dict:
        out = {}
        for (m, i), cells in self.choice.items():
            for k, c in enumerate(cells):
                for w in c:
                    out[(i, w)] = (m, i, k)
        return out

    @cached_property
    def _grand_index(self) -> dict:
        return {w: (m, k) for m, cells in self.grand.items()
                for k, c in enumerate(cells) for w in c}

    @cached_property
    def _succ(self) -> dict:
        out = {w: set() for w in self.worlds}
        for a, b in self.g_edges:
            out[a].add(b)
        return {w: frozenset(s) for w, s in out.items()}

    @cached_property
    def _pred(self) -> dict:
        out = {w: set() for w in self.worlds}
        for a, b in self.g_edges:
            out[b].add(a)
        return {w: frozenset(s) for w, s in out.items()}

    def _world(self, w):
        if w not in self.index:
            raise KeyError(f"unknown world {w!r}")
        return w

    def _agent(self, i):
        if not 1 <= i <= self.agents:
            raise ValueError(f"agent {i} out of range 1..{self.agents}")
        return i

    def moment_of(self, w) -> int:
        return self._moment_index[self._world(w)]

    def moment(self, m: int) -> frozenset:
        return self.moments[m]

    def cells(self, m: int, i: int) -> tuple:
        return self.choice.get((m, self._agent(i)), ())

    def grand_cells(self, m: int) -> tuple:
        return self.grand.get(m, ())

    def cell_of(self, i: int, w) -> tuple:
        """The ``(moment, agent, index)`` reference of ``w``'s cell for ``i``."""
        return self._cell_index[(self._agent(i), self._world(w))]

    def cell(self, ref) -> frozenset:
        m, i, k = ref
        return self.choice[(m, i)][k]

    def choice_cell(self, i: int, w) -> frozenset:
        return self.cell(self.cell_of(i, w))

    def grand_cell(self, w) -> frozenset:
        m, k = self._grand_index[self._world(w)]
        return self.grand[m][k]

    def g_successors(self, w) -> frozenset:
        return self._succ[self._world(w)]

    def h_predecessors(self, w) -> frozenset:
        return self._pred[self._world(w)]

    def truth_set(self, var: str) -> frozenset:
        return self.valuation.get(var, frozenset())

    def terminal_moments(self) -> list:
        return [m for m, block in enumerate(self.moments)
                if all(not self._succ[w] for w in block)]

    # -- bitmask views used by the evaluator ------------------------------------

    def mask(self, ws) -> int:
        out = 0
        idx = self.index
        for w in ws:
            out |= 1 << idx[w]
        return out

    def unmask(self, bits: int) -> frozenset:
        return frozenset(w for k, w in enumerate(self.worlds) if bits >> k & 1)

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.worlds)) - 1

    @cached_property
    def moment_masks(self) -> tuple:
        return tuple(self.mask(b) for b in self.moments)

    @cached_property
    def cell_masks(self) -> dict:
        return {key: tuple(self.mask(c) for c in cells) for key, cells in self.choice.items()}

    @cached_property
    def grand_masks(self) -> tuple:
        return tuple(self.mask(c) for m in sorted(self.grand) for c in self.grand[m])

    @cached_property
    def succ_masks(self) -> tuple:
        return tuple(self.mask(self._succ[w]) for w in self.worlds)

    @cached_property
    def pred_masks(self) -> tuple:
        return tuple(self.mask(self._pred[w]) for w in self.worlds)

    def skeleton(self) -> tuple:
        """Hashable summary used to check two models share a frame."""
        return (self.agents, self.worlds, self.moments,
                tuple(sorted((k, tuple(sorted(map(sorted, v)))) for k, v in self.choice.items())),
                tuple(sorted((k, tuple(sorted(map(sorted, v)))) for k, v in self.grand.items())),
                self.g_edges)

    def _skeleton_json(self) -> dict:
        return {
            "agents": self.agents,
            "worlds": list(self.worlds),
            "moments": [sorted(b, key=self.index.get) for b in self.moments],
            "choice": [{"moment": m, "agent": i,
                        "cells": [sorted(c, key=self.index.get) for c in cells]}
                       for (m, i), cells in sorted(self.choice.items())],
            "grand": [{"moment": m, "cells": [sorted(c, key=self.index.get) for c in cells]}
                      for m, cells in sorted(self.grand.items())],
            "G": sorted([list(e) for e in self.g_edges],
                        key=lambda e: (self.index[e[0]], self.index[e[1]])),
        }

    def _valuation_json(self) -> dict:
        return {v: sorted(ws, key=self.index.get) for v, ws in sorted(self.valuation.items())}


@dataclass(frozen=True, eq=False)
class NeutralModel(_Frame):
    """A model whose obligations come from ideal-world sets.

    ``ideal[(m, i)]`` is the target set of agent ``i``'s ought relation from
    every world of moment ``m``.  When a model is loaded from raw ought edges
    that are not constant on moments, ``ought_edges[i]`` keeps the per-world
    targets and takes precedence; such a model fails D10.
    """

    ideal: Mapping = field(default_factory=dict)
    ought_edges: Mapping | None = None

    def __post_init__(self):
        super().__post_init__()
        universe = frozenset(self.worlds)
        ideal = {}
        for (m, i), ws in self.ideal.items():
            if not 0 <= m < len(self.moments) or not 1 <= i <= self.agents:
                raise ModelError(f"ideal entry ({m}, {i}) out of range")
            ws = frozenset(ws)
            if ws - universe:
                raise ModelError(f"ideal ({m}, {i}) mentions unknown worlds")
            ideal[(m, i)] = ws
        object.__setattr__(self, "ideal", ideal)
        if self.ought_edges is not None:
            edges = {}
            for i, pairs in self.ought_edges.items():
                pairs = frozenset((a, b) for a, b in pairs)
                if any(a not in universe or b not in universe for a, b in pairs):
                    raise ModelError(f"ought edges of agent {i} mention unknown worlds")
                edges[i] = pairs
            object.__setattr__(self, "ought_edges", edges)

    @cached_property
    def _ought_targets(self) -> dict:
        out = {}
        for i, pairs in (self.ought_edges or {}).items():
            for a, b in pairs:
                out.setdefault((i, a), set()).add(b)
        return {k: frozenset(v) for k, v in out.items()}

    def ideal_set(self, m: int, i: int) -> frozenset:
        """Ideal worlds of agent ``i`` at moment ``m`` (moment-constant storage)."""
        if self.ought_edges is not None:
            targets = {self.ideal_at(w, i) for w in self.moments[m]}
            if len(targets) != 1:
                raise ModelError(f"ought targets of agent {i} vary across moment {m}")
            return targets.pop()
        return self.ideal.get((m, self._agent(i)), frozenset())

    def ideal_at(self, w, i: int) -> frozenset:
        """``R_O_i(w)``: the worlds ideal for agent ``i`` as seen from ``w``."""
        if self.ought_edges is not None:
            if i in self.ought_edges:
                return self._ought_targets.get((i, self._world(w)), frozenset())
        return self.ideal.get((self.moment_of(w), self._agent(i)), frozenset())

    @cached_property
    def ideal_masks(self) -> dict:
        """``(world_index, agent) -> mask`` of per-world ought targets."""
        return {(k, i): self.mask(self.ideal_at(w, i))
                for k, w in enumerate(self.worlds) for i in range(1, self.agents + 1)}

    def to_json(self) -> dict:
        out = self._skeleton_json()
        if self.ought_edges is not None:
            out["ought"] = [{"agent": i, "edges": sorted(map(list, pairs))}
                            for i, pairs in sorted(self.ought_edges.items())]
        else:
            out["ideal"] = [{"moment": m, "agent": i,
                             "worlds": sorted(ws, key=self.index.get)}
                            for (m, i), ws in sorted(self.ideal.items())]
        out["valuation"] = self._valuation_json()
        return out


@dataclass(frozen=True, eq=False)
class UtilModel(_Frame):
    """A model whose obligations come from a world utility map."""

    util: Mapping = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        util = dict(self.util)
        missing = set(self.worlds) - set(util)
        if missing:
            raise ModelError(f"util undefined on {sorted(missing)}")
        if set(util) - set(self.worlds):
            raise ModelError("util mentions unknown worlds")
        for w, u in util.items():
            if not isinstance(u, int) or isinstance(u, bool) or u < 0:
                raise ModelError(f"util({w}) = {u!r} is not a natural number")
        object.__setattr__(self, "util", util)

    def to_json(self) -> dict:
        out = self._skeleton_json()
        out["util"] = {w: self.util[w] for w in self.worlds}
        out["valuation"] = self._valuation_json()
        return out


Model = NeutralModel | UtilModel


def with_valuation(m: Model, valuation: Mapping) -> Model:
    return replace(m, valuation=dict(valuation))


# -- JSON file format ------------------------------------------------------

_KEYS = {"agents", "worlds", "moments", "choice", "grand", "G", "ideal", "ought",
         "util", "valuation"}


class ModelFormatError(ValueError):
    pass


def model_from_json(data: dict, close_g: bool = False, permissive: bool = False) -> Model:
    """Build a model from the JSON structure.

    ``close_g`` applies transitive closure to ``G`` first; otherwise an open
    relation is rejected.  Raw ``ought`` edge lists are converted to
    moment-constant ideal sets; if they are not moment-constant the load
    fails unless ``permissive`` is set, in which case the edges are kept and
    framecheck reports the D10 failure.
    """
    if not isinstance(data, dict):
        raise ModelFormatError("model must be a JSON object")
    unknown = set(data) - _KEYS
    if unknown:
        raise ModelFormatError(f"unknown keys {sorted(unknown)}")
    for key in ("agents", "worlds", "moments", "choice", "grand", "G", "valuation"):
        if key not in data:
            raise ModelFormatError(f"missing key {key!r}")
    kinds = [k for k in ("ideal", "ought", "util") if k in data]
    if len(kinds) != 1:
        raise ModelFormatError("exactly one of 'ideal', 'ought', 'util' is required")
    try:
        agents = int(data["agents"])
        worlds = tuple(data["worlds"])
        moments = [list(b) for b in data["moments"]]
        choice = {(int(e["moment"]), int(e["agent"])): e["cells"] for e in data["choice"]}
        grand = {int(e["moment"]): e["cells"] for e in data["grand"]}
        edges = {(a, b) for a, b in data["G"]}
        valuation = {v: list(ws) for v, ws in data["valuation"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model: {exc}") from exc
    if close_g:
        edges = transitive_closure(edges)
    elif transitive_closure(edges) != frozenset(edges):
        raise ModelFormatError("G is not transitively closed (use close_g)")
    common = dict(agents=agents, worlds=worlds, moments=moments, choice=choice,
                  grand=grand, g_edges=frozenset(edges), valuation=valuation)
    try:
        if kinds[0] == "util":
            util = data["util"]
            if not isinstance(util, dict):
                raise ModelFormatError("'util' must be an object")
            return UtilModel(util=dict(util), **common)
        if kinds[0] == "ideal":
            ideal = {(int(e["moment"]), int(e["agent"])): e["worlds"] for e in data["ideal"]}
            return NeutralModel(ideal=ideal, **common)
        raw = {int(e["agent"]): [tuple(p) for p in e["edges"]] for e in data["ought"]}
        model = NeutralModel(ought_edges=raw, **common)
    except ModelError as exc:
        raise ModelFormatError(str(exc)) from exc
    try:
        ideal = {(m, i): model.ideal_set(m, i)
                 for m in range(len(model.moments)) for i in range(1, agents + 1)}
    except ModelError:
        if permissive:
            return model
        raise ModelFormatError("ought edges are not constant on moments (D10)")
    return replace(model, ideal=ideal, ought_edges=None)


def load_model(path, close_g: bool = False, permissive: bool = False) -> Model:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"invalid JSON: {exc}") from exc
    return model_from_json(data, close_g=close_g, permissive=permissive)


def dump_model(m: Model, path=None) -> str:
    text = json.dumps(m.to_json(), indent=1, sort_keys=True)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
