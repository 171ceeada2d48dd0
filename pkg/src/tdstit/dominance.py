"""States, preference and dominance over an agent's choice cells.

A *state* for agent ``i`` at a moment is a non-empty intersection of one
cell of every other agent: the part of the outcome ``i`` cannot influence.
Cell ``A`` weakly dominates-from-below cell ``B`` (``A <= B`` in dominance)
when, inside every state, every outcome of ``A`` is at most every outcome
of ``B``.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from .model import NeutralModel, UtilModel


@dataclass(frozen=True)
class StatePartition:
    moment: int
    agent: int
    blocks: tuple


def _check_moment(m, mom):
    if not 0 <= mom < len(m.moments):
        raise ValueError(f"moment {mom} out of range")


def states(m, i: int, mom: int) -> StatePartition:
    """Partition of moment ``mom`` by the cells of all agents other than ``i``.

    With a single agent the empty intersection constrains nothing, so the
    only state is the whole moment.
    """
    m._agent(i)
    _check_moment(m, mom)
    others = [k for k in range(1, m.agents + 1) if k != i]
    groups: dict = {}
    for w in sorted(m.moments[mom], key=m.index.get):
        key = tuple(m.cell_of(k, w) for k in others)
        groups.setdefault(key, set()).add(w)
    return StatePartition(mom, i, tuple(frozenset(g) for g in groups.values()))


def state_of(m, i: int, w) -> frozenset:
    """``R^s_i(w)``: worlds of ``w``'s moment sharing every other agent's cell."""
    mom = m.moment_of(w)
    others = [k for k in range(1, m.agents + 1) if k != i]
    key = tuple(m.cell_of(k, w) for k in others)
    return frozenset(v for v in m.moments[mom]
                     if tuple(m.cell_of(k, v) for k in others) == key)


def weak_pref(m: UtilModel, a, b) -> bool:
    """Every outcome in ``a`` is at most every outcome in ``b`` (vacuous if empty)."""
    if not a or not b:
        return True
    return max(m.util[x] for x in a) <= min(m.util[y] for y in b)


def strict_pref(m: UtilModel, a, b) -> bool:
    return weak_pref(m, a, b) and not weak_pref(m, b, a)


def _cells_same_moment(m, i, a, b):
    if a[1] != i or b[1] != i:
        raise ValueError("cell references belong to another agent")
    if a[0] != b[0]:
        raise ValueError("cells are from different moments")
    return m.cell(a), m.cell(b)


def weak_dom(m: UtilModel, i: int, a, b) -> bool:
    """``a`` is weakly dominated by ``b`` (``a`` ⪯ ``b``); both are cell refs."""
    ca, cb = _cells_same_moment(m, i, a, b)
    return all(weak_pref(m, ca & s, cb & s) for s in states(m, i, a[0]).blocks)


def strict_dom(m: UtilModel, i: int, a, b) -> bool:
    return weak_dom(m, i, a, b) and not weak_dom(m, i, b, a)


@dataclass(frozen=True)
class DominanceTable:
    """All pairwise verdicts for one agent at one moment.

    ``weak[a, b]`` is true when cell ``a`` ⪯ cell ``b``.
    """

    moment: int
    agent: int
    cells: tuple
    weak: np.ndarray
    strict: np.ndarray

    def strictly_dominated(self) -> list:
        return [a for a in range(len(self.cells)) if self.strict[a].any()]

    def maximal(self) -> list:
        return [a for a in range(len(self.cells)) if not self.strict[a].any()]


_tables: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def dominance_table(m: UtilModel, mom: int, i: int) -> DominanceTable:
    """Cached ⪯/≺ matrices for agent ``i`` at moment ``mom``."""
    per_model = _tables.setdefault(m, {})
    key = (mom, i)
    table = per_model.get(key)
    if table is None:
        cells = m.cells(mom, i)
        blocks = states(m, i, mom).blocks
        k = len(cells)
        weak = np.zeros((k, k), dtype=bool)
        for a in range(k):
            for b in range(k):
                weak[a, b] = all(weak_pref(m, cells[a] & s, cells[b] & s) for s in blocks)
        strict = weak & ~weak.T
        table = DominanceTable(mom, i, cells, weak, strict)
        per_model[key] = table
    return table


def optimal_cells(m: NeutralModel, i: int, mom: int) -> set:
    """Cell references of agent ``i`` at ``mom`` lying inside the ideal set."""
    _check_moment(m, mom)
    ideal = m.ideal_set(mom, i)
    return {(mom, i, k) for k, c in enumerate(m.cells(mom, i)) if c <= ideal}
