"""Model checking: neutral semantics and utilitarian dominance semantics.

Both semantics share every clause except obligation.  In a neutral model
``O{i} f`` holds at ``w`` when all of agent ``i``'s ideal worlds from ``w``
satisfy ``f``.  In a utilitarian model it holds when every cell that does not
guarantee ``f`` is strictly dominated, and only ever by cells guaranteeing
``f`` (every cell at least as good as the dominating one guarantees ``f``
too).

Extensions are computed bottom-up and memoised per model; world sets are
``int`` bitmasks internally.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

from .dominance import dominance_table
from .model import NeutralModel, UtilModel
from .syntax import (And, Agent, Bot, Box, G, Grand, H, Not, Ought, Top, Var,
                     Formula)


@dataclass(frozen=True)
class Extension:
    formula: Formula
    worlds: frozenset


def _ought_mask_util(m: UtilModel, mom: int, i: int, ext: int) -> bool:
    table = dominance_table(m, mom, i)
    masks = m.cell_masks[(mom, i)]
    inside = [c & ~ext == 0 for c in masks]
    for v, ok in enumerate(inside):
        if ok:
            continue
        found = False
        for z in range(len(masks)):
            if not (table.strict[v, z] and inside[z]):
                continue
            if all(inside[x] for x in range(len(masks)) if table.weak[z, x]):
                found = True
                break
        if not found:
            return False
    return True


def ought_util(m: UtilModel, mom: int, i: int, extension) -> bool:
    """The dominance obligation clause for an abstract extension (a world set)."""
    return _ought_mask_util(m, mom, i, m.mask(set(extension) & m.moments[mom]))


class Evaluator:
    """Memoised extension computation for one model.

    ``bindings`` maps extra atom names to fixed world sets.  The axiom
    harness uses this to evaluate a schema with its metavariables read as
    atoms carrying the extensions of the substituted formulas.
    """

    def __init__(self, model, bindings=None):
        if not isinstance(model, (NeutralModel, UtilModel)):
            raise TypeError("expected a NeutralModel or UtilModel")
        self.model = model
        self.utilitarian = isinstance(model, UtilModel)
        self.bindings = {k: (v if isinstance(v, int) else model.mask(v))
                         for k, v in (bindings or {}).items()}
        self.memo: dict = {}

    def mask(self, f: Formula) -> int:
        memo = self.memo
        got = memo.get(f)
        if got is not None:
            return got
        # explicit stack so deep formulas do not hit the recursion limit
        stack = [f]
        while stack:
            g = stack[-1]
            if g in memo:
                stack.pop()
                continue
            kids = [k for k in _children(g) if k not in memo]
            if kids:
                stack.extend(kids)
                continue
            memo[g] = self._node(g)
            stack.pop()
        return memo[f]

    def _node(self, f: Formula) -> int:
        m = self.model
        full = m.full_mask
        if isinstance(f, Var):
            if f.name in self.bindings:
                return self.bindings[f.name]
            return m.mask(m.truth_set(f.name))
        if isinstance(f, Top):
            return full
        if isinstance(f, Bot):
            return 0
        if isinstance(f, Not):
            return full & ~self.memo[f.arg]
        if isinstance(f, And):
            return self.memo[f.left] & self.memo[f.right]
        if isinstance(f, Box):
            return _blocks_inside(m.moment_masks, self.memo[f.arg])
        if isinstance(f, Agent):
            m._agent(f.agent)
            masks = [c for mom in range(len(m.moments))
                     for c in m.cell_masks.get((mom, f.agent), ())]
            return _blocks_inside(masks, self.memo[f.arg])
        if isinstance(f, Grand):
            return _blocks_inside(m.grand_masks, self.memo[f.arg])
        if isinstance(f, G):
            return _universal(m.succ_masks, self.memo[f.arg])
        if isinstance(f, H):
            return _universal(m.pred_masks, self.memo[f.arg])
        if isinstance(f, Ought):
            m._agent(f.agent)
            ext = self.memo[f.arg]
            if self.utilitarian:
                out = 0
                for mom, block in enumerate(m.moment_masks):
                    if _ought_mask_util(m, mom, f.agent, ext):
                        out |= block
                return out
            out = 0
            for k in range(len(m.worlds)):
                if m.ideal_masks[(k, f.agent)] & ~ext == 0:
                    out |= 1 << k
            return out
        raise TypeError(f"not a core formula: {f!r}")

    def holds(self, w, f: Formula) -> bool:
        return bool(self.mask(f) >> self.model.index[self.model._world(w)] & 1)

    def extension(self, f: Formula) -> frozenset:
        return self.model.unmask(self.mask(f))


def _children(f):
    if isinstance(f, And):
        return (f.left, f.right)
    if isinstance(f, (Var, Top, Bot)):
        return ()
    return (f.arg,)


def _blocks_inside(blocks, ext: int) -> int:
    out = 0
    for b in blocks:
        if b & ~ext == 0:
            out |= b
    return out


def _universal(neighbours, ext: int) -> int:
    out = 0
    for k, nb in enumerate(neighbours):
        if nb & ~ext == 0:
            out |= 1 << k
    return out


_evaluators: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def evaluator(m) -> Evaluator:
    """The shared memoising evaluator of ``m`` (created on first use)."""
    ev = _evaluators.get(m)
    if ev is None:
        ev = _evaluators[m] = Evaluator(m)
    return ev


def eval_neutral(m: NeutralModel, w, f: Formula) -> bool:
    if not isinstance(m, NeutralModel):
        raise TypeError("eval_neutral needs a NeutralModel")
    return evaluator(m).holds(w, f)


def eval_util(m: UtilModel, w, f: Formula) -> bool:
    if not isinstance(m, UtilModel):
        raise TypeError("eval_util needs a UtilModel")
    return evaluator(m).holds(w, f)


def evaluate(m, w, f: Formula) -> bool:
    """Truth of ``f`` at ``w`` under whichever semantics fits ``m``."""
    return evaluator(m).holds(w, f)


def extension(m, f: Formula) -> Extension:
    return Extension(f, evaluator(m).extension(f))


def valid_on_model(m, f: Formula) -> bool:
    return evaluator(m).mask(f) == m.full_mask
