"""Axiom schemas A0-A25 and the model-level validity sweep.

A schema is a formula template whose metavariables are ``Var`` leaves named
``?phi``, ``?psi`` and so on.  Schemas quantified over an agent are built once
per agent index; A10 and A11 are built for the model's full agent count.

A0 ("all propositional tautologies") is represented by a fixed list of
tautology templates for the sweep.  The proof checker decides A0 membership
by truth tables instead (see :mod:`tdstit.proofcheck`).

The sweep never builds instance formulas.  Truth of a schema instance at a
world depends on the substituted formulas only through their extensions, so
it evaluates each template once over every combination of *distinct*
extensions, as a batch of boolean rows (:func:`batch_eval`).
"""

from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass, field

import numpy as np

from .dominance import dominance_table
from .model import NeutralModel, UtilModel
from .semantics import Evaluator
from .syntax import (And, Agent, Bot, Box, G, Grand, H, Not, Ought, Top, Var, Formula,
                     agent_dia, conj, dia, future, grand_dia, imp, or_, past, to_text)


def meta(name: str) -> Var:
    return Var("?" + name)


def is_meta(f) -> bool:
    return isinstance(f, Var) and f.name.startswith("?")


PHI, PSI, CHI = meta("phi"), meta("psi"), meta("chi")


def _k(box):
    return lambda i, n: imp(box(imp(PHI, PSI)), imp(box(PHI), box(PSI)))


def _a10(i, n):
    phis = [meta(f"phi{k}") for k in range(1, n + 1)]
    return imp(conj([dia(Agent(k, f)) for k, f in enumerate(phis, 1)]),
               dia(conj([Agent(k, f) for k, f in enumerate(phis, 1)])))


def _a11(i, n):
    phis = [meta(f"phi{k}") for k in range(1, n + 1)]
    return imp(conj([Agent(k, f) for k, f in enumerate(phis, 1)]), Grand(conj(phis)))


# (builder, agent-indexed)
SCHEMAS = {
    "A1": (_k(Box), False),
    "A2": (lambda i, n: imp(Box(PHI), PHI), False),
    "A3": (lambda i, n: imp(dia(PHI), Box(dia(PHI))), False),
    "A4": (lambda i, n: imp(Agent(i, imp(PHI, PSI)), imp(Agent(i, PHI), Agent(i, PSI))), True),
    "A5": (lambda i, n: imp(Agent(i, PHI), PHI), True),
    "A6": (lambda i, n: imp(agent_dia(i, PHI), Agent(i, agent_dia(i, PHI))), True),
    "A7": (_k(Grand), False),
    "A8": (lambda i, n: imp(Grand(PHI), PHI), False),
    "A9": (lambda i, n: imp(grand_dia(PHI), Grand(grand_dia(PHI))), False),
    "A10": (_a10, False),
    "A11": (_a11, False),
    "A12": (lambda i, n: imp(Ought(i, imp(PHI, PSI)), imp(Ought(i, PHI), Ought(i, PSI))), True),
    "A13": (lambda i, n: imp(Box(PHI), And(Agent(i, PHI), Ought(i, PHI))), True),
    "A14": (lambda i, n: imp(Ought(i, PHI), dia(Agent(i, PHI))), True),
    "A15": (lambda i, n: imp(dia(Ought(i, PHI)), Box(Ought(i, PHI))), True),
    "A16": (lambda i, n: imp(Box(imp(Agent(i, PHI), Agent(i, PSI))),
                             imp(Ought(i, PHI), Ought(i, PSI))), True),
    "A17": (_k(G), False),
    "A18": (lambda i, n: imp(G(PHI), G(G(PHI))), False),
    "A19": (lambda i, n: imp(G(PHI), future(PHI)), False),
    "A20": (_k(H), False),
    "A21": (lambda i, n: imp(PHI, G(past(PHI))), False),
    "A22": (lambda i, n: imp(PHI, H(future(PHI))), False),
    "A23": (lambda i, n: imp(future(past(PHI)), or_(past(PHI), or_(PHI, future(PHI)))), False),
    "A24": (lambda i, n: imp(past(future(PHI)), or_(past(PHI), or_(PHI, future(PHI)))), False),
    "A25": (lambda i, n: imp(future(dia(PHI)), grand_dia(future(PHI))), False),
}

TAUTOLOGIES = (
    imp(PHI, PHI),
    or_(PHI, Not(PHI)),
    imp(Not(Not(PHI)), PHI),
    imp(And(PHI, PSI), PHI),
    imp(PHI, imp(PSI, PHI)),
    imp(imp(imp(PHI, PSI), PHI), PHI),
    imp(imp(PHI, PSI), imp(Not(PSI), Not(PHI))),
    imp(imp(PHI, imp(PSI, CHI)), imp(imp(PHI, PSI), imp(PHI, CHI))),
    imp(And(imp(PHI, CHI), imp(PSI, CHI)), imp(or_(PHI, PSI), CHI)),
)

SCHEMA_IDS = ("A0",) + tuple(SCHEMAS)


def schema_templates(sid: str, agents: int) -> list:
    """``[(agent_or_None, template), ...]`` for schema ``sid`` at ``agents`` agents."""
    if sid == "A0":
        return [(None, t) for t in TAUTOLOGIES]
    if sid not in SCHEMAS:
        raise KeyError(f"unknown schema {sid!r}")
    build, indexed = SCHEMAS[sid]
    if indexed:
        return [(i, build(i, agents)) for i in range(1, agents + 1)]
    return [(None, build(1, agents))]


def metas_of(f: Formula) -> list:
    """Metavariable names of a template, in first-occurrence order."""
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if is_meta(g):
            if g.name[1:] not in out:
                out.append(g.name[1:])
        elif isinstance(g, And):
            stack.extend((g.right, g.left))
        elif not isinstance(g, (Var, Top, Bot)):
            stack.append(g.arg)
    return out


def instantiate(template: Formula, subst: dict) -> Formula:
    """Replace every metavariable ``?x`` with ``subst[x]``."""
    if is_meta(template):
        return subst[template.name[1:]]
    if isinstance(template, (Var, Top, Bot)):
        return template
    if isinstance(template, And):
        return And(instantiate(template.left, subst), instantiate(template.right, subst))
    if isinstance(template, (Agent, Ought)):
        return type(template)(template.agent, instantiate(template.arg, subst))
    return type(template)(instantiate(template.arg, subst))


# -- batch evaluation ---------------------------------------------------------

class _Matrices:
    """0/1 relation matrices of one model, used by :func:`batch_eval`."""

    def __init__(self, m):
        nw = len(m.worlds)
        idx = m.index

        def rel(pairs):
            a = np.zeros((nw, nw), dtype=np.int32)
            for x, y in pairs:
                a[idx[x], idx[y]] = 1
            return a

        def blocks(bs):
            return rel((x, y) for b in bs for x in b for y in b)

        self.box = blocks(m.moments)
        self.agent = {i: blocks(c for mom in range(len(m.moments)) for c in m.cells(mom, i))
                      for i in range(1, m.agents + 1)}
        self.grand = blocks(c for mom in range(len(m.moments)) for c in m.grand_cells(mom))
        self.succ = rel(m.g_edges)
        self.pred = self.succ.T.copy()
        if isinstance(m, NeutralModel):
            self.ideal = {i: rel((w, v) for w in m.worlds for v in m.ideal_at(w, i))
                          for i in range(1, m.agents + 1)}


_matrices: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _mats(m) -> _Matrices:
    got = _matrices.get(m)
    if got is None:
        got = _matrices[m] = _Matrices(m)
    return got


def _universal(rel, x):
    # row r, world k: every rel-neighbour of k is in x[r]
    return ((~x).astype(np.int32) @ rel.T) == 0


def _ought_util_batch(m: UtilModel, i: int, x):
    out = np.zeros_like(x)
    for mom, block in enumerate(m.moments):
        table = dominance_table(m, mom, i)
        cols = [[m.index[w] for w in c] for c in table.cells]
        inside = np.stack([x[:, c].all(axis=1) for c in cols], axis=1)
        weak = table.weak.astype(np.int32)
        strict = table.strict.astype(np.int32)
        # z is a good witness when every cell at least as good as z is inside
        good = inside & (((~inside).astype(np.int32) @ weak.T) == 0)
        ok = inside | ((good.astype(np.int32) @ strict.T) > 0)
        holds = ok.all(axis=1)
        out[:, [m.index[w] for w in block]] = holds[:, None]
    return out


def batch_eval(m, f: Formula, env: dict, rows: int) -> np.ndarray:
    """Truth of ``f`` as a ``(rows, |W|)`` boolean array.

    ``env`` maps metavariable names (without ``?``) to boolean arrays of that
    shape; ordinary variables take their value from the model.
    """
    mats = _mats(m)
    nw = len(m.worlds)
    memo: dict = {}

    def go(g):
        got = memo.get(g)
        if got is not None:
            return got
        if is_meta(g):
            r = env[g.name[1:]]
        elif isinstance(g, Var):
            row = np.zeros(nw, dtype=bool)
            row[[m.index[w] for w in m.truth_set(g.name)]] = True
            r = np.broadcast_to(row, (rows, nw))
        elif isinstance(g, Top):
            r = np.ones((rows, nw), dtype=bool)
        elif isinstance(g, Bot):
            r = np.zeros((rows, nw), dtype=bool)
        elif isinstance(g, Not):
            r = ~go(g.arg)
        elif isinstance(g, And):
            r = go(g.left) & go(g.right)
        elif isinstance(g, Box):
            r = _universal(mats.box, go(g.arg))
        elif isinstance(g, Agent):
            r = _universal(mats.agent[g.agent], go(g.arg))
        elif isinstance(g, Grand):
            r = _universal(mats.grand, go(g.arg))
        elif isinstance(g, G):
            r = _universal(mats.succ, go(g.arg))
        elif isinstance(g, H):
            r = _universal(mats.pred, go(g.arg))
        elif isinstance(g, Ought):
            x = go(g.arg)
            if isinstance(m, UtilModel):
                r = _ought_util_batch(m, g.agent, x)
            else:
                r = _universal(mats.ideal[g.agent], x)
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = r
        return r

    return np.asarray(go(f))


# -- sweep ---------------------------------------------------------------------

@dataclass(frozen=True)
class Counterexample:
    schema: str
    agent: int | None
    substitution: dict
    worlds: tuple

    def instance(self, template: Formula) -> Formula:
        return instantiate(template, self.substitution)

    def to_json(self) -> dict:
        return {"schema": self.schema, "agent": self.agent,
                "substitution": {k: to_text(v) for k, v in sorted(self.substitution.items())},
                "worlds": list(self.worlds)}


@dataclass
class SweepReport:
    instances: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.counterexamples

    def merge(self, other: "SweepReport") -> "SweepReport":
        return SweepReport(self.instances + other.instances,
                           self.counterexamples + other.counterexamples)

    def to_json(self) -> dict:
        return {"instances": self.instances,
                "counterexamples": [c.to_json() for c in self.counterexamples]}


def distinct_extensions(m, formulas) -> list:
    """``[(mask, representative formula)]`` with one entry per distinct extension."""
    ev = Evaluator(m)
    seen: dict = {}
    for f in formulas:
        seen.setdefault(ev.mask(f), f)
    return list(seen.items())


def successor_mask(m) -> np.ndarray:
    return np.array([bool(m.g_successors(w)) for w in m.worlds])


def sweep_model(m, formulas, schemas=SCHEMA_IDS, limit: int = 20) -> SweepReport:
    """Check every instance of ``schemas`` over ``formulas`` at every world of ``m``.

    A19 is only required at worlds that have a G-successor.  At most
    ``limit`` counterexamples are recorded per schema.
    """
    exts = distinct_extensions(m, formulas)
    nw = len(m.worlds)
    table = np.array([[bool(mask >> k & 1) for k in range(nw)] for mask, _ in exts],
                     dtype=bool).reshape(len(exts), nw)
    reps = [f for _, f in exts]
    where = successor_mask(m)
    report = SweepReport()
    for sid in schemas:
        found = 0
        for agent, template in schema_templates(sid, m.agents):
            names = metas_of(template)
            combos = np.array(list(itertools.product(range(len(exts)), repeat=len(names))),
                              dtype=np.intp).reshape(-1, len(names))
            env = {name: table[combos[:, k]] for k, name in enumerate(names)}
            # instances counted per formula tuple, not per extension tuple
            report.instances += len(formulas) ** len(names)
            truth = batch_eval(m, template, env, len(combos))
            bad = ~truth
            if sid == "A19":
                bad &= where
            for r in np.flatnonzero(bad.any(axis=1)):
                if found >= limit:
                    break
                found += 1
                subst = {name: reps[combos[r, k]] for k, name in enumerate(names)}
                ws = tuple(m.worlds[k] for k in np.flatnonzero(bad[r]))
                report.counterexamples.append(Counterexample(sid, agent, subst, ws))
    return report


def literal_check(m, sid: str, agent, template, subst: dict) -> tuple:
    """Worlds where the literal instance fails, via the ordinary evaluator."""
    f = instantiate(template, subst)
    ev = Evaluator(m)
    bad = m.full_mask & ~ev.mask(f)
    if sid == "A19":
        bad &= m.mask(w for w in m.worlds if m.g_successors(w))
    return tuple(w for k, w in enumerate(m.worlds) if bad >> k & 1)
