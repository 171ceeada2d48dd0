"""Contrary-to-duty diagnostics for utilitarian models.

At a moment where no choice of agent ``i`` strictly dominates another, the
dominance obligation ``O{i} f`` coincides with ``box f``, so no obligation of
``i`` there can be violated.  :func:`collapse` detects this;
:func:`deliberative_possible` produces an extension witnessing a violable
obligation when there is one.

:func:`fig1_census` sweeps the binary utility assignments of a two-agent,
two-choice moment and sorts the ones admitting a joint violable obligation
into the three quantifier patterns of the standard picture:

====== ======= ======= ======= =======
 name   TL      TR      BL      BR
====== ======= ======= ======= =======
 (i)    all 1   all 1   all 1   some 0
 (ii)   some 1  all 0   all 0   all 0
 (iii)  all 1   mixed   mixed   all 0
====== ======= ======= ======= =======

TL is the intersection of both agents' optimal choices, TR and BL the two
half-optimal intersections, BR the intersection of the non-optimal ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .axioms import _ought_util_batch
from .dominance import dominance_table
from .gen import grid_util_model
from .model import UtilModel
from .semantics import ought_util

ORACLE_LIMIT = 10


def _subsets(block: list):
    for r in range(len(block) + 1):
        for combo in itertools.combinations(block, r):
            yield frozenset(combo)


def collapse_oracle(m: UtilModel, mom: int, i: int) -> bool:
    """Brute force: for every ``E`` within the moment, ``O{i}`` agrees with ``box``."""
    block = sorted(m.moments[mom], key=m.index.get)
    full = frozenset(block)
    return all(ought_util(m, mom, i, e) == (e == full) for e in _subsets(block))


def collapse(m: UtilModel, mom: int, i: int, oracle: bool | None = None) -> bool:
    """No pair of agent ``i``'s cells at ``mom`` is in strict dominance.

    On moments of at most ``ORACLE_LIMIT`` worlds the answer is cross-checked
    against :func:`collapse_oracle` unless ``oracle=False``.
    """
    table = dominance_table(m, mom, i)
    verdict = not table.strict.any()
    if oracle is None:
        oracle = len(m.moments[mom]) <= ORACLE_LIMIT
    if oracle and collapse_oracle(m, mom, i) != verdict:
        raise AssertionError(f"collapse characterization failed at moment {mom}, agent {i}")
    return verdict


def deliberative_possible(m: UtilModel, mom: int, i: int):
    """An extension ``E`` making ``O{i}`` true and ``box`` false at ``mom``, or ``None``.

    First candidate: the union of the undominated cells.  If that does not
    verify, every complement of a single dominated cell is tried.
    """
    table = dominance_table(m, mom, i)
    dominated = table.strictly_dominated()
    if not dominated:
        return None
    block = frozenset(m.moments[mom])
    candidates = [frozenset().union(*(table.cells[k] for k in table.maximal()))]
    candidates += [block - table.cells[v] for v in dominated]
    for e in candidates:
        if e != block and ought_util(m, mom, i, e):
            return e
    raise AssertionError(f"no witness found at moment {mom}, agent {i} despite dominance")


def profile(m: UtilModel, mom: int) -> str:
    values = {m.util[w] for w in m.moments[mom]}
    if values == {0}:
        return "all-0"
    if values == {1}:
        return "all-1"
    if len(values) == 1:
        return "constant"
    return "mixed"


@dataclass(frozen=True)
class MomentDiagnosis:
    moment: int
    collapse: dict
    profile: str
    witnesses: dict

    def to_json(self) -> dict:
        return {"moment": self.moment, "profile": self.profile,
                "collapse": {str(i): c for i, c in self.collapse.items()},
                "witnesses": {str(i): (sorted(e) if e is not None else None)
                              for i, e in self.witnesses.items()}}


def diagnose(m: UtilModel, mom: int) -> MomentDiagnosis:
    agents = range(1, m.agents + 1)
    flags = {i: collapse(m, mom, i) for i in agents}
    wits = {i: deliberative_possible(m, mom, i) for i in agents}
    return MomentDiagnosis(mom, flags, profile(m, mom), wits)


def history_witness(m: UtilModel):
    """A G edge ``(w, v)`` with ``util(w) != util(v)``, or ``None``."""
    for w, v in sorted(m.g_edges, key=lambda e: (m.index[e[0]], m.index[e[1]])):
        if m.util[w] != m.util[v]:
            return (w, v)
    return None


def history_constant(m: UtilModel) -> bool:
    return history_witness(m) is None


@dataclass
class CollapseReport:
    moments: list
    history_constant: bool
    witness_edge: tuple | None

    def to_json(self) -> dict:
        return {"moments": [d.to_json() for d in self.moments],
                "history_constant": self.history_constant,
                "witness_edge": list(self.witness_edge) if self.witness_edge else None}


def future_collapse_report(m: UtilModel) -> CollapseReport:
    edge = history_witness(m)
    return CollapseReport([diagnose(m, k) for k in range(len(m.moments))], edge is None, edge)


# -- the 2x2 census --------------------------------------------------------------

PATTERNS = {
    "i": ("all1", "all1", "all1", "some0"),
    "ii": ("some1", "all0", "all0", "all0"),
    "iii": ("all1", "mixed", "mixed", "all0"),
}


def _fits(kind: str, values) -> bool:
    values = set(values)
    return {"all1": values == {1}, "all0": values == {0}, "some1": 1 in values,
            "some0": 0 in values, "mixed": values == {0, 1}}[kind]


# The eight relabelings of the 2x2 grid as permutations of (TL, TR, BL, BR):
# swap rows, swap columns, and swap agents (transpose).
_SYMMETRIES = []
for _rows, _cols, _tr in itertools.product((False, True), repeat=3):
    perm = []
    for q in range(4):
        r, c = divmod(q, 2)
        if _tr:
            r, c = c, r
        perm.append(2 * (r ^ _rows) + (c ^ _cols))
    _SYMMETRIES.append((tuple(perm), _rows, _cols, _tr))


def classify(m: UtilModel) -> str | None:
    """Caption pattern of a :func:`grid_util_model` moment, or ``None``.

    The grid is turned so the top row and left column are optimal
    (undominated) choices before the quadrants are compared.
    """
    groups = [[w for w in m.worlds if w[0] == q] for q in "abcd"]
    vals = [[m.util[w] for w in g] for g in groups]
    opt1 = set(dominance_table(m, 0, 1).maximal())   # rows
    opt2 = set(dominance_table(m, 0, 2).maximal())   # columns
    for name, pattern in PATTERNS.items():
        for perm, rows, cols, tr in _SYMMETRIES:
            # the oriented top-left quadrant is agent 1's cell ``rows`` met
            # with agent 2's cell ``cols`` whether or not the grid is transposed
            if int(rows) not in opt1 or int(cols) not in opt2:
                continue
            if all(_fits(kind, vals[perm[q]]) for q, kind in enumerate(pattern)):
                return name
    return None


@dataclass(frozen=True)
class CensusEntry:
    utils: tuple
    satisfiable: bool
    pattern: str | None
    witness: frozenset | None


@dataclass
class Census:
    worlds_per_cell: int
    entries: list = field(default_factory=list)

    @property
    def satisfiable(self) -> list:
        return [e for e in self.entries if e.satisfiable]

    def patterns(self) -> set:
        return {e.pattern for e in self.satisfiable if e.pattern}

    def unclassified(self) -> list:
        return [e for e in self.satisfiable if e.pattern is None]

    def reproduces_caption(self) -> bool:
        return self.patterns() == set(PATTERNS) and not self.unclassified()

    def to_json(self) -> dict:
        return {"worlds_per_cell": self.worlds_per_cell,
                "assignments": len(self.entries),
                "satisfiable": len(self.satisfiable),
                "patterns": sorted(self.patterns()),
                "entries": [{"utils": list(e.utils), "pattern": e.pattern,
                             "witness": sorted(e.witness)}
                            for e in self.satisfiable]}


def joint_witness(m: UtilModel):
    """Some ``E`` with ``O{1}``, ``O{2}`` true and ``box`` false on moment 0, or ``None``."""
    names = list(m.worlds)
    rows = np.array(list(itertools.product((False, True), repeat=len(names))), dtype=bool)
    rows = rows[~rows.all(axis=1)]
    ok = _ought_util_batch(m, 1, rows)[:, 0] & _ought_util_batch(m, 2, rows)[:, 0]
    hits = np.flatnonzero(ok)
    if not len(hits):
        return None
    return frozenset(w for w, bit in zip(names, rows[hits[0]]) if bit)


def fig1_census(worlds_per_cell: int = 1) -> Census:
    """All binary assignments on the 2x2 moment with ``worlds_per_cell`` worlds per quadrant."""
    census = Census(worlds_per_cell)
    for utils in itertools.product((0, 1), repeat=4 * worlds_per_cell):
        m = grid_util_model(utils, worlds_per_cell)
        e = joint_witness(m)
        census.entries.append(
            CensusEntry(utils, e is not None, classify(m) if e is not None else None, e))
    return census
