"""Frame-condition validation with witnesses.

Condition ids follow the usual labels: C1-C3 (choice), T4-T7 (time), D8-D11
(obligation), plus ``TRANS`` (transitivity of G), ``SER`` (seriality of G)
and ``L8-1`` .. ``L8-5`` for the structural lemma checked by
:func:`check_lemma8`.

Finite frames cannot be serial, transitive and irreflexive across moments at
once, so by default a missing G-successor is only a warning.  Pass
``horizon_mode="strict"`` to make it a violation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .dominance import state_of
from .model import NeutralModel, UtilModel

CONDITIONS = ("C1", "C2", "C3", "T4", "T5", "T6", "T7", "TRANS", "SER",
              "D8", "D9", "D10", "D11", "L8-1", "L8-2", "L8-3", "L8-4", "L8-5")
_ORDER = {c: k for k, c in enumerate(CONDITIONS)}


@dataclass(frozen=True)
class Violation:
    condition: str
    witnesses: tuple
    message: str = ""

    def sort_key(self):
        return (_ORDER.get(self.condition, len(_ORDER)), tuple(map(str, self.witnesses)))

    def to_json(self) -> dict:
        return {"condition": self.condition, "witnesses": list(self.witnesses),
                "message": self.message}


@dataclass
class CheckReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        self.violations.sort(key=Violation.sort_key)
        self.warnings.sort(key=Violation.sort_key)

    @property
    def clean(self) -> bool:
        return not self.violations

    def conditions(self) -> set:
        return {v.condition for v in self.violations}

    def exit_code(self) -> int:
        if self.violations:
            return 2
        return 1 if self.warnings else 0

    def merge(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(self.violations + other.violations,
                           self.warnings + other.warnings)

    def to_json(self) -> list:
        return ([dict(v.to_json(), severity="violation") for v in self.violations]
                + [dict(v.to_json(), severity="warning") for v in self.warnings])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _sorted(m, ws):
    return sorted(ws, key=m.index.get)


def _check_choice(m, out):
    agents = range(1, m.agents + 1)
    # C1: agent cells never cross moments, and are filed under their moment
    for (mom, i), cells in sorted(m.choice.items()):
        for cell in cells:
            ws = _sorted(m, cell)
            w = ws[0]
            for v in ws[1:]:
                if m.moment_of(v) != m.moment_of(w):
                    out.append(Violation("C1", (i, w, v),
                                         f"[{i}] relates {w} and {v} across moments"))
            if all(m.moment_of(v) == m.moment_of(w) for v in ws) and m.moment_of(w) != mom:
                out.append(Violation("C1", (i, w),
                                     f"cell of agent {i} at {w} is filed under moment {mom}"))
    # C2: every combination of cells available at a moment intersects
    for mom, block in enumerate(m.moments):
        available = []
        for i in agents:
            reps = {}
            for u in _sorted(m, block):
                reps.setdefault(m.cell_of(i, u), u)
            available.append(list(reps.items()))
        for combo in itertools.product(*available):
            inter = set(m.choice_cell(1, combo[0][1]))
            for i, (_, u) in enumerate(combo[1:], start=2):
                inter &= m.choice_cell(i, u)
            if not inter:
                reps = tuple(u for _, u in combo)
                out.append(Violation("C2", reps,
                                     f"cells of {reps} (one per agent) do not intersect"))
    # C3: grand cells sit inside every agent's cell
    for w in m.worlds:
        for v in _sorted(m, m.grand_cell(w)):
            for i in agents:
                if v not in m.choice_cell(i, w):
                    out.append(Violation("C3", (w, v, i),
                                         f"[Ag] relates {w},{v} but [{i}] does not"))


def _check_time(m, out, warnings, strict_serial):
    succ, pred = m.g_successors, m.h_predecessors
    for w in m.worlds:
        for u, v in itertools.combinations(_sorted(m, succ(w)), 2):
            if v not in succ(u) and u not in succ(v):
                out.append(Violation("T4", (w, u, v),
                                     f"future of {w} branches into {u} and {v}"))
        for u, v in itertools.combinations(_sorted(m, pred(w)), 2):
            if v not in pred(u) and u not in pred(v):
                out.append(Violation("T5", (w, u, v),
                                     f"past of {w} branches into {u} and {v}"))
        for u in _sorted(m, succ(w)):
            for v in _sorted(m, m.moments[m.moment_of(u)]):
                if not any(v in succ(z) for z in m.grand_cell(w)):
                    out.append(Violation(
                        "T6", (w, u, v),
                        f"{w} G {u} and {u},{v} share a moment, but no [Ag]-alternative "
                        f"of {w} reaches {v}"))
        for u in _sorted(m, m.moments[m.moment_of(w)]):
            if u in succ(w):
                out.append(Violation("T7", (w, u), f"G edge {w}->{u} inside a moment"))
        for u in _sorted(m, succ(w)):
            for z in _sorted(m, succ(u)):
                if z not in succ(w):
                    out.append(Violation("TRANS", (w, u, z),
                                         f"{w} G {u} G {z} but not {w} G {z}"))
    for mom, block in enumerate(m.moments):
        stuck = [w for w in _sorted(m, block) if not succ(w)]
        if stuck:
            v = Violation("SER", tuple(stuck), f"moment {mom} has worlds without a G-successor")
            (out if strict_serial else warnings).append(v)


def _check_deontic(m: NeutralModel, out):
    # moment-constant storage makes every world of a moment see the same
    # targets; then one representative per moment suffices for D8/D9/D11
    if m.ought_edges is None:
        sources = [_sorted(m, b)[0] for b in m.moments]
    else:
        sources = list(m.worlds)
    for i in range(1, m.agents + 1):
        for w in sources:
            target = m.ideal_at(w, i)
            here = m.moments[m.moment_of(w)]
            for v in _sorted(m, target - here):
                out.append(Violation("D8", (i, w, v), f"ideal world {v} of {w} lies outside its moment"))
            if not any(m.choice_cell(i, v) <= target for v in here):
                out.append(Violation("D9", (i, w), f"no cell of agent {i} is ideal from {w}"))
            for v in _sorted(m, target):
                cell = m.choice_cell(i, v)
                if not (cell & here and cell <= target):
                    out.append(Violation("D11", (i, w, v),
                                         f"ideal world {v} of {w} does not extend to an ideal cell"))
        if m.ought_edges is not None:
            for block in m.moments:
                ws = _sorted(m, block)
                for v, u in itertools.permutations(ws, 2):
                    for z in _sorted(m, m.ideal_at(u, i) - m.ideal_at(v, i)):
                        out.append(Violation("D10", (i, v, u, z),
                                             f"{z} is ideal from {u} but not from {v}"))


def check_frame(m, horizon_mode: str = "finite") -> CheckReport:
    """Check every frame condition on ``m``; violations are data, never raised."""
    if horizon_mode not in ("finite", "strict"):
        raise ValueError("horizon_mode must be 'finite' or 'strict'")
    out, warnings = [], []
    _check_choice(m, out)
    _check_time(m, out, warnings, horizon_mode == "strict")
    if isinstance(m, NeutralModel):
        _check_deontic(m, out)
    return CheckReport(out, warnings)


def check_lemma8(m: NeutralModel) -> CheckReport:
    """Class stability of moments, cells, states and ideal sets; ideal sets
    either contain or miss each cell entirely."""
    out = []
    agents = range(1, m.agents + 1)
    for w in m.worlds:
        here = m.moments[m.moment_of(w)]
        for v in _sorted(m, here):
            if m.moments[m.moment_of(v)] != here:
                out.append(Violation("L8-1", (w, v), f"moment of {v} differs from moment of {w}"))
        for i in agents:
            cell = m.choice_cell(i, w)
            for v in _sorted(m, cell):
                if m.choice_cell(i, v) != cell:
                    out.append(Violation("L8-2", (i, w, v), f"[{i}]-class of {v} differs"))
            st = state_of(m, i, w)
            for v in _sorted(m, st):
                if state_of(m, i, v) != st:
                    out.append(Violation("L8-3", (i, w, v), f"state of {v} differs for agent {i}"))
            target = m.ideal_at(w, i)
            for v in _sorted(m, here):
                if m.ideal_at(v, i) != target:
                    out.append(Violation("L8-4", (i, w, v),
                                         f"ideal sets of {w} and {v} differ for agent {i}"))
            seen = set()
            for v in _sorted(m, here):
                cell = m.choice_cell(i, v)
                if cell in seen:
                    continue
                seen.add(cell)
                if cell & target and not cell <= target:
                    inside = _sorted(m, cell & target)[0]
                    outside = _sorted(m, cell - target)[0]
                    out.append(Violation("L8-5", (i, w, inside, outside),
                                         f"ideal set of {w} splits the cell of {inside} and {outside}"))
    return CheckReport(out, [])


# -- self audit --------------------------------------------------------------
# Each witness is re-verified straight from relation pairs, not through the
# checking code above.

def relations(m) -> dict:
    """Every accessibility relation of ``m`` as a set of world pairs."""
    rel = {"box": {(a, b) for block in m.moments for a in block for b in block},
           "grand": {(a, b) for cells in m.grand.values() for c in cells for a in c for b in c},
           "G": set(m.g_edges)}
    for i in range(1, m.agents + 1):
        rel[("stit", i)] = {(a, b) for (mom, k), cells in m.choice.items() if k == i
                            for c in cells for a in c for b in c}
        if isinstance(m, NeutralModel):
            rel[("ought", i)] = {(a, b) for a in m.worlds for b in m.ideal_at(a, i)}
    return rel


def witness_holds(m, v: Violation) -> bool:
    """True when ``v``'s witnesses really do falsify its condition."""
    r = relations(m)
    box, G = r["box"], r["G"]
    W = m.worlds
    c, ws = v.condition, v.witnesses
    if c == "C1":
        if len(ws) == 2:
            i, w = ws
            return m.choice_cell(i, w) not in m.choice.get((m.moment_of(w), i), ())
        i, w, u = ws
        return (w, u) in r[("stit", i)] and (w, u) not in box
    if c == "C2":
        if not all((a, b) in box for a in ws for b in ws):
            return False
        common = set(W)
        for i, u in enumerate(ws, start=1):
            common &= {b for a, b in r[("stit", i)] if a == u}
        return not common
    if c == "C3":
        w, u, i = ws
        return (w, u) in r["grand"] and (w, u) not in r[("stit", i)]
    if c == "T4":
        w, u, x = ws
        return (w, u) in G and (w, x) in G and u != x and (u, x) not in G and (x, u) not in G
    if c == "T5":
        w, u, x = ws
        return (u, w) in G and (x, w) in G and u != x and (x, u) not in G and (u, x) not in G
    if c == "T6":
        w, u, x = ws
        return (w, u) in G and (u, x) in box and not any(
            (w, z) in r["grand"] and (z, x) in G for z in W)
    if c == "T7":
        w, u = ws
        return (w, u) in box and (w, u) in G
    if c == "TRANS":
        a, b, z = ws
        return (a, b) in G and (b, z) in G and (a, z) not in G
    if c == "SER":
        return all(not any((w, u) in G for u in W) for w in ws)
    if c == "D8":
        i, w, x = ws
        return (w, x) in r[("ought", i)] and (w, x) not in box
    if c == "D9":
        i, w = ws
        stit, ought = r[("stit", i)], r[("ought", i)]
        return not any((w, x) in box and all((w, u) in ought for u in W if (x, u) in stit)
                       for x in W)
    if c == "D10":
        i, x, u, z = ws
        ought = r[("ought", i)]
        return (x, u) in box and (u, z) in ought and (x, z) not in ought
    if c == "D11":
        i, w, x = ws
        stit, ought = r[("stit", i)], r[("ought", i)]
        return (w, x) in ought and not any(
            (w, u) in box and (u, x) in stit and all((w, z) in ought for z in W if (u, z) in stit)
            for u in W)
    if c == "L8-5":
        i, w, a, b = ws
        ought = r[("ought", i)]
        return (a, b) in r[("stit", i)] and (w, a) in ought and (w, b) not in ought \
            and (w, a) in box
    if c == "L8-4":
        i, w, x = ws
        ought = r[("ought", i)]
        return (w, x) in box and {b for a, b in ought if a == w} != {b for a, b in ought if a == x}
    raise ValueError(f"no audit rule for {c}")


def audit(m, report: CheckReport) -> list:
    """Entries of ``report`` whose witnesses fail to re-verify (should be empty)."""
    return [v for v in report.violations + report.warnings
            if v.condition not in ("L8-1", "L8-2", "L8-3") and not witness_holds(m, v)]
