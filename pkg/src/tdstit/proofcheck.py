"""Checker for Hilbert-style derivations of theorems.

A derivation is a list of lines.  Each line carries a formula and a
justification: an axiom schema (``A0``..``A25``, optionally with an explicit
substitution), modus ponens ``R0``, necessitation ``R1`` for ``box``, ``G``
or ``H``, or the irreflexivity rule ``R2``.

File format (JSON)::

    {"agents": 2,
     "lines": [{"formula": "box p -> ([1] p & O{1} p)", "rule": "A13",
                "subst": {"phi": "p", "i": 1}},
               {"formula": "...", "rule": "R0", "refs": [1, 2]}]}

A bare array of lines is accepted as well.  Line numbers start at 1.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .axioms import SCHEMA_IDS, instantiate, is_meta, schema_templates
from .syntax import (And, Agent, Bot, Box, G, Grand, H, Not, Ought, Top, Var, Formula,
                     ParseError, agents_used, name_formula, parse, to_text, variables)

MAX_ATOMS = 16


class DerivationError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class TooManyAtoms(ValueError):
    pass


@dataclass(frozen=True)
class Line:
    formula: Formula
    rule: str
    refs: tuple = ()
    subst: dict | None = None
    p: str | None = None
    modality: str | None = None


@dataclass
class Derivation:
    lines: list
    agents: int = 1
    source: dict = field(default_factory=dict, repr=False)


# -- A0 -------------------------------------------------------------------------

def skeleton_atoms(f: Formula) -> list:
    """Maximal non-boolean subformulas, in first-occurrence order."""
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, And):
            stack.extend((g.right, g.left))
        elif isinstance(g, (Top, Bot)):
            continue
        elif g not in out:
            out.append(g)
    return out


def is_tautology(f: Formula) -> bool:
    """Truth-table check of the boolean skeleton of ``f``.

    All ``2**k`` rows are evaluated at once: atom ``j`` is an integer whose
    bit ``r`` is its value in row ``r``.
    """
    atoms = skeleton_atoms(f)
    k = len(atoms)
    if k > MAX_ATOMS:
        raise TooManyAtoms(f"too many atoms ({k} > {MAX_ATOMS})")
    rows = 1 << k
    full = (1 << rows) - 1
    col = {}
    for j, a in enumerate(atoms):
        block = (1 << (1 << j)) - 1          # 2**j ones
        pattern = 0
        for start in range(1 << j, rows, 1 << (j + 1)):
            pattern |= block << start
        col[a] = pattern

    def ev(g):
        if isinstance(g, Not):
            return full & ~ev(g.arg)
        if isinstance(g, And):
            return ev(g.left) & ev(g.right)
        if isinstance(g, Top):
            return full
        if isinstance(g, Bot):
            return 0
        return col[g]

    return ev(f) == full


# -- matching -------------------------------------------------------------------

def _match(t: Formula, f: Formula, subst: dict) -> bool:
    if is_meta(t):
        name = t.name[1:]
        bound = subst.get(name)
        if bound is None:
            subst[name] = f
            return True
        return bound == f
    if type(t) is not type(f):
        return False
    if isinstance(t, (Var, Top, Bot)):
        return t == f
    if isinstance(t, And):
        return _match(t.left, f.left, subst) and _match(t.right, f.right, subst)
    if isinstance(t, (Agent, Ought)) and t.agent != f.agent:
        return False
    return _match(t.arg, f.arg, subst)


def match_axiom(f: Formula, schema: str, agents: int):
    """Substitution making ``f`` an instance of ``schema``, or ``None``.

    For agent-indexed schemas the substitution also binds ``"i"``.  A0 is
    decided by truth tables and yields an empty substitution.
    """
    if schema == "A0":
        try:
            return {} if is_tautology(f) else None
        except TooManyAtoms:
            return None
    for agent, template in schema_templates(schema, agents):
        subst: dict = {}
        if _match(template, f, subst):
            if agent is not None:
                subst["i"] = agent
            return subst
    return None


# -- checking -------------------------------------------------------------------

NECESSITATION = {"box": Box, "G": G, "H": H}
_UNLICENSED = {Agent: "[i]", Grand: "[Ag]", Ought: "O{i}"}


def _antecedent_of(f: Formula):
    """``(a, b)`` when ``f`` is the desugared implication ``a -> b``."""
    if isinstance(f, Not) and isinstance(f.arg, And) and isinstance(f.arg.right, Not):
        return f.arg.left, f.arg.right.arg
    return None


def _check_axiom(k: int, line: Line, agents: int):
    sid = line.rule
    if sid == "A0":
        try:
            ok = is_tautology(line.formula)
        except TooManyAtoms as e:
            raise DerivationError(k, f"A0: {e}") from None
        if not ok:
            raise DerivationError(k, "A0: not a propositional tautology")
        return
    if line.subst is None:
        if match_axiom(line.formula, sid, agents) is None:
            raise DerivationError(k, f"{sid}: formula does not match the schema")
        return
    subst = dict(line.subst)
    agent = subst.pop("i", None)
    for a, template in schema_templates(sid, agents):
        if a is not None and agent is not None and a != agent:
            continue
        try:
            inst = instantiate(template, subst)
        except KeyError as e:
            raise DerivationError(k, f"{sid}: substitution misses {e.args[0]}") from None
        if inst == line.formula:
            return
    raise DerivationError(k, f"{sid}: formula is not the schema instance under the given substitution")


def _premise(k: int, ref, lines) -> Formula:
    if not isinstance(ref, int) or not 1 <= ref < k:
        raise DerivationError(k, f"dangling reference {ref!r}")
    return lines[ref - 1].formula


def check_derivation(d: Derivation, agents: int | None = None) -> Formula:
    """Validate every line; return the last line's formula (the theorem).

    Raises :class:`DerivationError` naming the first bad line.
    """
    n = d.agents if agents is None else agents
    if not d.lines:
        raise DerivationError(0, "empty derivation")
    for k, line in enumerate(d.lines, 1):
        bad = [i for i in agents_used(line.formula) if not 1 <= i <= n]
        if bad:
            raise DerivationError(k, f"agent index {bad[0]} out of range 1..{n}")
        rule = line.rule
        if rule in SCHEMA_IDS:
            _check_axiom(k, line, n)
        elif rule == "R0":
            if len(line.refs) != 2:
                raise DerivationError(k, "R0 needs two references")
            a, b = (_premise(k, r, d.lines) for r in line.refs)
            if not any(_antecedent_of(imp_) == (prem, line.formula)
                       for imp_, prem in ((a, b), (b, a))):
                raise DerivationError(k, "R0: premises are not psi and psi -> phi with phi this line")
        elif rule == "R1":
            if len(line.refs) != 1:
                raise DerivationError(k, "R1 needs one reference")
            prem = _premise(k, line.refs[0], d.lines)
            f = line.formula
            if line.modality is not None and line.modality not in NECESSITATION:
                raise DerivationError(
                    k, f"R1: necessitation restricted to box, G, H (got {line.modality})")
            for cls, label in _UNLICENSED.items():
                if isinstance(f, cls) and f.arg == prem:
                    raise DerivationError(
                        k, f"R1: necessitation restricted to box, G, H (got {label})")
            allowed = ([NECESSITATION[line.modality]] if line.modality
                       else list(NECESSITATION.values()))
            if not any(isinstance(f, cls) and f.arg == prem for cls in allowed):
                raise DerivationError(k, "R1: line is not the premise under box, G or H")
        elif rule == "R2":
            if len(line.refs) != 1:
                raise DerivationError(k, "R2 needs one reference")
            prem = _premise(k, line.refs[0], d.lines)
            parts = _antecedent_of(prem)
            p = line.p
            if p is None and parts is not None:
                names = variables(parts[0])
                p = next(iter(names)) if len(names) == 1 else None
            if p is None or parts is None or parts != (name_formula(p), line.formula):
                raise DerivationError(k, "R2: premise is not name(p) -> phi with phi this line")
            if p in variables(line.formula):
                raise DerivationError(k, f"R2 side condition, {p} occurs in φ")
        else:
            raise DerivationError(k, f"unknown rule {rule!r}")
    return d.lines[-1].formula


def uses_rule(d: Derivation, rule: str) -> bool:
    return any(line.rule == rule for line in d.lines)


# -- loading ---------------------------------------------------------------------

class DerivationFormatError(ValueError):
    pass


def derivation_from_json(data, agents: int | None = None) -> Derivation:
    if isinstance(data, dict):
        unknown = set(data) - {"agents", "lines", "theorem", "note"}
        if unknown:
            raise DerivationFormatError(f"unknown keys {sorted(unknown)}")
        n = data.get("agents") if agents is None else agents
        raw = data.get("lines")
    else:
        n, raw = agents, data
    if not isinstance(raw, list):
        raise DerivationFormatError("derivation must be a list of lines")
    if n is None:
        n = 1
        for entry in raw:
            text = entry.get("formula", "") if isinstance(entry, dict) else ""
            for tok in re.findall(r"[\[{<](?:d)?(\d+)[\]}>]", text):
                n = max(n, int(tok))
    lines = []
    for k, entry in enumerate(raw, 1):
        if not isinstance(entry, dict) or "formula" not in entry or "rule" not in entry:
            raise DerivationFormatError(f"line {k}: needs 'formula' and 'rule'")
        extra = set(entry) - {"formula", "rule", "refs", "subst", "p", "modality"}
        if extra:
            raise DerivationFormatError(f"line {k}: unknown keys {sorted(extra)}")
        try:
            f = parse(entry["formula"], n)
            subst = None
            if entry.get("subst") is not None:
                subst = {}
                for key, val in entry["subst"].items():
                    subst[key] = int(val) if key == "i" else parse(str(val), n)
        except ParseError as e:
            raise DerivationFormatError(f"line {k}: {e}") from None
        lines.append(Line(f, str(entry["rule"]), tuple(entry.get("refs", ())), subst,
                          entry.get("p"), entry.get("modality")))
    return Derivation(lines, n, data if isinstance(data, dict) else {"lines": data})


def load_derivation(path, agents: int | None = None) -> Derivation:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DerivationFormatError(f"{path}: {e}") from None
    return derivation_from_json(data, agents)


def bundled_derivations() -> dict:
    """Name -> path of the derivation files shipped with the package."""
    folder = Path(__file__).parent / "data" / "derivations"
    return {p.stem: p for p in sorted(folder.glob("*.json"))}


def theorem_text(d: Derivation) -> str:
    return to_text(d.lines[-1].formula)
