"""Neutral-to-utilitarian transformation and its certification.

:func:`derive_util` gives utility 1 to the worlds that are ideal for every
agent at their moment and 0 elsewhere.  :func:`check_util_criteria` checks a
utility map against the three ordering requirements a transformation must
meet, independently of how the map was produced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .dominance import states
from .framecheck import check_frame
from .model import ModelError, NeutralModel, UtilModel
from .semantics import Evaluator
from .syntax import Formula, to_text


@dataclass(frozen=True)
class CriterionViolation:
    criterion: int
    agent: int | None
    w: str
    v: str
    z: str

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "agent": self.agent,
                "witness": [self.w, self.v, self.z]}


@dataclass
class CriteriaReport:
    violations: dict = field(default_factory=lambda: {1: [], 2: [], 3: []})

    @property
    def clean(self) -> bool:
        return not any(self.violations.values())

    def count(self, criterion: int | None = None) -> int:
        if criterion is None:
            return sum(len(v) for v in self.violations.values())
        return len(self.violations[criterion])

    def to_json(self) -> dict:
        return {str(k): [x.to_json() for x in v] for k, v in self.violations.items()}


def grand_ideal(m: NeutralModel, mom: int) -> frozenset:
    """Worlds of ``mom`` ideal for every agent at once."""
    out = frozenset(m.moments[mom])
    for i in range(1, m.agents + 1):
        out &= m.ideal_set(mom, i)
    return out


def derive_util(m: NeutralModel, check: bool = True) -> UtilModel:
    if not isinstance(m, NeutralModel):
        raise TypeError("derive_util needs a NeutralModel")
    if check:
        report = check_frame(m)
        if report.violations:
            raise ModelError(f"invalid input frame: {sorted(report.conditions())}")
    best = frozenset().union(*(grand_ideal(m, k) for k in range(len(m.moments))))
    util = {w: int(w in best) for w in m.worlds}
    return UtilModel(agents=m.agents, worlds=m.worlds, moments=m.moments, choice=m.choice,
                     grand=m.grand, g_edges=m.g_edges, valuation=m.valuation, util=util)


def check_util_criteria(n: NeutralModel, u: UtilModel) -> CriteriaReport:
    """Exhaustive check of the three ordering criteria.

    Criteria 1 and 3 compare worlds inside one state of agent ``i``; criterion
    2 compares worlds across the whole moment.  Each quantifier over ``w``
    ranges over whole states or moments, so one representative ``w`` (the
    first world of the block) is reported per block.
    """
    if n.skeleton() != u.skeleton():
        raise ModelError("models do not share a frame skeleton")
    report = CriteriaReport()
    util = u.util
    order = n.index.get
    for mom, block in enumerate(n.moments):
        best = grand_ideal(n, mom)
        ws = sorted(block, key=order)
        w = ws[0]
        for v in ws:
            if v in best:
                continue
            for z in ws:
                if z in best and not util[v] < util[z]:
                    report.violations[2].append(CriterionViolation(2, None, w, v, z))
        for i in range(1, n.agents + 1):
            ideal = n.ideal_set(mom, i)
            for s in states(n, i, mom).blocks:
                s_ws = sorted(s, key=order)
                rep = s_ws[0]
                good = [x for x in s_ws if x in ideal]
                bad = [x for x in s_ws if x not in ideal]
                for v in bad:
                    for z in good:
                        if util[v] > util[z]:
                            report.violations[1].append(CriterionViolation(1, i, rep, v, z))
                for v in good:
                    for z in good:
                        if util[v] != util[z]:
                            report.violations[3].append(CriterionViolation(3, i, rep, v, z))
    return report


@dataclass(frozen=True)
class Disagreement:
    formula: Formula
    world: str
    neutral: bool
    utilitarian: bool

    def to_json(self) -> dict:
        return {"formula": to_text(self.formula), "world": self.world,
                "neutral": self.neutral, "utilitarian": self.utilitarian}


@dataclass
class TruthReport:
    formulas: int = 0
    worlds: int = 0
    mismatches: int = 0
    disagreements: list = field(default_factory=list)

    @property
    def agreement(self) -> float:
        total = self.formulas * self.worlds
        return 1.0 if total == 0 else 1.0 - self.mismatches / total

    def to_json(self) -> dict:
        return {"formulas": self.formulas, "worlds": self.worlds,
                "mismatches": self.mismatches,
                "disagreements": [d.to_json() for d in self.disagreements]}


def truth_preservation_test(n: NeutralModel, formulas, u: UtilModel | None = None,
                            limit: int = 100) -> TruthReport:
    """Compare both semantics world by world; at most ``limit`` disagreements are kept."""
    u = derive_util(n) if u is None else u
    en, eu = Evaluator(n), Evaluator(u)
    report = TruthReport(worlds=len(n.worlds))
    for f in formulas:
        report.formulas += 1
        diff = en.mask(f) ^ eu.mask(f)
        report.mismatches += bin(diff).count("1")
        k = 0
        while diff and len(report.disagreements) < limit:
            if diff & 1:
                w = n.worlds[k]
                report.disagreements.append(
                    Disagreement(f, w, bool(en.mask(f) >> k & 1), bool(eu.mask(f) >> k & 1)))
            diff >>= 1
            k += 1
    return report


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
