"""Command line entry point: ``tds <command> ...``.

Exit codes: 0 clean, 1 warnings only, 2 violations / counterexamples /
rejected derivation, 64 usage error, 65 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .axioms import SCHEMA_IDS, sweep_model
from .ctd import fig1_census, future_collapse_report
from .dominance import dominance_table
from .framecheck import check_frame, check_lemma8
from .gen import MUTATION_TARGETS, GenParams, MutationError, gen_model, mutate, random_util
from .model import ModelError, ModelFormatError, NeutralModel, UtilModel, dump_model, load_model
from .proofcheck import (DerivationError, DerivationFormatError, check_derivation,
                         load_derivation, uses_rule)
from .semantics import evaluator
from .syntax import ParseError, enumerate_formulas, parse, to_text
from .transform import check_util_criteria, derive_util, truth_preservation_test

EX_USAGE = 64
EX_DATAERR = 65


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, payload, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _model(args):
    try:
        return load_model(args.model, close_g=getattr(args, "close_g", False),
                          permissive=getattr(args, "permissive", False))
    except OSError as e:
        raise InputError(f"cannot read {args.model}: {e.strerror}") from None
    except (ModelFormatError, ModelError) as e:
        raise InputError(str(e)) from None


def _formula(text, agents):
    try:
        return parse(text, agents)
    except ParseError as e:
        raise InputError(f"parse error: {e}") from None


def _tree(f):
    from .syntax import And, Agent, Ought, Top, Bot, Var
    if isinstance(f, Var):
        return {"Var": f.name}
    if isinstance(f, (Top, Bot)):
        return type(f).__name__
    if isinstance(f, And):
        return {"And": [_tree(f.left), _tree(f.right)]}
    if isinstance(f, (Agent, Ought)):
        return {type(f).__name__: [f.agent, _tree(f.arg)]}
    return {type(f).__name__: _tree(f.arg)}


# -- commands ------------------------------------------------------------------

def cmd_parse(args):
    f = _formula(args.formula, args.agents)
    _emit(args, {"text": to_text(f), "ast": _tree(f)}, f"{to_text(f)}\n{f!r}")
    return 0


def cmd_eval(args):
    m = _model(args)
    f = _formula(args.formula, m.agents)
    ev = evaluator(m)
    worlds = [args.world] if args.world else list(m.worlds)
    try:
        result = {w: ev.holds(w, f) for w in worlds}
    except KeyError as e:
        raise InputError(f"unknown world {e.args[0]!r}") from None
    _emit(args, {"formula": to_text(f), "truth": result},
          "\n".join(f"{w}\t{'true' if v else 'false'}" for w, v in result.items()))
    return 0


def cmd_validate(args):
    m = _model(args)
    report = check_frame(m, "strict" if args.strict_serial else "finite")
    if isinstance(m, NeutralModel):
        report = report.merge(check_lemma8(m))
    if args.json:
        print(report.dumps())
    else:
        for v in report.violations:
            print(f"violation {v.condition} {' '.join(map(str, v.witnesses))}: {v.message}")
        for v in report.warnings:
            print(f"warning {v.condition} {' '.join(map(str, v.witnesses))}: {v.message}")
        print("clean" if report.clean else
              f"{len(report.violations)} violation(s), {len(report.warnings)} warning(s)")
    return report.exit_code()


def cmd_dominance(args):
    m = _model(args)
    if not isinstance(m, UtilModel):
        raise InputError("dominance needs a model with utilities")
    if not 1 <= args.agent <= m.agents:
        raise UsageError(f"agent {args.agent} out of range 1..{m.agents}")
    out, lines = [], []
    for mom in range(len(m.moments)):
        t = dominance_table(m, mom, args.agent)
        cells = [sorted(c, key=m.index.get) for c in t.cells]
        out.append({"moment": mom, "cells": cells,
                    "weak": t.weak.astype(int).tolist(),
                    "strict": t.strict.astype(int).tolist()})
        lines.append(f"moment {mom}, agent {args.agent}")
        for k, c in enumerate(cells):
            lines.append(f"  cell {k}: {{{', '.join(c)}}}")
        lines.append("  weak (row <= column):")
        lines += ["    " + " ".join(str(int(x)) for x in row) for row in t.weak]
        lines.append("  strict (row < column):")
        lines += ["    " + " ".join(str(int(x)) for x in row) for row in t.strict]
    _emit(args, out, "\n".join(lines))
    return 0


def _vars(m, requested):
    if requested:
        return tuple(requested.split(","))
    names = sorted(m.valuation)[:2]
    return tuple(names) or ("p",)


def cmd_transform(args):
    m = _model(args)
    if not isinstance(m, NeutralModel):
        raise InputError("transform needs a model with ideal sets")
    try:
        u = derive_util(m)
    except ModelError as e:
        print(str(e), file=sys.stderr)
        return 2
    crit = check_util_criteria(m, u)
    formulas = list(enumerate_formulas(args.depth, _vars(m, args.vars), m.agents))
    truth = truth_preservation_test(m, formulas, u)
    if args.output:
        dump_model(u, args.output)
    payload = {"criteria": crit.to_json(), "truth": truth.to_json()}
    text = (f"criteria violations: {crit.count()}\n"
            f"formulas checked: {truth.formulas}, disagreements: {truth.mismatches}")
    if not args.output:
        text += "\n" + dump_model(u)
    _emit(args, payload, text)
    return 0 if crit.clean and truth.mismatches == 0 else 2


def cmd_gen(args):
    try:
        choices = tuple(int(c) for c in args.choices.split(",")) if args.choices \
            else (2,) * args.agents
        p = GenParams(agents=args.agents, depth=args.depth, choices=choices, seed=args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    m = gen_model(p)
    if args.mutate:
        try:
            m = mutate(m, args.mutate, args.seed)
        except MutationError as e:
            print(str(e), file=sys.stderr)
            return 2
    if args.util:
        m = (derive_util(m, check=not args.mutate) if args.util == "derived"
             else random_util(m, args.seed))
    text = dump_model(m, args.output)
    if not args.output:
        print(text)
    return 0


def cmd_axioms(args):
    m = _model(args)
    schemas = tuple(args.schemas.split(",")) if args.schemas else SCHEMA_IDS
    bad = [s for s in schemas if s not in SCHEMA_IDS]
    if bad:
        raise UsageError(f"unknown schema {bad[0]}")
    formulas = list(enumerate_formulas(args.depth, _vars(m, args.vars), m.agents))
    report = sweep_model(m, formulas, schemas)
    lines = [f"instances: {report.instances}", f"counterexamples: {len(report.counterexamples)}"]
    for c in report.counterexamples:
        sub = ", ".join(f"{k} := {to_text(v)}" for k, v in sorted(c.substitution.items()))
        agent = f" i={c.agent}" if c.agent else ""
        lines.append(f"  {c.schema}{agent} [{sub}] fails at {', '.join(c.worlds)}")
    _emit(args, report.to_json(), "\n".join(lines))
    return 0 if report.clean else 2


def cmd_proof(args):
    try:
        d = load_derivation(args.derivation, args.agents)
    except OSError as e:
        raise InputError(f"cannot read {args.derivation}: {e.strerror}") from None
    except DerivationFormatError as e:
        raise InputError(str(e)) from None
    try:
        theorem = check_derivation(d)
    except DerivationError as e:
        _emit(args, {"ok": False, "line": e.line, "error": e.message}, str(e))
        return 2
    _emit(args, {"ok": True, "theorem": to_text(theorem), "uses_A19": uses_rule(d, "A19")},
          f"ok: {to_text(theorem)}")
    return 0


def cmd_ctd(args):
    if args.census:
        c = fig1_census(args.worlds_per_cell)
        lines = [f"assignments: {len(c.entries)}, satisfiable: {len(c.satisfiable)}",
                 f"patterns found: {', '.join(sorted(c.patterns())) or 'none'}",
                 f"unclassified: {len(c.unclassified())}"]
        for e in c.satisfiable:
            lines.append(f"  {''.join(map(str, e.utils))}  {e.pattern or '-'}  "
                         f"E = {{{', '.join(sorted(e.witness))}}}")
        _emit(args, c.to_json(), "\n".join(lines))
        return 0
    if not args.model:
        raise UsageError("ctd needs -m MODEL or --census")
    m = _model(args)
    if isinstance(m, NeutralModel):
        m = derive_util(m)
    report = future_collapse_report(m)
    lines = ["moment  profile   " + "  ".join(f"collapse{i}" for i in range(1, m.agents + 1))]
    for d in report.moments:
        flags = "  ".join(f"{str(d.collapse[i]):>9}" for i in range(1, m.agents + 1))
        lines.append(f"{d.moment:>6}  {d.profile:<8}  {flags}")
    lines.append(f"history constant: {report.history_constant}"
                 + (f" (edge {report.witness_edge[0]} -> {report.witness_edge[1]})"
                    if report.witness_edge else ""))
    _emit(args, report.to_json(), "\n".join(lines))
    return 0


# -- wiring ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    loading = argparse.ArgumentParser(add_help=False)
    loading.add_argument("-m", "--model", required=True)
    loading.add_argument("--close-g", action="store_true",
                         help="take the transitive closure of G before checking")
    loading.add_argument("--permissive", action="store_true",
                         help="accept ought edges that are not moment-constant")

    top = _Parser(prog="tds", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=f"tds {__version__}")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common], help="parse and print a formula")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-n", "--agents", type=int, default=2)
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("eval", parents=[common, loading], help="evaluate a formula")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-w", "--world")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("validate", parents=[common, loading], help="check frame conditions")
    p.add_argument("--strict-serial", action="store_true",
                   help="treat worlds without a G-successor as violations")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("dominance", parents=[common, loading], help="print dominance matrices")
    p.add_argument("-a", "--agent", type=int, required=True)
    p.set_defaults(run=cmd_dominance)

    p = sub.add_parser("transform", parents=[common, loading],
                       help="derive utilities and check the transformation")
    p.add_argument("-o", "--output")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--vars")
    p.set_defaults(run=cmd_transform)

    p = sub.add_parser("gen", parents=[common], help="generate a model")
    p.add_argument("--agents", type=int, default=2)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--choices", help="comma-separated choice counts, one per agent")
    p.add_argument("-o", "--output")
    p.add_argument("--mutate", choices=MUTATION_TARGETS)
    p.add_argument("--util", choices=("derived", "random"))
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("axioms", parents=[common, loading], help="axiom validity sweep")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--vars")
    p.add_argument("--schemas", help="comma-separated schema ids (default: all)")
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("proof", parents=[common], help="check a derivation")
    p.add_argument("-d", "--derivation", required=True)
    p.add_argument("-n", "--agents", type=int)
    p.set_defaults(run=cmd_proof)

    p = sub.add_parser("ctd", parents=[common], help="contrary-to-duty diagnostics")
    p.add_argument("-m", "--model")
    p.add_argument("--census", action="store_true")
    p.add_argument("--worlds-per-cell", type=int, default=1)
    p.add_argument("--close-g", action="store_true")
    p.add_argument("--permissive", action="store_true")
    p.set_defaults(run=cmd_ctd)
    return top


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EX_USAGE
    try:
        return args.run(args)
    except UsageError as e:
        print(f"tds: error: {e}", file=sys.stderr)
        return EX_USAGE
    except InputError as e:
        print(f"tds: {e}", file=sys.stderr)
        return EX_DATAERR


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
