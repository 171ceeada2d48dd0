"""Formulas of the temporal deontic STIT language.

The core AST has nine constructors (plus the constants ``Top``/``Bot``):
``Var``, ``Not``, ``And``, ``Box``, ``Agent``, ``Grand``, ``G``, ``H`` and
``Ought``.  Every other connective of the surface syntax is expanded while
parsing, so downstream code only ever pattern-matches on core nodes.

Surface syntax, loosest binding first::

    f <-> g          (right associative)
    f -> g           (right associative)
    f | g
    f & g
    ~f  box f  dia f  G f  H f  F f  P f
    [n] f  <n> f  [Ag] f  <Ag> f  [dn] f
    O{n} f  o{n} f  Od{n} f
    top  bot  p  (f)
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Union


class ParseError(ValueError):
    """Raised on malformed formula text.  ``pos`` is a 0-based offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bot:
    pass


@dataclass(frozen=True, slots=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Box:
    arg: "Formula"


@dataclass(frozen=True, slots=True)
class Agent:
    """``[i] f``: agent ``i`` sees to it that ``f``."""

    agent: int
    arg: "Formula"


@dataclass(frozen=True, slots=True)
class Grand:
    """``[Ag] f``: the grand coalition sees to it that ``f``."""

    arg: "Formula"


@dataclass(frozen=True, slots=True)
class G:
    arg: "Formula"


@dataclass(frozen=True, slots=True)
class H:
    arg: "Formula"


@dataclass(frozen=True, slots=True)
class Ought:
    """``O{i} f``: agent ``i`` ought to see to it that ``f``."""

    agent: int
    arg: "Formula"


Formula = Union[Var, Top, Bot, Not, And, Box, Agent, Grand, G, H, Ought]

UNARY = (Not, Box, Grand, G, H)
INDEXED = (Agent, Ought)
CORE_TYPES = (Var, Top, Bot, Not, And, Box, Agent, Grand, G, H, Ought)

TOP = Top()
BOT = Bot()


# -- derived connectives ---------------------------------------------------
# These build core trees; nothing in the AST remembers the sugar.

def or_(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def imp(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(imp(a, b), imp(b, a))


def dia(a: Formula) -> Formula:
    return Not(Box(Not(a)))


def agent_dia(i: int, a: Formula) -> Formula:
    return Not(Agent(i, Not(a)))


def grand_dia(a: Formula) -> Formula:
    return Not(Grand(Not(a)))


def future(a: Formula) -> Formula:
    return Not(G(Not(a)))


def past(a: Formula) -> Formula:
    return Not(H(Not(a)))


def ought_dia(i: int, a: Formula) -> Formula:
    return Not(Ought(i, Not(a)))


def del_stit(i: int, a: Formula) -> Formula:
    return And(Agent(i, a), Not(Box(a)))


def del_ought(i: int, a: Formula) -> Formula:
    return And(Ought(i, a), Not(Box(a)))


def conj(parts) -> Formula:
    """Left-nested conjunction of a non-empty sequence."""
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def name_formula(p: str) -> Formula:
    """The irreflexivity marker ``box ~p & box (G p & H p)``."""
    return And(Box(Not(Var(p))), Box(And(G(Var(p)), H(Var(p)))))


# -- structural helpers ----------------------------------------------------

def children(f: Formula) -> tuple:
    if isinstance(f, (Var, Top, Bot)):
        return ()
    if isinstance(f, And):
        return (f.left, f.right)
    return (f.arg,)


def subformulas(f: Formula) -> set:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g not in out:
            out.add(g)
            stack.extend(children(g))
    return out


def depth(f: Formula) -> int:
    """Nesting depth counting every constructor (atoms have depth 0)."""
    kids = children(f)
    return 0 if not kids else 1 + max(depth(k) for k in kids)


def modal_depth(f: Formula) -> int:
    kids = children(f)
    if not kids:
        return 0
    inner = max(modal_depth(k) for k in kids)
    return inner if isinstance(f, (Not, And)) else inner + 1


def variables(f: Formula) -> set:
    return {g.name for g in subformulas(f) if isinstance(g, Var)}


def agents_used(f: Formula) -> set:
    return {g.agent for g in subformulas(f) if isinstance(g, INDEXED)}


def is_core(f: Formula) -> bool:
    return all(isinstance(g, CORE_TYPES) for g in subformulas(f))


def has_ought(f: Formula) -> bool:
    return any(isinstance(g, Ought) for g in subformulas(f))


# -- printing --------------------------------------------------------------

def to_text(f: Formula) -> str:
    """Canonical, fully parenthesised text.  Duals are not re-sugared."""
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, And):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, Not):
        prefix = "~"
    elif isinstance(f, Box):
        prefix = "box"
    elif isinstance(f, Agent):
        prefix = f"[{f.agent}]"
    elif isinstance(f, Grand):
        prefix = "[Ag]"
    elif isinstance(f, G):
        prefix = "G"
    elif isinstance(f, H):
        prefix = "H"
    elif isinstance(f, Ought):
        prefix = f"O{{{f.agent}}}"
    else:
        raise TypeError(f"not a formula: {f!r}")
    return f"{prefix} {to_text(f.arg)}"


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<and>&)
  | (?P<or>\|)
  | (?P<not>~)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<grand>\[Ag\])
  | (?P<grand_dia><Ag>)
  | (?P<del_stit>\[d(?P<dn>\d+)\])
  | (?P<stit>\[(?P<sn>\d+)\])
  | (?P<stit_dia><(?P<an>\d+)>)
  | (?P<del_ought>Od\{(?P<don>\d+)\})
  | (?P<ought>O\{(?P<on>\d+)\})
  | (?P<ought_dia>o\{(?P<odn>\d+)\})
  | (?P<ident>[a-z][a-z0-9_]*)
  | (?P<temporal>[GHFP])(?![A-Za-z0-9_])
""", re.VERBOSE)

KEYWORDS = {"box", "dia", "top", "bot"}

_PREFIX_KINDS = {"not", "box", "dia", "G", "H", "F", "P", "grand", "grand_dia",
                 "stit", "stit_dia", "del_stit", "ought", "ought_dia", "del_ought"}


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind in ("dn", "sn", "an", "don", "on", "odn"):
            # lastgroup reports the inner index group; recover the outer one
            kind = next(k for k in ("del_stit", "stit", "stit_dia", "del_ought",
                                    "ought", "ought_dia") if m.group(k))
        if kind != "ws":
            if kind == "temporal":
                kind = m.group("temporal")
                value = None
            elif kind == "ident" and m.group() in KEYWORDS:
                kind = m.group()
                value = None
            elif kind in ("del_stit", "stit", "stit_dia", "del_ought", "ought", "ought_dia"):
                digits = next(m.group(g) for g in ("dn", "sn", "an", "don", "on", "odn")
                              if m.group(g) is not None)
                value = int(digits)
            else:
                value = m.group()
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("eof", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, agents: int):
        self.tokens = _tokenize(text)
        self.i = 0
        self.agents = agents

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(tok[1] or tok[0])
            raise ParseError(f"expected {kind}, found {found}", tok[2])
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected token {tok[1] or tok[0]!r}", tok[2])
        return f

    def iff(self):
        left = self.imp()
        if self.peek()[0] == "iff":
            self.take()
            return iff(left, self.iff())
        return left

    def imp(self):
        left = self.disj()
        if self.peek()[0] == "imp":
            self.take()
            return imp(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.peek()[0] == "or":
            self.take()
            left = or_(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek()[0] == "and":
            self.take()
            left = And(left, self.unary())
        return left

    def agent(self, tok) -> int:
        n = tok[1]
        if not 1 <= n <= self.agents:
            raise ParseError(f"agent index {n} out of range 1..{self.agents}", tok[2])
        return n

    def unary(self):
        tok = self.peek()
        kind = tok[0]
        if kind in _PREFIX_KINDS:
            self.take()
            if kind in ("stit", "stit_dia", "del_stit", "ought", "ought_dia", "del_ought"):
                i = self.agent(tok)
            arg = self.unary()
            if kind == "not":
                return Not(arg)
            if kind == "box":
                return Box(arg)
            if kind == "dia":
                return dia(arg)
            if kind == "G":
                return G(arg)
            if kind == "H":
                return H(arg)
            if kind == "F":
                return future(arg)
            if kind == "P":
                return past(arg)
            if kind == "grand":
                return Grand(arg)
            if kind == "grand_dia":
                return grand_dia(arg)
            if kind == "stit":
                return Agent(i, arg)
            if kind == "stit_dia":
                return agent_dia(i, arg)
            if kind == "del_stit":
                return del_stit(i, arg)
            if kind == "ought":
                return Ought(i, arg)
            if kind == "ought_dia":
                return ought_dia(i, arg)
            return del_ought(i, arg)
        return self.atom()

    def atom(self):
        tok = self.take()
        kind = tok[0]
        if kind == "ident":
            return Var(tok[1])
        if kind == "top":
            return TOP
        if kind == "bot":
            return BOT
        if kind == "lpar":
            f = self.iff()
            self.expect("rpar")
            return f
        found = "end of input" if kind == "eof" else repr(tok[1] or kind)
        raise ParseError(f"expected a formula, found {found}", tok[2])


def parse(text: str, agents: int) -> Formula:
    """Parse surface syntax into a core formula for ``agents`` agents."""
    if agents < 1:
        raise ValueError("agents must be >= 1")
    return _Parser(text, agents).parse()


# -- enumeration -----------------------------------------------------------

def enumerate_formulas(depth: int, vars=("p",), agents: int = 1) -> Iterator[Formula]:
    """Yield every core formula of nesting depth <= ``depth`` exactly once.

    Order is deterministic: by depth, then constructor, then argument order.
    """
    level = [Var(v) for v in vars] + [TOP, BOT]
    yield from level
    seen = list(level)
    previous_count = 0
    for d in range(1, depth + 1):
        old = seen[previous_count:]  # formulas of depth exactly d-1
        fresh = []
        unaries = [Not, Box, Grand, G, H]
        for f in old:
            for ctor in unaries:
                fresh.append(ctor(f))
            for i in range(1, agents + 1):
                fresh.append(Agent(i, f))
                fresh.append(Ought(i, f))
        # binary: at least one side has depth exactly d-1
        for a, b in itertools.product(seen, repeat=2):
            if max(_depth_cached(a), _depth_cached(b)) == d - 1:
                fresh.append(And(a, b))
        previous_count = len(seen)
        seen.extend(fresh)
        yield from fresh


_depth_memo: dict = {}


def _depth_cached(f: Formula) -> int:
    d = _depth_memo.get(f)
    if d is None:
        d = depth(f)
        if len(_depth_memo) < 200_000:
            _depth_memo[f] = d
    return d
