import pytest
from hypothesis import given, settings, strategies as st

from tdstit.gen import random_formulas
from tdstit.syntax import (And, Agent, Bot, Box, G, Grand, H, Not, Ought, ParseError, Top, Var,
                           depth, enumerate_formulas, is_core, modal_depth, name_formula, parse,
                           subformulas, to_text, variables)

p, q = Var("p"), Var("q")


def imp(a, b):
    return Not(And(a, Not(b)))


def test_parse_ought_of_implication():
    f = parse("O{1} (G p -> [1] q)", 2)
    assert f == Ought(1, imp(G(p), Agent(1, q)))


def test_dia_desugars_to_not_box_not():
    assert parse("dia p", 1) == Not(Box(Not(p)))


def test_agent_out_of_range():
    with pytest.raises(ParseError, match="out of range"):
        parse("[2] p", 1)


def test_zero_agents_rejected():
    with pytest.raises(ValueError):
        parse("p", 0)


@pytest.mark.parametrize("text, expected", [
    ("<1> p", Not(Agent(1, Not(p)))),
    ("<Ag> p", Not(Grand(Not(p)))),
    ("F p", Not(G(Not(p)))),
    ("P p", Not(H(Not(p)))),
    ("o{2} p", Not(Ought(2, Not(p)))),
    ("[d1] p", And(Agent(1, p), Not(Box(p)))),
    ("Od{1} p", And(Ought(1, p), Not(Box(p)))),
    ("p | q", Not(And(Not(p), Not(q)))),
    ("top & bot", And(Top(), Bot())),
    ("[Ag] p", Grand(p)),
])
def test_sugar(text, expected):
    assert parse(text, 2) == expected


def test_implication_is_right_associative():
    assert parse("p -> q -> p", 1) == imp(p, imp(q, p))


def test_binding_order():
    # & binds tighter than |, which binds tighter than ->
    assert parse("p & q | p -> q", 1) == imp(Not(And(Not(And(p, q)), Not(p))), q)
    assert parse("~ p & q", 1) == And(Not(p), q)
    assert parse("box p & q", 1) == And(Box(p), q)


def test_iff_expands_to_two_implications():
    assert parse("p <-> q", 1) == And(imp(p, q), imp(q, p))


def test_error_position():
    with pytest.raises(ParseError) as e:
        parse("p & $", 1)
    assert e.value.pos == 4


@pytest.mark.parametrize("text", ["(p", "p &", "O{1}", "", "p q"])
def test_malformed(text):
    with pytest.raises(ParseError):
        parse(text, 1)


def test_capital_letters_are_not_identifiers():
    with pytest.raises(ParseError):
        parse("Gp", 1)


def test_print_examples():
    assert to_text(Ought(1, p)) == "O{1} p"
    assert to_text(Not(Box(Not(p)))) == "~ box ~ p"


def test_round_trip_seeded():
    fs = random_formulas(1000, seed=11)
    assert all(parse(to_text(f), 2) == f for f in fs)


@st.composite
def formulas(draw, max_depth=4):
    if max_depth == 0 or draw(st.booleans()):
        return draw(st.sampled_from([p, q, Var("r1"), Top(), Bot()]))
    kind = draw(st.sampled_from(["not", "and", "box", "ag", "g", "h", "stit", "ought"]))
    a = draw(formulas(max_depth - 1))
    if kind == "and":
        return And(a, draw(formulas(max_depth - 1)))
    if kind in ("stit", "ought"):
        i = draw(st.integers(1, 3))
        return Agent(i, a) if kind == "stit" else Ought(i, a)
    return {"not": Not, "box": Box, "ag": Grand, "g": G, "h": H}[kind](a)


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_round_trip_property(f):
    assert parse(to_text(f), 3) == f


@settings(max_examples=100, deadline=None)
@given(formulas())
def test_parse_output_is_core(f):
    g = parse(to_text(f).replace("~ box ~", "dia"), 3)
    assert is_core(g)


def test_enumeration_base():
    assert set(enumerate_formulas(0, ("p",), 1)) == {p, Top(), Bot()}


def test_enumeration_depth1_contains_each_constructor():
    fs = set(enumerate_formulas(1, ("p",), 1))
    for f in (Box(p), Agent(1, p), Grand(p), G(p), H(p), Ought(1, p), Not(p), And(p, p)):
        assert f in fs


def test_enumeration_counts():
    assert len(list(enumerate_formulas(0, ("p", "q"), 2))) == 4
    assert len(list(enumerate_formulas(1, ("p", "q"), 2))) == 56
    # regression constant, frozen after the first run
    assert len(list(enumerate_formulas(2, ("p", "q"), 2))) == 3644


def test_enumeration_is_duplicate_free_and_deterministic():
    a = list(enumerate_formulas(2, ("p",), 1))
    assert len(a) == len(set(a))
    assert a == list(enumerate_formulas(2, ("p",), 1))
    assert max(depth(f) for f in a) == 2


def test_helpers():
    f = parse("box (p & [1] q)", 1)
    assert variables(f) == {"p", "q"}
    assert modal_depth(f) == 2
    assert Agent(1, q) in subformulas(f)
    n = name_formula("p")
    assert n == parse("box ~p & box (G p & H p)", 1)
