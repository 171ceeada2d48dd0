import pytest

from tdstit.gen import sample_models
from tdstit.proofcheck import (MAX_ATOMS, Derivation, DerivationError, DerivationFormatError,
                               Line, bundled_derivations, check_derivation,
                               derivation_from_json, is_tautology, load_derivation, match_axiom,
                               theorem_text, uses_rule)
from tdstit.semantics import Evaluator
from tdstit.syntax import Var, parse

ACCEPTED = ["a13_weakening", "ought_tautology", "r2_fresh", "past_necessitation",
            "ought_settled", "future_seriality", "grand_independence"]


def _load(name):
    return load_derivation(bundled_derivations()[name])


def test_bundle_contents():
    assert set(bundled_derivations()) == set(ACCEPTED) | {"bad_r1", "bad_r2"}


def test_a13_weakening_accepted():
    d = _load("a13_weakening")
    assert check_derivation(d) == parse("box p -> O{1} p", 1)
    assert parse(theorem_text(d), 1) == parse("box p -> O{1} p", 1)


@pytest.mark.parametrize("name", ACCEPTED)
def test_bundle_accepted(name):
    check_derivation(_load(name))


def test_bad_r2_rejected_at_line_two():
    with pytest.raises(DerivationError) as e:
        check_derivation(_load("bad_r2"))
    assert e.value.line == 2
    assert "R2 side condition, p occurs in φ" in str(e.value)


def test_bad_r1_rejected_at_line_two():
    with pytest.raises(DerivationError) as e:
        check_derivation(_load("bad_r1"))
    assert e.value.line == 2
    assert "necessitation restricted to box, G, H (got [i])" in str(e.value)


def test_r1_modality_must_be_licensed():
    d = derivation_from_json({"agents": 1, "lines": [
        {"formula": "p -> p", "rule": "A0"},
        {"formula": "box (p -> p)", "rule": "R1", "refs": [1], "modality": "[1]"}]})
    with pytest.raises(DerivationError, match="line 2"):
        check_derivation(d)
    d = derivation_from_json({"agents": 1, "lines": [
        {"formula": "p -> p", "rule": "A0"},
        {"formula": "G (p -> p)", "rule": "R1", "refs": [1], "modality": "H"}]})
    with pytest.raises(DerivationError, match="line 2"):
        check_derivation(d)


def test_dangling_reference():
    d = derivation_from_json([{"formula": "p -> p", "rule": "A0"},
                              {"formula": "p", "rule": "R0", "refs": [1, 3]}])
    with pytest.raises(DerivationError, match="line 2: dangling reference 3"):
        check_derivation(d)


def test_schema_mismatch_and_bad_subst():
    d = derivation_from_json([{"formula": "box p -> O{1} p", "rule": "A13"}])
    with pytest.raises(DerivationError, match="line 1: A13"):
        check_derivation(d)
    d = derivation_from_json([{"formula": "box p -> ([1] p & O{1} p)", "rule": "A13",
                               "subst": {"phi": "q", "i": 1}}])
    with pytest.raises(DerivationError, match="line 1"):
        check_derivation(d)


def test_match_axiom_examples():
    s = match_axiom(parse("box q -> ([2] q & O{2} q)", 2), "A13", 2)
    assert s == {"phi": Var("q"), "i": 2}
    assert match_axiom(parse("p -> p", 1), "A0", 1) == {}
    assert match_axiom(parse("dia O{1} p -> box O{1} q", 1), "A15", 1) is None


def test_too_many_atoms():
    taut = parse(" | ".join(["~x0", "x0"] + [f"x{k}" for k in range(1, MAX_ATOMS + 1)]), 1)
    with pytest.raises(ValueError, match="too many atoms"):
        is_tautology(taut)
    with pytest.raises(DerivationError, match="too many atoms"):
        check_derivation(Derivation([Line(taut, "A0")], 1))
    assert not is_tautology(parse("p -> q", 1))


def test_format_errors(tmp_path):
    with pytest.raises(DerivationFormatError):
        derivation_from_json({"lines": [{"formula": "p"}]})
    with pytest.raises(DerivationFormatError):
        derivation_from_json({"lines": [], "bogus": 1})
    with pytest.raises(DerivationFormatError):
        derivation_from_json({"lines": [{"formula": "p &", "rule": "A0"}]})
    path = tmp_path / "d.json"
    path.write_text("{not json")
    with pytest.raises(DerivationFormatError):
        load_derivation(path)
    with pytest.raises(DerivationError, match="empty"):
        check_derivation(Derivation([], 1))


def test_agent_count_inferred():
    d = derivation_from_json([{"formula": "O{3} p -> dia [3] p", "rule": "A14"}])
    assert d.agents == 3
    check_derivation(d)


@pytest.mark.parametrize("name", ACCEPTED)
def test_accepted_theorems_hold(name):
    d = _load(name)
    theorem = check_derivation(d)
    for m in sample_models(50, seed=8, agents=(d.agents,)):
        ev = Evaluator(m)
        where = (set(w for w in m.worlds if m.g_successors(w)) if uses_rule(d, "A19")
                 else set(m.worlds))
        assert where <= ev.extension(theorem), name


def test_seriality_under_necessitation_needs_infinite_frames():
    # G(G p -> F p) is a theorem, but a finite frame's last moment makes the
    # inner seriality instance fail one step before the end
    d = derivation_from_json({"agents": 1, "lines": [
        {"formula": "G p -> F p", "rule": "A19"},
        {"formula": "G (G p -> F p)", "rule": "R1", "refs": [1], "modality": "G"}]})
    theorem = check_derivation(d)
    m = sample_models(1, seed=0, agents=(1,))[0]
    roots = {w for w in m.worlds if m.g_successors(w) and not m.h_predecessors(w)}
    assert roots and not roots <= Evaluator(m).extension(theorem)
