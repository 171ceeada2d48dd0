import pytest

from tdstit.axioms import (SCHEMA_IDS, SCHEMAS, TAUTOLOGIES, instantiate, literal_check,
                           metas_of, schema_templates, successor_mask, sweep_model)
from tdstit.gen import GenParams, gen_model, mutate, random_util
from tdstit.proofcheck import is_tautology
from tdstit.semantics import Evaluator
from tdstit.syntax import enumerate_formulas, parse
from tdstit.transform import derive_util

from conftest import small_models


def _fs(n):
    return list(enumerate_formulas(1, ("p", "q"), n))


def test_schema_table():
    assert SCHEMA_IDS[0] == "A0" and len(SCHEMAS) == 25
    assert set(SCHEMAS) == {f"A{k}" for k in range(1, 26)}
    assert all(is_tautology(t) for t in TAUTOLOGIES)


def test_indexed_schemas_expand_per_agent():
    assert [a for a, _ in schema_templates("A13", 3)] == [1, 2, 3]
    assert [a for a, _ in schema_templates("A1", 3)] == [None]
    # A10 and A11 are fixed to the agent count
    assert len(metas_of(schema_templates("A11", 3)[0][1])) == 3


def test_instantiate():
    (_, t), = [x for x in schema_templates("A13", 2) if x[0] == 2]
    names = metas_of(t)
    f = instantiate(t, {names[0]: parse("q", 2)})
    assert f == parse("box q -> ([2] q & O{2} q)", 2)


def test_sweep_clean_on_generated_models():
    for n in small_models():
        fs = _fs(n.agents)
        for m in (n, derive_util(n), random_util(n, seed=2)):
            report = sweep_model(m, fs)
            assert report.clean, report.to_json()["counterexamples"][:2]
            assert report.instances > 0


@pytest.mark.parametrize("target,schema", [("C2", "A10"), ("C3", "A11"), ("T6", "A25"),
                                           ("D9", "A14"), ("D10", "A15"), ("T7", "A24")])
def test_mutants_are_caught(std, target, schema):
    m = mutate(std, target, seed=0)
    report = sweep_model(m, _fs(2))
    assert schema in {c.schema for c in report.counterexamples}


def test_batch_agrees_with_literal(std):
    for target in ("C1", "C2", "T6", "D8", "D10"):
        m = mutate(std, target, seed=0)
        report = sweep_model(m, _fs(2), limit=5)
        assert report.counterexamples
        for c in report.counterexamples:
            template = dict(schema_templates(c.schema, m.agents))[c.agent]
            assert literal_check(m, c.schema, c.agent, template, c.substitution) == c.worlds


def test_a19_restricted_to_successor_worlds():
    m = gen_model(GenParams(agents=1, depth=2, choices=(2,), seed=0))
    where = successor_mask(m)
    assert where.any() and not where.all()
    (_, t), = schema_templates("A19", 1)
    f = instantiate(t, {metas_of(t)[0]: parse("p", 1)})
    leaves = {w for w, s in zip(m.worlds, where) if not s}
    assert not sweep_model(m, _fs(1), schemas=("A19",)).counterexamples
    assert Evaluator(m).extension(f) >= set(m.worlds) - leaves
    assert not Evaluator(m).extension(f) >= leaves
