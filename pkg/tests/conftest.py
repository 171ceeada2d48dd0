from pathlib import Path

import pytest

from tdstit.gen import GenParams, chain_model, gen_model, grid_util_model, m1_model, standard_model

DATA = Path(__file__).resolve().parents[1] / "src" / "tdstit" / "data"


@pytest.fixture
def m1():
    return m1_model()


@pytest.fixture
def chain():
    return chain_model(3)


@pytest.fixture
def std():
    return standard_model()


@pytest.fixture
def fig1_i():
    # rows {a,b},{c,d} for agent 1, columns {a,c},{b,d} for agent 2
    return grid_util_model((1, 1, 1, 0), valuation={"phi": ["a", "b", "c"]})


@pytest.fixture
def data_dir():
    return DATA


def small_models():
    shapes = [GenParams(agents=1, depth=2, choices=(2,)),
              GenParams(agents=1, depth=3, choices=(2,)),
              GenParams(agents=2, depth=2, choices=(2, 2)),
              GenParams(agents=2, depth=2, choices=(2, 3)),
              GenParams(agents=2, depth=1, choices=(1, 1))]
    return [gen_model(GenParams(p.agents, p.depth, p.choices, seed=s))
            for p in shapes for s in range(3)]


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
