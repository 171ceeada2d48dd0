import runpy
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parents[1] / "demos"


@pytest.mark.parametrize("name", ["m1_walkthrough", "proofs", "transform_batch"])
def test_demo_runs(name, capsys, monkeypatch):
    monkeypatch.setattr(sys, "argv", [name, "3"])
    runpy.run_path(str(DEMOS / f"{name}.py"), run_name="__main__")
    assert capsys.readouterr().out
