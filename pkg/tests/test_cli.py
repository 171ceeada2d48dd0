import json

import pytest

from tdstit.cli import run
from tdstit.model import load_model
from tdstit.proofcheck import bundled_derivations


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_parse(capsys):
    assert run(["parse", "-f", "p -> q", "--json"]) == 0
    out = _json(capsys)
    assert out["text"] == "~ (p & ~ q)"
    assert out["ast"]["Not"]["And"][0] == {"Var": "p"}
    assert run(["parse", "-f", "p &"]) == 65


def test_parse_agent_out_of_range(capsys):
    assert run(["parse", "-f", "[2] p", "-n", "1"]) == 65


def test_usage_errors(capsys):
    assert run(["frobnicate"]) == 64
    assert run(["eval", "-f", "p"]) == 64
    assert run(["ctd"]) == 64


def test_missing_file(capsys, tmp_path):
    assert run(["validate", "-m", str(tmp_path / "none.json")]) == 65
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["validate", "-m", str(bad)]) == 65


def test_eval(capsys, data_dir):
    assert run(["eval", "-m", str(data_dir / "m1.json"), "-f", "O{1} p", "--json"]) == 0
    assert set(_json(capsys)["truth"].values()) == {True}
    assert run(["eval", "-m", str(data_dir / "m1.json"), "-f", "box p", "-w", "w00"]) == 0
    assert "false" in capsys.readouterr().out.lower()


def test_validate_exit_codes(capsys, data_dir, tmp_path):
    assert run(["validate", "-m", str(data_dir / "m1.json")]) == 1
    assert run(["validate", "-m", str(data_dir / "m1.json"), "--strict-serial"]) == 2
    out = tmp_path / "c2.json"
    assert run(["gen", "--mutate", "C2", "-o", str(out)]) == 0
    capsys.readouterr()
    assert run(["validate", "-m", str(out), "--json"]) == 2
    report = _json(capsys)
    assert any(v["condition"] == "C2" and v["severity"] == "violation" for v in report)


def test_gen_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(["gen", "--agents", "2", "--depth", "2", "--choices", "2,3",
                    "--seed", "5", "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(load_model(a).worlds) == 12
    assert run(["gen", "--agents", "2", "--choices", "2"]) == 64


def test_gen_util(capsys, tmp_path):
    out = tmp_path / "u.json"
    assert run(["gen", "--util", "derived", "-o", str(out)]) == 0
    assert "util" in json.loads(out.read_text())


def test_dominance(capsys, data_dir, tmp_path):
    out = tmp_path / "u.json"
    assert run(["transform", "-m", str(data_dir / "m1.json"), "-o", str(out)]) == 0
    capsys.readouterr()
    assert run(["dominance", "-m", str(out), "-a", "1", "--json"]) == 0
    assert _json(capsys)
    assert run(["dominance", "-m", str(out), "-a", "3"]) in (64, 65)


def test_transform(capsys, data_dir, tmp_path):
    out = tmp_path / "u.json"
    assert run(["transform", "-m", str(data_dir / "gen_seed7.json"), "-o", str(out),
                "--depth", "1", "--json"]) == 0
    assert _json(capsys)
    data = json.loads(out.read_text())
    assert "util" in data and "ideal" not in data


def test_axioms(capsys, data_dir, tmp_path):
    assert run(["axioms", "-m", str(data_dir / "gen_seed7.json"), "--depth", "1", "--json"]) == 0
    assert _json(capsys)["counterexamples"] == []
    out = tmp_path / "c3.json"
    assert run(["gen", "--mutate", "C3", "-o", str(out)]) == 0
    assert run(["axioms", "-m", str(out), "--schemas", "A11"]) == 2
    assert run(["axioms", "-m", str(out), "--schemas", "A99"]) == 64


@pytest.mark.parametrize("name", sorted(bundled_derivations()))
def test_proof(capsys, name):
    code = run(["proof", "-d", str(bundled_derivations()[name]), "--json"])
    out = _json(capsys)
    if name.startswith("bad_"):
        assert code == 2 and out["line"] == 2
    else:
        assert code == 0 and out["ok"]


def test_proof_r2_message(capsys):
    assert run(["proof", "-d", str(bundled_derivations()["bad_r2"])]) == 2
    assert "line 2: R2 side condition, p occurs in φ" in capsys.readouterr().out


def test_ctd(capsys, data_dir):
    assert run(["ctd", "--census", "--json"]) == 0
    census = _json(capsys)
    assert census["assignments"] == 16 and census["satisfiable"] == 8
    assert run(["ctd", "-m", str(data_dir / "fig1_i.json"), "--json"]) == 0
    report = _json(capsys)
    assert report["moments"][0]["collapse"] == {"1": False, "2": False}
    assert run(["ctd", "-m", str(data_dir / "m1.json")]) == 0
