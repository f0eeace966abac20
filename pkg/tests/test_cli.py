import io
import json
from importlib.resources import files

import jsonschema
import pytest

from herding_mfg.cli import run
from herding_mfg.game import braess2, serialize_game

SCHEMA = json.loads(files("herding_mfg").joinpath("schemas/solve.schema.json").read_text())


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_solve_braess2():
    code, out, _ = call("solve", "--game", "braess2", "--rho", "0.5", "--alpha", "0.4",
                        "--policy", "declared", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert [e["mu"] for e in doc["equilibria"]] == [[0.4, 0.6], [0.6, 0.4]]
    assert [[h["action"] for h in e["herding"]] for e in doc["equilibria"]] == [[2], [1]]
    assert doc["equilibria"][0]["herding"][0]["mu_R"] == [1.0, 0.0]


def test_classical_schema_and_sorting():
    code, out, _ = call("classical", "--game", "bandwidth", "--n", "3")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    code, out, _ = call("solve", "--game", "braess3", "--rho", "0.5", "--alpha", "0.6")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    mus = [e["mu"] for e in doc["equilibria"]]
    assert mus == sorted(mus)


def test_determinism():
    argv = ("metrics", "--game", "bandwidth", "--alpha", "0.3")
    assert call(*argv)[1] == call(*argv)[1]


def test_influence():
    code, out, _ = call("influence", "--game", "product", "--alpha", "0.5", "--weights", "0,1,0")
    doc = json.loads(out)
    assert code == 0 and doc["i_H_star"]["action"] == 2 and doc["mu_star"] == [0.5, 0.5, 0.0]
    code, out, _ = call("influence", "--game", "braess3", "--rho", "0.8", "--alpha", "0.5", "--objective", "social")
    assert json.loads(out)["f_star"] == -1.5


def test_sweep_csv(tmp_path):
    target = tmp_path / "sweep.csv"
    code, out, _ = call("sweep", "--game", "braess-compare", "--alpha", "0:1:10", "--rho", "0.667:1:5",
                        "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().splitlines()
    assert lines[0] == "alpha,rho,g_b,g_w,sign_b,poa,pos"
    assert len(lines) == 51


def test_predict_and_herding_set():
    code, out, _ = call("predict", "--game", "braess3", "--alpha", "0.5")
    assert json.loads(out)["prediction"]["label"] == "AB"
    code, out, _ = call("herding-set", "--game", "braess2", "--alpha", "0.6", "--policy", "strict")
    assert [h["action"] for h in json.loads(out)["herding_set"]] == [1]


def test_verify_exit_codes():
    code, out, _ = call("verify", "--game", "braess3", "--alpha", "0.6")
    assert code == 0 and json.loads(out)["agreement"]


def test_verify_reports_disagreement(monkeypatch):
    from herding_mfg import cli
    from herding_mfg.classical import EquilibriumSet

    real = cli.alpharne.alpha_rne_set

    def partial(*args, **kwargs):
        eqs = real(*args, **kwargs)
        return EquilibriumSet(eqs.points[:1], eqs.families)

    monkeypatch.setattr(cli.alpharne, "alpha_rne_set", partial)
    code, out, _ = call("verify", "--game", "braess2", "--rho", "0.5", "--alpha", "0.4")
    doc = json.loads(out)
    assert code == 4 and not doc["agreement"] and doc["completeness_suspects"]


def test_game_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(serialize_game(braess2(0.5)))
    code, out, _ = call("solve", "--game-file", str(path), "--alpha", "0.4", "--format", "table")
    assert code == 0 and "equilibria:" in out


@pytest.mark.parametrize("argv", [
    ("solve", "--game", "braess2", "--alpha", "1.5"),
    ("solve", "--game", "braess2", "--alpha", "x"),
    ("solve", "--alpha", "0.5"),
    ("solve", "--game", "braess2", "--game-file", "x.json", "--alpha", "0.5"),
    ("bogus",),
    ("sweep", "--game", "braess2", "--alpha", "0:1:5"),
    ("solve", "--game", "braess-compare", "--alpha", "0.5"),
    ("solve", "--game", "braess2", "--rho", "2", "--alpha", "0.5"),
    ("influence", "--game", "product", "--alpha", "0.5", "--weights", "1,2"),
    ("metrics", "--game", "braess2", "--alpha", "0.5", "--format", "csv"),
])
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_bad_game_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"actions": ["a", "b"], "utility": {"b": [0, 0]}}')
    code, _, err = call("classical", "--game-file", str(path))
    assert code == 2 and "$.utility.M" in err


def test_solver_error(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"actions": ["a", "b", "c"], "utility": {"b": [0, 0, 0], "M": [[0,0,0],[0,0,0],[0,0,0]]}}')
    assert call("classical", "--game-file", str(path))[0] == 3
    path.write_text('{"actions": ["a", "b", "c"], "utility": {"b": [1, 1, 0], "M": [[0,0,0],[0,0,0],[0,0,0]]}}')
    assert call("influence", "--game-file", str(path), "--alpha", "0.5", "--objective", "social")[0] == 3


def test_help_mentions_policies(capsys):
    assert call("solve", "--help")[0] == 0
    assert "declared" in capsys.readouterr().out
