import json
import math

import pytest

from tensor_sde import cli
from tensor_sde.colored_graph import catalog_path


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_scaling(capsys):
    code, out, _ = run(capsys, "scaling", "--beta", "0")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "tensor-sde/1"
    assert (doc["alpha"], doc["gamma"], doc["delta"], doc["alpha_V"], doc["alpha_mm"]) == (0, 0, -2, -2, -3)
    assert all(c["satisfied"] for c in doc["constraints"])


def test_scaling_rational_and_infeasible(capsys):
    code, out, _ = run(capsys, "scaling", "--beta=-1/2")
    assert code == 0 and json.loads(out)["delta"] == -1
    code, out, _ = run(capsys, "scaling", "--beta", "1/3")
    assert code == 1 and json.loads(out)["ok"] is False


def test_solve_json_and_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", "--n", "1", "--lambda", "1")
    doc = json.loads(out)
    assert doc["values"][0]["G2"] == pytest.approx((-3 + math.sqrt(33)) / 12, abs=1e-12)
    path = tmp_path / "g2.csv"
    code, out, err = run(capsys, "solve", "--n", "2", "--lambda", "0.1", "--format", "csv", "--out", str(path))
    rows = path.read_text().splitlines()
    assert code == 0 and rows[0] == "i1,i2,i3,p1,p2,p3,G2" and len(rows) == 9
    assert json.loads(err)["convergence"]["N"] == 2


def test_float_format_is_seventeen_digits():
    assert cli.dumps({"v": 0.1}).count("0.10000000000000001") == 1


def test_g4_and_g6(capsys):
    code, out, _ = run(capsys, "g4", "--n", "4", "--lambda", "0.1", "--x", "1/4", "1/2", "1", "--y", "1/2", "1/4", "3/4")
    assert code == 0 and json.loads(out)["value"] < 0
    code, out, _ = run(capsys, "g4", "--n", "4", "--lambda", "0.1", "--sector", "m|m",
                       "--x", "1/4", "1/2", "1", "--y", "1/2", "1/4", "3/4")
    assert code == 0 and json.loads(out)["sector"] == "m|m"
    code, out, _ = run(capsys, "g6", "--n", "4", "--lambda", "0.1", "--sector", "K",
                       "--x", "1/4", "1/2", "1", "--y", "1/2", "1/4", "3/4", "--z", "1", "3/4", "1/2")
    assert code == 0 and math.isfinite(json.loads(out)["value"])


def test_coincident_momenta_fail_with_json(capsys):
    code, out, _ = run(capsys, "g4", "--n", "4", "--lambda", "0.1", "--x", "1/4", "1/2", "1", "--y", "1/4", "1/4", "3/4")
    doc = json.loads(out)
    assert code == 1 and doc["type"] == "CoincidentMomentumError"


@pytest.mark.parametrize("argv", [
    ["solve", "--n", "0", "--lambda", "1"],
    ["solve", "--n", "2", "--lambda", "nan"],
    ["solve", "--n", "2", "--lambda", "0.1", "--tol", "0"],
    ["g4", "--n", "4", "--lambda", "0.1", "--x", "0.3", "1", "1", "--y", "1", "1", "1"],
    ["nonsense"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize("op,key,value", [
    ("classify", "class", "V_1"), ("aut", "automorphisms", 2), ("genus", "genus", 0)])
def test_graph_queries(capsys, op, key, value):
    code, out, _ = run(capsys, "graph", op, "--in", str(catalog_path("V_1")))
    assert code == 0 and json.loads(out)[key] == value


@pytest.mark.parametrize("color,cls", [(1, "m|m"), (2, "V_3"), (3, "V_2")])
def test_graph_swap(capsys, color, cls):
    code, out, _ = run(capsys, "graph", "swap", "--color", str(color), "--in", str(catalog_path("V_1")))
    assert json.loads(out)["class"] == cls


def test_graph_boundary(capsys, tmp_path):
    from tensor_sde.colored_graph import ColoredGraph
    # one pillow vertex of colour 1 with four external legs
    g = ColoredGraph(
        [{"id": i, "parity": p, "kind": "internal"} for i, p in enumerate(["white", "black", "white", "black"])]
        + [{"id": 4 + i, "parity": p, "kind": "external"} for i, p in enumerate(["black", "white", "black", "white"])],
        [{"u": 0, "v": 1, "color": 1}, {"u": 2, "v": 3, "color": 1},
         {"u": 0, "v": 3, "color": 2}, {"u": 0, "v": 3, "color": 3},
         {"u": 2, "v": 1, "color": 2}, {"u": 2, "v": 1, "color": 3},
         {"u": 0, "v": 4, "color": 0}, {"u": 1, "v": 5, "color": 0},
         {"u": 2, "v": 6, "color": 0}, {"u": 3, "v": 7, "color": 0}])
    path = tmp_path / "pillow.json"
    path.write_text(g.to_json())
    code, out, _ = run(capsys, "graph", "boundary", "--in", str(path))
    assert code == 0 and json.loads(out)["vertex_count"] == 4


def test_perturb_check(capsys):
    code, out, _ = run(capsys, "perturb-check", "--order", "1", "--n-small", "2")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and len(doc["checks"]) == 4


def test_perturb_check_budget(capsys):
    code, out, _ = run(capsys, "perturb-check", "--order", "2", "--n-small", "3")
    assert code == 1 and "error" in json.loads(out)


def test_thread_cap(monkeypatch, capsys):
    import os
    monkeypatch.setenv("TENSOR_SDE_THREADS", "1")
    for var in cli._THREAD_VARS:
        monkeypatch.delenv(var, raising=False)
    run(capsys, "scaling")
    assert os.environ["OMP_NUM_THREADS"] == "1"
