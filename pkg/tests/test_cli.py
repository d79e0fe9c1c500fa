import json
import math

import pytest

from perstopy import io
from perstopy.cli import main
from perstopy.metric import cycle_graph
from perstopy.vietoris_rips import persistent_pi1


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return _run


@pytest.fixture
def spaces(tmp_path, run):
    paths = {}
    for name, argv in {"c7": ("cycle", 7), "c3": ("cycle", 3), "s4": ("star", 4), "d3": ("circle", 3),
                       "d4": ("circle", 4)}.items():
        paths[name] = tmp_path / f"{name}.json"
        assert run("generate", *argv, "-o", paths[name])[0] == 0
    return paths


def test_generate_then_pi1(spaces, run):
    code, out, _ = run("pi1", spaces["c7"], "--all")
    assert code == 0
    data = json.loads(out)
    assert data["intervals"] == [{"group": "Z", "class": {"tag": "Free", "rank": 1}, "interval": [1.0, 3.0]}]
    assert data["critical_values"] == [1.0, 3.0]
    assert [lv["group"] for lv in data["levels"]] == ["0", "Z", "Z", "0"]


def test_pi1_single_scale(spaces, run):
    code, out, _ = run("pi1", spaces["c7"], "--scale", 2)
    assert code == 0 and json.loads(out)["group"] == "Z"


def test_gh_cycle_star(spaces, run):
    code, out, _ = run("gh", spaces["c3"], spaces["s4"])
    assert code == 0 and json.loads(out)["exact"] == 0.5


def test_gh_bounds_only(spaces, run):
    code, out, _ = run("gh", spaces["d3"], spaces["d4"], "--bounds-only")
    data = json.loads(out)
    assert code == 0 and data["exact"] is None
    assert math.isclose(data["mu0_bound"], math.pi / 4, rel_tol=1e-11)
    assert data["best_lower_bound"] == data["mu0_bound"]


def test_barcode_and_bottleneck(spaces, run, tmp_path):
    for name in ("d3", "d4"):
        assert run("barcode", spaces[name], "--dim", 1, "-o", tmp_path / f"{name}.csv")[0] == 0
    assert (tmp_path / "d3.csv").read_text() == "birth,death\n"
    code, out, _ = run("distance", "--bottleneck", tmp_path / "d3.csv", tmp_path / "d4.csv")
    assert code == 0 and math.isclose(json.loads(out)["bottleneck"], math.pi / 4, rel_tol=1e-11)


def test_interleave(tmp_path, run):
    L = 2 * math.pi / 3
    for name, tag in (("g1", "FreeAbelian"), ("g2", "Free")):
        (tmp_path / f"{name}.json").write_text(json.dumps(
            {"group": {"tag": tag, "rank": 2}, "interval": [0, L], "open_right": True}))
    code, out, _ = run("distance", "--interleave", tmp_path / "g1.json", tmp_path / "g2.json")
    assert code == 0 and math.isclose(json.loads(out)["interleaving"], math.pi / 3, rel_tol=1e-11)


def test_loops_outputs(spaces, run, tmp_path):
    code, out, _ = run("loops", spaces["s4"], "--max-size", 6, "--subdendrogram", tmp_path / "sub.json",
                       "--mu1-matrix", tmp_path / "mu1.csv")
    assert code == 0
    assert [c["representative"] for c in json.loads(out)["classes"]] == ["0", "0.1.0", "0.1.2.0"]
    rows = [list(map(float, r.split(","))) for r in (tmp_path / "mu1.csv").read_text().split()]
    assert rows == [[0, 1, 2], [1, 1, 2], [2, 2, 2]]
    assert json.loads((tmp_path / "sub.json").read_text())["blocks"][-1] == [[0, 1, 2]]


def test_mu0(spaces, run, tmp_path):
    code, out, _ = run("mu0", spaces["c7"], "--dendrogram", tmp_path / "den.json")
    assert code == 0
    assert json.loads(out)["ultrametric"][0][3] == 1
    assert (tmp_path / "den.json").exists()


def test_round_trip(spaces, run, tmp_path):
    X = io.load_space(spaces["c7"])
    assert (X.dist == cycle_graph(7).dist).all()
    assert persistent_pi1(X).to_json() == persistent_pi1(cycle_graph(7)).to_json()
    again = tmp_path / "again.json"
    run("generate", "random", 5, "--seed", 3, "-o", again)
    first = again.read_text()
    run("generate", "random", 5, "--seed", 3, "-o", again)
    assert again.read_text() == first


def test_product_and_wedge(spaces, run):
    code, out, _ = run("generate", "wedge", spaces["c3"], spaces["s4"])
    assert code == 0 and len(json.loads(out)["dist"]) == 6


def test_missing_file(run, tmp_path):
    code, _, err = run("pi1", tmp_path / "nope.json")
    assert code == 1 and "not found" in err


def test_malformed_json(run, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _, err = run("pi1", bad)
    assert code == 1 and "malformed JSON" in err


def test_not_a_metric(run, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dist": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]}))
    code, _, err = run("barcode", bad, "--dim", 0)
    assert code == 1 and "not a metric space" in err


def test_budget_exceeded(spaces, run):
    code, _, err = run("gh", spaces["c7"], spaces["c7"], "--budget", 10)
    assert code == 1 and "budget exceeded" in err


def test_usage_errors(run):
    assert run("frobnicate")[0] == 2
    assert run("barcode")[0] == 2
    assert run("generate", "cycle", "seven")[0] == 2


def test_verify_properties(run, tmp_path):
    code, out, _ = run("verify", "--suite", "properties", "--seed", 1, "--json", tmp_path / "r.json")
    assert code == 0 and out.strip().endswith("7/7 passed")
    assert json.loads((tmp_path / "r.json").read_text())["passed"] is True
