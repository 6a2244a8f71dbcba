import json

import pytest

from mwiso.cli import main
from mwiso.graph import new_graph, read_graph, write_graph

from oracles import cycle_edges


@pytest.fixture
def c6(tmp_path):
    path = tmp_path / "c6.graph"
    write_graph(new_graph(6, cycle_edges(6)), path)
    return str(path)


@pytest.fixture
def c4(tmp_path):
    path = tmp_path / "c4.graph"
    write_graph(new_graph(4, cycle_edges(4)), path)
    return str(path)


def test_compute_h(c6, capsys):
    assert main(["compute", "--graph", c6, "--n", "2", "--quantity", "h"]) == 0
    assert capsys.readouterr().out == "2/3\n"


def test_compute_realizer_and_json(c6, capsys):
    assert main(["compute", "--graph", c6, "--n", "2", "--realizer"]) == 0
    assert capsys.readouterr().out.splitlines() == ["2/3", "part 0 0 0 1 1 1"]
    assert main(["compute", "--graph", c6, "--n", "2", "--quantity", "iota", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["num"], doc["den"], doc["schema"]) == (4, 3, 1)


def test_compute_lambda(c4, capsys):
    assert main(["compute", "--graph", c4, "--n", "3", "--quantity", "lambda"]) == 0
    assert capsys.readouterr().out.startswith("2.0000")


def test_compute_errors(c6, tmp_path, capsys):
    assert main(["compute", "--graph", c6, "--n", "99"]) == 2
    assert "NOutOfRange" in capsys.readouterr().err
    bad = tmp_path / "bad.graph"
    bad.write_text("graph 2\ne 0 5\n")
    assert main(["compute", "--graph", str(bad), "--n", "2"]) == 2
    assert main(["compute", "--graph", c6]) == 2
    assert main(["compute", "--gr", c6, "--n", "2"]) == 2


def test_family_files(tmp_path, capsys):
    prefix = tmp_path / "k2"
    assert main(["family", "--name", "k2-product", "--params", "N=6", "--out", str(prefix)]) == 0
    g = read_graph(tmp_path / "k2.graph")
    assert g.num_vertices == 12 and g.regular_degree == 6
    meta = json.loads((tmp_path / "k2.json").read_text())
    assert meta["family"] == "k2-product" and meta["params"]["N"] == 6
    assert (tmp_path / "k2.perms").read_text().startswith("perm ")
    assert main(["family", "--name", "complete", "--params", "N=4", "--out", str(tmp_path / "k4")]) == 0
    assert read_graph(tmp_path / "k4.graph").num_edges == 6


def test_family_errors(tmp_path):
    out = str(tmp_path / "x")
    assert main(["family", "--name", "nope", "--out", out]) == 2
    assert main(["family", "--name", "cycle", "--params", "m=2", "--out", out]) == 2
    assert main(["family", "--name", "cycle", "--params", "m", "--out", out]) == 2


def test_verify_main_on_file(c6, tmp_path, capsys):
    perms = tmp_path / "z6.perms"
    perms.write_text("perm 1 2 3 4 5 0\n")
    out = tmp_path / "r.json"
    code = main(["verify", "--suite", "main", "--graph", c6, "--perms", str(perms),
                 "--n-range", "2..4", "--json", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == 1 and doc["summary"]["FAIL"] == 0
    assert {r["status"] for r in doc["reports"]} == {"PASS"}
    assert len(doc["reports"]) == 6


def test_verify_counterexample(capsys):
    assert main(["verify", "--suite", "counterexample", "--family", "k2-product",
                 "--params", "N=6", "--print"]) == 0
    doc = json.loads(capsys.readouterr().out)
    by_id = {r["check_id"]: r for r in doc["reports"]}
    assert by_id["counterexample.h-low"]["status"] == "PASS"
    assert by_id["counterexample.h-high"]["status"] == "PASS"


def test_verify_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "basic", "--instance", "C6", "--instance", "2K3"]
    assert main(args + ["--json", str(a)]) == 0
    assert main(args + ["--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_bad_range_and_instance():
    assert main(["verify", "--instance", "C6", "--n-range", "x..y"]) == 2
    assert main(["verify", "--instance", "no-such-graph"]) == 2


def test_phi_and_blocks(capsys):
    assert main(["phi", "--instance", "2K3", "--n", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["gap"] and doc["phi"]["l"] == 2
    assert main(["phi", "--instance", "C6", "--n", "2"]) == 0
    assert not json.loads(capsys.readouterr().out)["gap"]
    assert main(["blocks", "--instance", "2K3", "--count", "2", "--certificate", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["certificate"]["checks"] == {"a": True, "b": True, "c": True}
    assert [[0, 2, 4], [1, 3, 5]] in doc["block_systems"]


def test_corpus_listing(tmp_path, capsys):
    assert main(["corpus", "--json", "--export", str(tmp_path)]) == 0
    rows = json.loads(capsys.readouterr().out)["instances"]
    assert len(rows) >= 20
    assert (tmp_path / "petersen.graph").exists()
