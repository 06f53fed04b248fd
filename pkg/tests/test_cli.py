import json
import subprocess
import sys

import pytest

from gph import io
from gph.cli import main
from gph.corpus import curated_morphisms, random_whiskering
from gph.errors import InvalidGraph
from gph.graph import Graph, GraphMorphism, bouquet, coproduct, cycle_graph, from_empty, identity, path_graph


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    report = json.loads(out)
    assert report["exit_code"] == code
    return code, report, out


@pytest.fixture
def files(tmp_path):
    cur = curated_morphisms()
    paths = {k: write(tmp_path, f"{k}.json", io.morphism_to_json(f)) for k, f in cur.items()}
    for k, g in {"b2": bouquet(2), "c2": cycle_graph(2), "c3": cycle_graph(3), "p3": path_graph(3)}.items():
        paths[k] = write(tmp_path, f"{k}.json", io.graph_to_json(g))
    paths["id"] = write(tmp_path, "id.json", io.morphism_to_json(identity(cycle_graph(3))))
    paths["v"] = write(tmp_path, "v.json", io.graph_to_json(cur["fold"].dom))
    return paths


# -- parsing ---------------------------------------------------------------------

def test_graph_file_ids_are_file_order():
    g = io.graph_from_json({"nodes": ["b", "a"], "arcs": [{"id": "x", "src": "a", "tgt": "b"}]})
    assert g.pairs() == [(1, 0)] and g.node_label(0) == "b"


def test_parse_errors_name_the_problem():
    with pytest.raises(InvalidGraph, match="dangling src"):
        io.graph_from_json({"nodes": ["n0", "n1"], "arcs": [{"id": "a0", "src": "n5", "tgt": "n1"}]})
    with pytest.raises(InvalidGraph, match="duplicate arc id"):
        io.graph_from_json({"nodes": ["n0"], "arcs": [{"id": "a", "src": "n0", "tgt": "n0"}] * 2})
    with pytest.raises(io.ParseError):
        io.graph_from_json({"nodes": ["n0"]})


def test_morphism_with_path_references(tmp_path):
    write(tmp_path, "x.json", io.graph_to_json(path_graph(1)))
    m = {"dom": "x.json", "cod": "x.json", "node_map": {"n0": "n0", "n1": "n1"}, "arc_map": {"a0": "a0"}}
    f = io.load_morphism(write(tmp_path, "m.json", m))
    assert f == identity(path_graph(1))


# -- classify ----------------------------------------------------------------------

def test_classify_source_generator(capsys, files):
    code, rep, _ = run(capsys, "classify", files["s"], "--no-timing")
    v = rep["result"]["verdicts"]
    assert code == 0 and v["whiskering"]["holds"] and not v["surjecting"]["holds"]
    assert v["surjecting"]["witness"] == {"node": 0, "missing_arc": 0}


def test_classify_identity(capsys, files):
    _, rep, _ = run(capsys, "classify", files["id"], "--no-timing")
    assert all(v["holds"] for v in rep["result"]["verdicts"].values())


def test_classify_de_bruijn(capsys, files):
    _, rep, _ = run(capsys, "classify", files["de_bruijn"], "--no-timing")
    v = rep["result"]["verdicts"]
    assert v["covering"]["holds"]
    assert not v["acyclic"]["holds"] and v["acyclic"]["witness"]["part"] == "injectivity"


def test_classify_graph(capsys, files):
    _, rep, _ = run(capsys, "classify", files["p3"], "--no-timing")
    assert rep["result"]["rooted_tree"] == {"holds": True, "root": 0}


# -- factor -------------------------------------------------------------------------

def test_factor_fold(capsys, files, tmp_path):
    cert = tmp_path / "cert.json"
    code, rep, _ = run(capsys, "factor", "fold", files["fold"], "--no-timing", "--certificate-out", str(cert))
    assert code == 0
    assert len(rep["result"]["certificate"]["steps"]) == 1
    assert json.loads(cert.read_text()) == rep["result"]["certificate"]


def test_factor_ws_into_path(capsys, tmp_path):
    f = GraphMorphism(Graph.from_arcs(1), path_graph(2), [0], [])
    code, rep, _ = run(capsys, "factor", "ws", write(tmp_path, "f.json", io.morphism_to_json(f)), "--no-timing")
    assert code == 0 and rep["defects"] == []


def test_factor_model_empty_to_loop(capsys, files):
    code, rep, _ = run(capsys, "factor", "model", files["empty_to_loop"], "--no-timing", "--merge-bound", "1")
    assert code == 0
    assert rep["result"]["certificate"]["steps"] == [{"step": "add-cycle", "length": 1}]


def test_factor_truncated_exit_4(capsys, tmp_path):
    f = GraphMorphism(Graph.from_arcs(1), cycle_graph(1), [0], [])
    code, rep, _ = run(capsys, "factor", "ws", write(tmp_path, "f.json", io.morphism_to_json(f)),
                       "--depth", "3", "--no-timing")
    assert code == 4
    assert rep["defects"][0]["kind"] == "truncated-whisker"


# -- zeta and checks ------------------------------------------------------------------

def test_zeta_bouquet(capsys, files):
    _, rep, _ = run(capsys, "zeta", files["b2"], "--order", "5", "--no-timing")
    assert rep["result"]["zeta"]["coefficients"] == ["1", "2", "4", "8", "16", "32"]
    assert rep["result"]["euler_check"]["agrees"]


def test_zeta_acyclic_and_c3(capsys, files):
    _, rep, _ = run(capsys, "zeta", files["p3"], "--no-timing")
    assert set(rep["result"]["zeta"]["coefficients"][1:]) == {"0"}
    assert rep["result"]["census"] == {}
    _, rep, _ = run(capsys, "zeta", files["c3"], "--order", "7", "--primes", "6", "--no-timing")
    assert rep["result"]["zeta"]["coefficients"] == ["1", "0", "0", "1", "0", "0", "1", "0"]
    assert rep["result"]["census"] == {"3": "1"}


def test_check_covering_divides(capsys, files):
    code, rep, _ = run(capsys, "check", "covering-divides", files["wrap4_2"], "--no-timing")
    assert code == 0 and rep["result"]["verdict"]
    assert rep["result"]["quotient"] == ["1", "0", "1"]


def test_check_acyclic_zeta_on_whiskering(capsys, tmp_path, rng):
    w = random_whiskering(rng, bouquet(2))
    code, rep, _ = run(capsys, "check", "acyclic-zeta", write(tmp_path, "w.json", io.morphism_to_json(w)), "--no-timing")
    assert code == 0 and rep["result"]["verdict"]


def test_check_almost_isospectral(capsys, files):
    _, rep, _ = run(capsys, "check", "almost-isospectral", files["c2"], files["c3"], "--no-timing")
    assert rep["result"]["verdict"] is False


def test_precondition_exit_5(capsys, files):
    code, rep, _ = run(capsys, "check", "acyclic-zeta", files["de_bruijn"], "--no-timing")
    assert code == 5 and "Acyclic" in rep["error"]
    code, _, _ = run(capsys, "check", "covering-divides", files["s"], "--no-timing")
    assert code == 5


def test_parse_and_invariant_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run(capsys, "zeta", str(bad), "--no-timing")[0] == 2
    assert run(capsys, "zeta", str(tmp_path / "missing.json"), "--no-timing")[0] == 2
    dangling = write(tmp_path, "d.json", {"nodes": ["n0"], "arcs": [{"id": "a0", "src": "n0", "tgt": "n9"}]})
    code, rep, _ = run(capsys, "zeta", dangling, "--no-timing")
    assert code == 3 and "dangling tgt" in rep["error"]


# -- replay ---------------------------------------------------------------------------

def test_replay_fold_report(capsys, files):
    _, _, out = run(capsys, "factor", "fold", files["fold"], "--no-timing")
    report = files["fold"].replace("fold.json", "fold-report.json")
    with open(report, "w") as fh:
        fh.write(out)
    code, rep, _ = run(capsys, "replay", report, files["v"], "--no-timing")
    assert code == 0 and rep["result"]["match"]


def test_replay_tampered_order(capsys, tmp_path):
    two = coproduct([cycle_graph(1), cycle_graph(2)]).apex
    m = write(tmp_path, "m.json", io.morphism_to_json(from_empty(two)))
    cert = tmp_path / "cert.json"
    assert run(capsys, "factor", "model", m, "--no-timing", "--certificate-out", str(cert))[0] == 0
    dom = write(tmp_path, "empty.json", io.graph_to_json(Graph.from_arcs(0)))
    assert run(capsys, "replay", str(cert), dom, "--no-timing")[0] == 0
    obj = json.loads(cert.read_text())
    assert len(obj["steps"]) == 2
    obj["steps"].reverse()
    code, rep, _ = run(capsys, "replay", write(tmp_path, "t.json", obj), dom, "--no-timing")
    assert code == 6 and "digest" in rep["error"]


def test_replay_wrong_domain(capsys, files, tmp_path):
    cert = tmp_path / "c.json"
    run(capsys, "factor", "fold", files["bouquet4_2"], "--no-timing", "--certificate-out", str(cert))
    code, _, _ = run(capsys, "replay", str(cert), files["c3"], "--no-timing")
    assert code == 6


def test_replay_empty_certificate(capsys, files, tmp_path):
    cert = write(tmp_path, "e.json", {"kind": "fold", "steps": []})
    code, rep, _ = run(capsys, "replay", cert, files["b2"], "--no-timing")
    assert code == 0
    assert rep["result"]["mid"] == io.graph_to_json(bouquet(2))


# -- determinism and entry point --------------------------------------------------------

def test_reports_are_deterministic(capsys, files):
    for argv in (["classify", files["de_bruijn"]], ["factor", "model", files["two_loops"]],
                 ["zeta", files["b2"], "--order", "9"]):
        first = run(capsys, *argv, "--no-timing")[2]
        second = run(capsys, *argv, "--no-timing")[2]
        assert first == second


def test_timing_present_by_default(capsys, files):
    _, rep, _ = run(capsys, "zeta", files["c2"])
    assert rep["wall_time"] >= 0


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "gph.cli", "check", "covering-divides", files["s"], "--no-timing"],
                          capture_output=True, text=True)
    assert proc.returncode == 5
    assert proc.stderr.startswith("gph:")
    assert json.loads(proc.stdout)["exit_code"] == 5
