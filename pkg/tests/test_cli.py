import json
import math
import subprocess
import sys

import numpy as np
import pytest

from degreeturn.bashift import generate_ba
from degreeturn.cli import main
from degreeturn.curves import DegreeCurve, read_curve, write_curve
from degreeturn.graph import build_graph, write_edge_list
from degreeturn.turnpoint import read_breaks

import synthetic


def _run(*argv):
    try:
        return main([str(a) for a in argv])
    except SystemExit as e:
        return e.code


@pytest.fixture
def tri(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text("a b\nb c\nc a\n")
    return p


def test_metrics_triangle(tmp_path, tri):
    out = tmp_path / "out"
    assert _run("metrics", "--edges", tri, "--out", out) == 0
    rows = (out / "summary.csv").read_text().splitlines()
    assert rows == ["nodes,edges,avg_degree,clustering,k_max,k_min", "3,3,2.0,1.0,2,2"]
    for name in ("ccdf", "ck", "knn", "knn_norm", "ks", "wk"):
        assert (out / f"{name}.csv").read_text().startswith("k,mean,count\n")
    assert (out / "id_map.csv").read_text().splitlines()[1:] == ["a,0", "b,1", "c,2"]
    assert (out / "tie_strength.csv").exists()
    man = json.loads((out / "manifest.json").read_text())
    assert man["command"] == "metrics" and str(tri) in man["inputs"]


def test_metrics_streaming_and_log_bins(tmp_path, tri):
    out = tmp_path / "o"
    assert _run("metrics", "--edges", tri, "--out", out, "--streaming", "--bins", "log:1.25",
                "--plot-script") == 0
    assert not (out / "tie_strength.csv").exists()
    assert (out / "ck.csv").read_text().startswith("k_lo,k_hi,mean,count\n")
    compile((out / "plot_curves.py").read_text(), "plot_curves.py", "exec")


def test_usage_and_input_errors(tmp_path, tri):
    assert _run() == 1
    assert _run("metrics", "--out", tmp_path) == 1
    assert _run("metrics", "--edges", tri, "--bins", "cubic", "--out", tmp_path) == 1
    assert _run("metrics", "--edges", tmp_path / "missing.txt", "--out", tmp_path) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3\n")
    assert _run("metrics", "--edges", bad, "--out", tmp_path) == 2
    assert _run("interactions", "--edges", tri, "--out", tmp_path) == 1
    assert _run("simulate", "--params", "1,2,3", "--out", tmp_path) == 1
    assert _run("simulate", "--params", "100,200,0,0,0,8,20", "--out", tmp_path) == 1


def _write_attrs(path, rows):
    lines = ["node_id,flag,gender,major,major2,dorm,year,highschool"]
    lines += [",".join(map(str, [nid] + list(r))) for nid, r in rows]
    path.write_text("\n".join(lines) + "\n")


def test_homophily_flat_cases(tmp_path):
    edges = tmp_path / "e.txt"
    edges.write_text("1 2\n2 3\n3 4\n4 1\n1 3\n")
    same, distinct = tmp_path / "same.csv", tmp_path / "distinct.csv"
    _write_attrs(same, [(v, [1] * 7) for v in range(1, 5)])
    _write_attrs(distinct, [(v, [v] * 7) for v in range(1, 5)])
    assert _run("homophily", "--edges", edges, "--attrs", same, "--out", tmp_path / "s") == 0
    assert np.all(read_curve(tmp_path / "s" / "hk.csv").mean == 0.0)
    assert _run("homophily", "--edges", edges, "--attrs", distinct, "--out", tmp_path / "d") == 0
    assert np.allclose(read_curve(tmp_path / "d" / "hk.csv").mean, math.sqrt(7), rtol=0, atol=1e-15)


def test_homophily_matches_oracle(tmp_path):
    rng = np.random.default_rng(3)
    g = generate_ba(40, 2, 3)
    edges = tmp_path / "e.txt"
    write_edge_list(g, edges)
    rows = rng.integers(0, 3, size=(40, 7))
    attrs = tmp_path / "a.csv"
    _write_attrs(attrs, [(v, rows[v]) for v in range(40)])
    assert _run("homophily", "--edges", edges, "--attrs", attrs, "--out", tmp_path / "o") == 0
    got = read_curve(tmp_path / "o" / "hk.csv")
    nbrs = {v: [] for v in range(40)}
    for a, b in g.edges().tolist():
        nbrs[a].append(b)
        nbrs[b].append(a)
    d = {v: np.mean([math.sqrt(int((rows[v] != rows[u]).sum())) for u in nbrs[v]]) for v in nbrs}
    by_k = {}
    for v in nbrs:
        by_k.setdefault(len(nbrs[v]), []).append(d[v])
    assert got.k_lo.tolist() == sorted(by_k)
    assert np.allclose(got.mean, [np.mean(by_k[k]) for k in sorted(by_k)], rtol=0, atol=1e-12)


def test_homophily_coverage_error_names_external_ids(tmp_path, capsys):
    edges = tmp_path / "e.txt"
    edges.write_text("x y\ny z\n")
    attrs = tmp_path / "a.csv"
    _write_attrs(attrs, [("x", [1] * 7)])
    assert _run("homophily", "--edges", edges, "--attrs", attrs, "--out", tmp_path) == 2
    err = capsys.readouterr().err
    assert "y" in err and "z" in err


def test_interactions(tmp_path):
    edges = tmp_path / "e.txt"
    edges.write_text("1 2\n3 4\n")
    wall = tmp_path / "wall.txt"
    wall.write_text("".join(f"{v} {v} 0\n" for v in range(1, 5)) + "9 1 0\n")
    ex = tmp_path / "ex.csv"
    ex.write_text("node_id,sent,received\n1,3,3\n2,0,5\n")
    assert _run("interactions", "--edges", edges, "--wall", wall, "--exchange", ex,
                "--out", tmp_path / "o") == 0
    lk = read_curve(tmp_path / "o" / "lk.csv")
    assert lk.mean.tolist() == [1.0] and lk.count.tolist() == [4]
    rk = read_curve(tmp_path / "o" / "rk.csv")
    assert rk.mean.tolist() == [1.0] and rk.count.tolist() == [1]
    man = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert man["wall_records_skipped"] == 1


def test_detect(tmp_path):
    k = synthetic.K
    flat = tmp_path / "flat.csv"
    write_curve(DegreeCurve.exact(k, np.full(k.size, 0.3), np.ones(k.size, dtype=int)), flat)
    seg = tmp_path / "seg.csv"
    write_curve(synthetic.two_segment(0), seg)
    assert _run("detect", flat, seg, "--transform", "log-log", "--out", tmp_path / "o") == 0
    reports = {r.name: r for r in read_breaks(tmp_path / "o" / "breaks.csv")}
    assert reports["flat"].significant is False
    assert 180 <= reports["seg"].k_T <= 220 and reports["seg"].significant
    last = (tmp_path / "o" / "breaks.csv").read_text().splitlines()[-1]
    assert last.startswith("consensus,") and last.endswith(",true")
    assert _run("detect", tmp_path / "nope.csv", "--out", tmp_path / "o") == 2


def test_simulate_identity_matches_ba(tmp_path):
    out = tmp_path / "sim"
    assert _run("simulate", "--params", "300,6,0,0,0,8,20", "--seed", 4, "--out", out) == 0
    g, _ = build_graph(out / "edges.txt")
    assert g == generate_ba(300, 2, 4)
    assert _run("ba", "--nodes", 300, "--m", 2, "--seed", 4, "--out", tmp_path / "ba") == 0
    assert (out / "edges.txt").read_bytes() == (tmp_path / "ba" / "edges.txt").read_bytes()


def test_simulate_nonconverged_exit(tmp_path):
    assert _run("simulate", "--params", "300,6,0,0.05,0,8,20", "--max-units", 5,
                "--out", tmp_path) == 3
    rows = (tmp_path / "evolution_log.csv").read_text().splitlines()
    assert rows[0] == "unit,added1,removed2,added3,avg_degree" and len(rows) == 6


def _tree(path):
    return {p.relative_to(path): p.read_bytes() for p in sorted(path.rglob("*"))
            if p.is_file() and p.name != "manifest.json"}


def test_simulate_deterministic_and_thread_independent(tmp_path):
    args = ["simulate", "--params", "400,6,0.01,0.002,0.01,8,25", "--seed", 7]
    assert _run(*args, "--out", tmp_path / "a", "--threads", 1) == 0
    assert _run(*args, "--out", tmp_path / "b", "--threads", 4) == 0
    a, b = _tree(tmp_path / "a"), _tree(tmp_path / "b")
    assert a and a == b


def test_metrics_thread_independent(tmp_path):
    edges = tmp_path / "e.txt"
    write_edge_list(generate_ba(3000, 4, 1), edges)
    assert _run("metrics", "--edges", edges, "--out", tmp_path / "a", "--threads", 1) == 0
    assert _run("metrics", "--edges", edges, "--out", tmp_path / "b", "--threads", 8) == 0
    assert _tree(tmp_path / "a") == _tree(tmp_path / "b")


def test_replay_reproduces_outputs(tmp_path, tri):
    out = tmp_path / "o"
    assert _run("metrics", "--edges", tri, "--out", out) == 0
    before = _tree(out)
    for p in out.iterdir():
        if p.name != "manifest.json":
            p.unlink()
    assert _run("--replay", out / "manifest.json") == 0
    assert _tree(out) == before


def test_curve_files_round_trip(tmp_path, tri):
    out = tmp_path / "o"
    assert _run("metrics", "--edges", tri, "--out", out, "--bins", "log:1.5") == 0
    for name in ("ccdf", "ck", "knn", "knn_norm", "ks", "wk"):
        p = out / f"{name}.csv"
        write_curve(read_curve(p), tmp_path / "again.csv")
        assert (tmp_path / "again.csv").read_bytes() == p.read_bytes()


def test_module_entry_point(tmp_path, tri):
    ok = subprocess.run([sys.executable, "-m", "degreeturn", "metrics", "--edges", str(tri),
                         "--out", str(tmp_path / "o")], capture_output=True)
    assert ok.returncode == 0
    bad = subprocess.run([sys.executable, "-m", "degreeturn", "frobnicate"], capture_output=True)
    assert bad.returncode == 1
