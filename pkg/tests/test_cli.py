import json
import subprocess
import sys
from pathlib import Path

import pytest

from charnet.cli import DEFAULT_SEED, default_seed, main
from charnet.genmodels import gen_cl, gen_er, skewed_expected_degrees
from charnet.graph import load_edge_csv, read_graph, write_graph

from conftest import complete, disjoint_triangles

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def snapshot(directory):
    return {p.name: p.read_bytes() for p in sorted(Path(directory).iterdir())}


@pytest.fixture
def k3(tmp_path):
    path = tmp_path / "k3.csv"
    write_graph(complete(3), path)
    return path


def test_extract_fixture(tmp_path, capsys):
    nodes, edges = tmp_path / "nodes.csv", tmp_path / "edges.csv"
    code, out, _ = run(capsys, "extract", DATA / "fixture_text.txt", DATA / "fixture_aliases.csv",
                       "--out-nodes", nodes, "--out-edges", edges, "--gexf", tmp_path / "g.gexf")
    assert code == 0
    g = read_graph(edges, nodes)
    named = {frozenset((g.labels[u], g.labels[v])): w for (u, v), w in g.edges.items()}
    assert named == {frozenset(("Harry", "Ron")): 2.0, frozenset(("Harry", "Hermione")): 2.0,
                     frozenset(("Ron", "Moody")): 1.0}
    assert "Dobby" in g.labels
    assert out.splitlines()[0].startswith("Nodes,Edges,Avg. Degree")
    assert out.splitlines()[1].startswith("5,3,")
    assert (tmp_path / "g.gexf").read_text().startswith("<?xml")


def test_extract_distance_monotone(tmp_path, capsys):
    totals = []
    for d in (1, 15):
        edges = tmp_path / f"e{d}.csv"
        run(capsys, "extract", DATA / "fixture_text.txt", DATA / "fixture_aliases.csv", "--distance", d,
            "--out-nodes", tmp_path / f"n{d}.csv", "--out-edges", edges)
        totals.append(sum(read_graph(edges, tmp_path / f"n{d}.csv").edges.values()))
    assert totals[0] <= totals[1]


def test_missing_and_empty_aliases_exit_3(tmp_path, capsys):
    code, _, err = run(capsys, "extract", DATA / "fixture_text.txt", tmp_path / "none.csv",
                       "--out-nodes", tmp_path / "n.csv", "--out-edges", tmp_path / "e.csv")
    assert code == 3 and "charnet extract" in err
    (tmp_path / "empty.csv").write_text("")
    code, _, _ = run(capsys, "extract", DATA / "fixture_text.txt", tmp_path / "empty.csv",
                     "--out-nodes", tmp_path / "n.csv", "--out-edges", tmp_path / "e.csv")
    assert code == 3


def test_stats(k3, capsys):
    code, out, _ = run(capsys, "stats", k3)
    header, row = out.strip().splitlines()
    values = dict(zip(header.split(","), row.split(",")))
    assert code == 0 and values["Nodes"] == "3" and float(values["Clust. Coeff."]) == 1.0


def test_malformed_csv_exit_3(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("Source,Target,Weight\n0,0,1\n")
    assert run(capsys, "stats", bad)[0] == 3
    bad.write_text("a,b\n1,2\n")
    assert run(capsys, "analyze", bad, "--out-dir", tmp_path)[0] == 3


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["stats"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["select"])
    assert exc.value.code == 2


def test_analyze_k3(k3, tmp_path, capsys):
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "analyze", k3, "--out-dir", out_dir)
    assert code == 0
    rows = (out_dir / "pagerank.csv").read_text().splitlines()
    assert rows[0] == "Id,Label,Score" and len(rows) == 4
    assert all(abs(float(r.split(",")[2]) - 1 / 3) < 1e-9 for r in rows[1:])
    for m in ("weighted_degree", "closeness", "betweenness", "eigencentrality", "communities"):
        assert len((out_dir / f"{m}.csv").read_text().splitlines()) == 4
    assert len(out.splitlines()) == 5  # header, three characters, closeness note


def test_analyze_two_triangles(tmp_path, capsys):
    path = tmp_path / "tt.csv"
    write_graph(disjoint_triangles(), path)
    run(capsys, "analyze", path, "--out-dir", tmp_path / "o")
    rows = (tmp_path / "o" / "communities.csv").read_text().splitlines()[1:]
    assert len({r.split(",")[2] for r in rows}) == 2
    assert float((tmp_path / "o" / "modularity.txt").read_text()) == pytest.approx(0.5)


def test_generate_profile_spectrum(tmp_path, capsys):
    target = tmp_path / "t.csv"
    write_graph(gen_er(20, 0.3, 1), target)
    for model in ("pa", "er", "cl", "cfg"):
        assert run(capsys, "generate", "--model", model, "--match", target, "--count", 3,
                   "--out-dir", tmp_path / model)[0] == 0
        files = sorted((tmp_path / model).iterdir())
        assert [f.name for f in files] == [f"{model}_{i:03d}.csv" for i in range(3)]
        assert read_graph(files[0]).n <= 20
    code, out, _ = run(capsys, "profile", target)
    names, values = out.strip().splitlines()
    assert code == 0 and len(names.split(",")) == 20 and sum(map(int, values.split(",")[:4])) == 1140
    code, out, _ = run(capsys, "profile", target, "--mode", "profiles")
    assert len(out.splitlines()[0].split(",")) == 15
    code, out, _ = run(capsys, "spectrum", target)
    assert len(out.strip().splitlines()) == 21
    code, out, _ = run(capsys, "spectrum", target, "--histogram")
    assert sum(map(int, out.strip().splitlines()[1].split(","))) == 20


def test_select_report(tmp_path, capsys):
    target = tmp_path / "cl.csv"
    write_graph(gen_cl(skewed_expected_degrees(30, 8.0), 5), target)
    code, out, _ = run(capsys, "select", target, "--samples", 20, "--seed", 3,
                       "--out", tmp_path / "r.json", "--csv", tmp_path / "r.csv")
    assert code == 0
    report = json.loads((tmp_path / "r.json").read_text())
    assert set(report["classifiers"]) == {"SVM-l2", "SVM-l1", "Forest", "AdaBoost"}
    for entry in report["classifiers"].values():
        assert set(entry["scores"]) == {"PA", "CL", "ER", "CFG"}
    assert set(report["holdout"]["Forest"]) >= {"PA", "CL", "ER", "CFG", "macro"}
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == "Classifier,PA,CL,ER,CFG,Selected" and len(lines) == 5
    assert all(line.count("*") == 1 for line in lines[1:])
    assert out == (tmp_path / "r.csv").read_text()


def test_select_too_small_and_bad_path(tmp_path, capsys):
    small = tmp_path / "s.csv"
    write_graph(complete(4), small)
    assert run(capsys, "select", small, "--out", tmp_path / "r.json")[0] == 3
    assert run(capsys, "select", tmp_path / "missing.csv", "--out", tmp_path / "r.json")[0] == 3


def test_select_batch_counts(tmp_path, capsys):
    batch = tmp_path / "batch"
    batch.mkdir()
    for i in range(10):
        write_graph(gen_er(12, 0.4, i), batch / f"er_{i}.csv")
    code, out, _ = run(capsys, "select", "--batch", batch, "--samples", 10, "--out", tmp_path / "agg.csv",
                       "--csv", tmp_path / "per_file.csv")
    assert code == 0
    agg = (tmp_path / "agg.csv").read_text().splitlines()
    assert agg[0] == "Classifier,PA,CL,ER,CFG"
    for row in agg[1:]:
        assert sum(map(int, row.split(",")[1:])) == 10
    assert len((tmp_path / "per_file.csv").read_text().splitlines()) == 11


def test_reruns_are_byte_identical(tmp_path, capsys):
    target = tmp_path / "t.csv"
    write_graph(gen_er(15, 0.35, 2), target)
    outputs = []
    for rep in range(2):
        d = tmp_path / f"run{rep}"
        streams = []
        for argv in (
            ["stats", target], ["analyze", target, "--out-dir", d / "an"],
            ["generate", "--model", "cl", "--match", target, "--count", 2, "--out-dir", d / "gen"],
            ["profile", target], ["spectrum", target],
            ["select", target, "--samples", 10, "--out", d / "r.json", "--csv", d / "r.csv"],
        ):
            streams.append(run(capsys, *argv)[1])
        outputs.append((streams, snapshot(d / "an"), snapshot(d / "gen"),
                        (d / "r.json").read_bytes(), (d / "r.csv").read_bytes()))
    assert outputs[0] == outputs[1]


def test_emitted_csvs_reparse(tmp_path, capsys):
    nodes, edges = tmp_path / "n.csv", tmp_path / "e.csv"
    run(capsys, "extract", DATA / "fixture_text.txt", DATA / "fixture_aliases.csv",
        "--out-nodes", nodes, "--out-edges", edges)
    g = load_edge_csv(nodes.read_text(), edges.read_text())
    write_graph(g, tmp_path / "again_e.csv", tmp_path / "again_n.csv")
    assert (tmp_path / "again_e.csv").read_bytes() == edges.read_bytes()
    run(capsys, "generate", "--model", "pa", "--match", edges, "--nodes", nodes, "--count", 1,
        "--out-dir", tmp_path / "gen")
    assert read_graph(tmp_path / "gen" / "pa_000.csv").edge_count > 0


def test_seed_environment_override(monkeypatch):
    monkeypatch.delenv("CHARNET_SEED", raising=False)
    assert default_seed() == DEFAULT_SEED
    monkeypatch.setenv("CHARNET_SEED", "77")
    assert default_seed() == 77


def test_console_entry_point(k3):
    proc = subprocess.run([sys.executable, "-m", "charnet.cli", "stats", str(k3)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("Nodes,")
