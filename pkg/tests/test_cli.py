"""End-to-end command-line runs."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from socialcentrality import config
from socialcentrality.cli import main

TRIANGLE_WITH_TAIL = "a\tb\t1\nb\tc\t1\na\tc\t1\nc\td\t2\n"


@pytest.fixture
def triangle(tmp_path: Path) -> Path:
    path = tmp_path / "triangle.tsv"
    path.write_text(TRIANGLE_WITH_TAIL, encoding="utf-8")
    return path


def _rows(path: Path, delimiter: str = ","):
    with path.open(encoding="utf-8", newline="") as handle:
        return list(csv.reader(handle, delimiter=delimiter))


def test_centrality_writes_sc_columns(tmp_path: Path, triangle: Path) -> None:
    out = tmp_path / "scores"

    assert main(["centrality", "--measure", "sc", str(triangle), "--out-dir", str(out)]) == 0

    rows = _rows(out / "sc.csv")
    assert rows[0] == ["label", "omega", "beta", "gamma", "psi"]
    assert [row[0] for row in rows[1:]] == ["a", "b", "c", "d"]
    # a: omega 2, beta 1 + 2*3 + 4*3, gamma 1
    assert rows[1] == ["a", "2", "19", "1", "80"]


def test_every_measure_can_be_requested(tmp_path: Path, triangle: Path) -> None:
    out = tmp_path / "scores"
    argv = ["centrality", str(triangle), "--out-dir", str(out)]
    for measure in ("sc", "dc", "ec", "bc", "cc", "lc", "nc"):
        argv += ["--measure", measure]

    assert main(argv) == 0

    for measure in ("dc", "ec", "bc", "cc", "lc", "nc"):
        rows = _rows(out / f"{measure}.csv")
        assert rows[0] == ["label", measure]
        assert len(rows) == 5


def test_community_variant_needs_a_partition(tmp_path: Path, triangle: Path, capsys) -> None:
    out = tmp_path / "scores"

    assert main(["centrality", "--measure", "sc-com", str(triangle), "--out-dir", str(out)]) == 1
    assert "community file" in capsys.readouterr().err

    communities = tmp_path / "communities.txt"
    communities.write_text("a 0\nb 0\nc 0\nd 1\n", encoding="utf-8")
    argv = ["centrality", "--measure", "sc-com", str(triangle), "--communities", str(communities)]
    assert main([*argv, "--out-dir", str(out)]) == 0
    assert _rows(out / "sc-com.csv")[0] == ["label", "omega", "beta", "gamma", "psi"]


def test_unknown_measure_is_a_usage_error(triangle: Path) -> None:
    with pytest.raises(SystemExit) as excinfo:
        main(["centrality", "--measure", "pagerank", str(triangle)])
    assert excinfo.value.code == 2


def test_missing_input_exits_with_one(tmp_path: Path, capsys) -> None:
    assert main(["truss", str(tmp_path / "nope.tsv"), "--out-dir", str(tmp_path)]) == 1
    assert "does not exist" in capsys.readouterr().err


def test_malformed_input_names_the_line(tmp_path: Path, capsys) -> None:
    bad = tmp_path / "bad.tsv"
    bad.write_text("a b 1\nb c heavy\n", encoding="utf-8")

    assert main(["ingest", str(bad), "--out", str(tmp_path / "out.tsv")]) == 1
    assert "line 2" in capsys.readouterr().err


def test_truss_tables(tmp_path: Path, triangle: Path, capsys) -> None:
    assert main(["truss", str(triangle), "--out-dir", str(tmp_path)]) == 0

    assert _rows(tmp_path / "edges.tsv", "\t") == [
        ["labelA", "labelB", "t"],
        ["a", "b", "3"],
        ["a", "c", "3"],
        ["b", "c", "3"],
        ["c", "d", "2"],
    ]
    assert _rows(tmp_path / "nodes.tsv", "\t")[1:] == [["a", "3"], ["b", "3"], ["c", "3"], ["d", "2"]]
    out = capsys.readouterr().out
    assert "n=4 m=4 T=3" in out
    assert "level 2: 1 node(s)" in out


def test_thread_count_does_not_change_outputs(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.setattr(config, "SOURCE_CHUNK_SIZE", 4)
    monkeypatch.setattr(config, "EDGE_CHUNK_SIZE", 16)
    graph = tmp_path / "ws.tsv"
    assert main(["--seed", "5", "generate", "--model", "ws", "--n", "60", "--out", str(graph)]) == 0

    outputs = []
    for threads in ("1", "4"):
        out = tmp_path / f"t{threads}"
        argv = ["--threads", threads, "centrality", str(graph), "--out-dir", str(out)]
        for measure in ("sc", "bc", "cc"):
            argv += ["--measure", measure]
        assert main(argv) == 0
        outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})

    assert outputs[0] == outputs[1]


def test_generate_is_reproducible(tmp_path: Path) -> None:
    first, second = tmp_path / "a.tsv", tmp_path / "b.tsv"
    argv = ["--seed", "42", "generate", "--model", "ff", "--n", "200"]

    assert main([*argv, "--out", str(first)]) == 0
    assert main([*argv, "--out", str(second)]) == 0

    text = first.read_text(encoding="utf-8")
    assert text.startswith("# generator=ff n=200 ambs=4 fw=0.3 bw=0.2 seed=42 rng=PCG64\n")
    assert first.read_bytes() == second.read_bytes()


def test_rank_and_eval(tmp_path: Path, triangle: Path) -> None:
    scores = tmp_path / "scores"
    argv = ["centrality", str(triangle), "--out-dir", str(scores), "--measure", "sc", "--measure", "nc"]
    assert main(argv) == 0
    truth = tmp_path / "truth.csv"
    truth.write_text("label,value\nc,30\na,20\nb,20\nd,1\nghost,5\n", encoding="utf-8")

    matrix = tmp_path / "ranks.tsv"
    paths = [str(scores / "sc.csv"), str(scores / "nc.csv")]
    assert main(["rank", *paths, "--gt", str(truth), "--out", str(matrix)]) == 0
    rows = _rows(matrix, "\t")
    assert rows[0] == ["actor", "sc", "nc"]
    assert rows[1][:2] == ["c", "1"]
    assert rows[-1] == ["d", "4", "4"]

    report = tmp_path / "report.csv"
    markdown = tmp_path / "report.md"
    argv = ["eval", *paths, "--gt", str(truth), "--k", "2", "--k", "3", "--out", str(report)]
    assert main([*argv, "--report", str(markdown), "--graph", str(triangle)]) == 0
    rows = _rows(report)
    assert rows[0] == ["measure", "k", "rmse", "jaccard", "precision", "recall", "spearman"]
    assert [(row[0], row[1]) for row in rows[1:]] == [("sc", "2"), ("sc", "3"), ("nc", "2"), ("nc", "3")]
    text = markdown.read_text(encoding="utf-8")
    assert "| measure | k | rmse | jaccard | precision | recall | spearman |" in text
    assert "maximum trussness: 3" in text


def test_bench_prints_a_timing_line(capsys) -> None:
    assert main(["bench", "--model", "er", "--n", "300"]) == 0

    line = capsys.readouterr().out.strip()
    assert line.startswith("n=300 m=600 T=")
    for stage in ("generate=", "support=", "peel=", "score=", "total="):
        assert stage in line


def test_bench_json_and_ledger(tmp_path: Path, triangle: Path, capsys) -> None:
    ledger = tmp_path / "runs.json"

    assert main(["--ledger", str(ledger), "bench", str(triangle), "--json"]) == 0

    info = json.loads(capsys.readouterr().out)
    assert info["command"] == "bench"
    assert set(info["timings"]) == {"ingest", "support", "peel", "score"}
    persisted = json.loads(ledger.read_text(encoding="utf-8"))
    assert persisted[0]["status"] == "completed"


def test_bench_needs_exactly_one_source(triangle: Path) -> None:
    assert main(["bench"]) == 1
    assert main(["bench", str(triangle), "--model", "ws", "--n", "100"]) == 1


def test_fetch_defaults_to_the_data_directory(isolated_data_dir: Path, monkeypatch, capsys) -> None:
    calls = []

    def fake_fetch(url: str, out_dir: Path) -> Path:
        calls.append((url, out_dir))
        target = Path(out_dir) / "graph.tsv"
        target.write_text("a b\n", encoding="utf-8")
        return target

    monkeypatch.setattr("socialcentrality.cli.fetch", fake_fetch)

    assert main(["fetch", "https://example.org/graph.tsv"]) == 0
    assert calls == [("https://example.org/graph.tsv", config.DOWNLOAD_DIR)]
    assert str(config.DOWNLOAD_DIR / "graph.tsv") in capsys.readouterr().out
