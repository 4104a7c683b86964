"""Run ledger persistence and restart behaviour."""

from __future__ import annotations

import json
import logging
from pathlib import Path

import pytest

from socialcentrality.models import PipelineConfig, PipelineRun, RunInfo, RunStatus
from socialcentrality.pipeline import RunLedger, load_ranked, run_bench, timing_line


def test_interrupted_runs_are_marked_failed_on_load(isolated_data_dir: Path) -> None:
    run = PipelineRun(
        id="run123",
        command="bench",
        seed=42,
        status=RunStatus.RUNNING,
        stage="peel",
        stage_detail="Halfway",
        timings={"generate": 1.5, "support": 2.0},
    )
    done = PipelineRun(id="run456", command="truss", status=RunStatus.COMPLETED, stage="completed")
    ledger_file = isolated_data_dir / "runs.json"
    ledger_file.parent.mkdir(parents=True, exist_ok=True)
    ledger_file.write_text(json.dumps([run.snapshot(), done.snapshot()]), encoding="utf-8")

    ledger = RunLedger(ledger_file)

    info = ledger.get("run123")
    assert info is not None
    assert info.status == RunStatus.FAILED
    assert info.stage == "failed"
    assert info.stage_detail == "Interrupted during peel"
    assert info.message == "Run did not finish"
    assert info.timings == {"generate": 1.5, "support": 2.0}
    assert info.total_seconds == pytest.approx(3.5)
    assert ledger.get("run456").status == RunStatus.COMPLETED

    persisted = json.loads(ledger_file.read_text(encoding="utf-8"))
    by_id = {item["id"]: item for item in persisted}
    assert by_id["run123"]["status"] == RunStatus.FAILED.value
    assert by_id["run456"]["status"] == RunStatus.COMPLETED.value


def test_corrupt_ledger_is_ignored_and_replaced(isolated_data_dir: Path, caplog) -> None:
    ledger_file = isolated_data_dir / "runs.json"
    ledger_file.parent.mkdir(parents=True, exist_ok=True)
    ledger_file.write_text("{not json", encoding="utf-8")

    with caplog.at_level(logging.WARNING):
        ledger = RunLedger(ledger_file)
    assert "corrupt run ledger" in caplog.text
    assert ledger.runs() == []

    with ledger.track("ingest") as run:
        pass

    persisted = json.loads(ledger_file.read_text(encoding="utf-8"))
    assert [item["id"] for item in persisted] == [run.id]
    assert persisted[0]["status"] == RunStatus.COMPLETED.value
    assert not ledger_file.with_suffix(".json.tmp").exists()


def test_failed_run_keeps_its_message(tmp_path: Path) -> None:
    ledger_file = tmp_path / "runs.json"
    ledger = RunLedger(ledger_file)

    with pytest.raises(ValueError):
        with ledger.track("centrality", seed=3) as run:
            with ledger.stage(run, "ingest"):
                raise ValueError("line 4: weight 'x' is not a number")

    info = RunLedger(ledger_file).get(run.id)
    assert info is not None
    assert info.status == RunStatus.FAILED
    assert info.seed == 3
    assert info.message == "line 4: weight 'x' is not a number"
    assert "ingest" in info.timings


def test_ledger_without_path_stays_in_memory(tmp_path: Path) -> None:
    ledger = RunLedger()

    with ledger.track("generate") as run:
        with ledger.stage(run, "generate"):
            pass

    assert [info.command for info in ledger.runs()] == ["generate"]
    assert list(tmp_path.iterdir()) == []


def test_snapshot_round_trip_keeps_timestamps() -> None:
    run = PipelineRun(id="abc", command="eval")
    run.record_timing("evaluate", 0.25)
    run.record_timing("evaluate", 0.5)

    restored = PipelineRun.from_snapshot(run.snapshot())

    assert restored.created_at == run.created_at
    assert restored.timings == {"evaluate": 0.75}
    assert RunInfo.from_run(restored).total_seconds == 0.75


def test_update_rejects_unknown_fields() -> None:
    run = PipelineRun(id="abc", command="eval")

    with pytest.raises(AttributeError):
        run.update(progress=0.5)


def test_bench_records_every_stage(tmp_path: Path) -> None:
    graph = tmp_path / "k4.tsv"
    graph.write_text("a b\na c\na d\nb c\nb d\nc d\n", encoding="utf-8")
    ledger = RunLedger()
    cfg = PipelineConfig(inputs=[graph])

    with ledger.track("bench") as run:
        summary = run_bench(ledger, run, cfg)
        line = timing_line(summary, run)

    assert (summary.n, summary.m, summary.max_level) == (4, 6, 4)
    assert summary.level_sizes == {4: 4}
    assert set(run.timings) == {"ingest", "support", "peel", "score"}
    assert line.startswith("n=4 m=6 T=4 ingest=")


def test_score_column_decides_ranking_direction(tmp_path: Path) -> None:
    constraint = tmp_path / "nc_run.csv"
    constraint.write_text("label,nc\na,0.2\nb,0.9\nc,inf\n", encoding="utf-8")
    social = tmp_path / "nc_like_name.csv"
    social.write_text("label,omega,beta,gamma,psi\na,1,1,1,4\nb,2,1,1,8\nc,3,1,1,12\n", encoding="utf-8")

    ranked = load_ranked(constraint)
    assert ranked.measure == "nc_run"
    assert ranked.ranks.tolist() == [1, 2, 3]

    assert load_ranked(social).ranks.tolist() == [3, 2, 1]


def test_config_validation(tmp_path: Path) -> None:
    existing = tmp_path / "g.tsv"
    existing.write_text("a b\n", encoding="utf-8")

    with pytest.raises(ValueError):
        PipelineConfig(inputs=[tmp_path / "missing.tsv"])
    with pytest.raises(ValueError):
        PipelineConfig(inputs=[existing], measures=["sc-com"])
    with pytest.raises(ValueError):
        PipelineConfig(inputs=[existing], ks=[0])
    with pytest.raises(ValueError):
        PipelineConfig(inputs=[existing], threads=0)
    with pytest.raises(ValueError):
        PipelineConfig(inputs=[existing], measures=["pagerank"])
