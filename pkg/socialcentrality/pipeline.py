"""Batch pipeline stages and the persistent run ledger."""

from __future__ import annotations

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple
from uuid import uuid4

import numpy as np

from . import baselines, config
from .centrality import Aggregator, CommunityAssignment, SCConfig, sc_com_score, sc_score
from .evaluation import (
    EVALUATION_HEADER,
    EvaluationRow,
    GroundTruth,
    RmseRounding,
    evaluate,
    rank_matrix,
    rank_scores,
)
from .formats import (
    InputMode,
    load_graph,
    read_communities,
    read_ground_truth,
    read_innate_potentials,
    read_scores,
    score_rows,
    write_edge_list,
    write_table,
)
from .generators import GeneratorSpec, generate
from .graph import WeightedGraph
from .models import (
    CentralityVector,
    Measure,
    PipelineConfig,
    PipelineRun,
    RankedList,
    RunInfo,
    RunStatus,
    orientation_for,
)
from .report import render_report
from .truss import TrussDecomposition, decomposition_from_support, edge_support, hierarchy_levels

logger = logging.getLogger(__name__)


class RunLedger:
    """Keeps one record per CLI invocation, optionally persisted as JSON.

    Records that were still pending or running when the ledger was last
    written are marked failed on load.
    """

    def __init__(self, path: Optional[Path] = None) -> None:
        self._path = Path(path) if path is not None else None
        self._runs: Dict[str, PipelineRun] = {}
        self._load()

    @property
    def path(self) -> Optional[Path]:
        return self._path

    def runs(self) -> List[RunInfo]:
        return [RunInfo.from_run(run) for run in self._runs.values()]

    def get(self, run_id: str) -> Optional[RunInfo]:
        run = self._runs.get(run_id)
        return None if run is None else RunInfo.from_run(run)

    def start(self, command: str, seed: int = config.DEFAULT_SEED) -> PipelineRun:
        run = PipelineRun(id=uuid4().hex, command=command, seed=seed)
        run.set_stage("started", RunStatus.RUNNING)
        self._runs[run.id] = run
        self.persist()
        return run

    @contextmanager
    def track(self, command: str, seed: int = config.DEFAULT_SEED) -> Iterator[PipelineRun]:
        run = self.start(command, seed)
        try:
            yield run
        except Exception as exc:
            if isinstance(exc, (OSError, ValueError, RuntimeError)):
                logger.error("Run %s (%s) failed: %s", run.id, command, exc)
            else:
                logger.exception("Run %s (%s) failed", run.id, command)
            run.set_stage("failed", RunStatus.FAILED, detail=str(exc))
            run.update(message=str(exc))
            self.persist()
            raise
        run.set_stage("completed", RunStatus.COMPLETED)
        self.persist()

    @contextmanager
    def stage(self, run: PipelineRun, name: str, detail: Optional[str] = None) -> Iterator[None]:
        run.set_stage(name, detail=detail)
        self.persist()
        started = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - started
            run.record_timing(name, elapsed)
            logger.info("Stage %s finished in %.3fs", name, elapsed)

    def persist(self) -> None:
        if self._path is None:
            return
        snapshots = [run.snapshot() for run in self._runs.values()]
        try:
            self._write_file(snapshots)
        except OSError as exc:
            logger.error("Failed to persist run ledger %s: %s", self._path, exc)

    def _load(self) -> None:
        if self._path is None or not self._path.exists():
            return
        try:
            raw = self._path.read_text(encoding="utf-8")
        except OSError as exc:
            logger.warning("Unable to read run ledger %s: %s", self._path, exc)
            return
        try:
            data = json.loads(raw)
        except json.JSONDecodeError:
            logger.warning("Ignoring corrupt run ledger %s", self._path)
            return
        if not isinstance(data, list):
            logger.warning("Unexpected run ledger format in %s", self._path)
            return
        dirty = False
        for item in data:
            try:
                run = PipelineRun.from_snapshot(item)
            except (KeyError, TypeError, ValueError):
                logger.warning("Skipping unreadable run record in %s", self._path)
                dirty = True
                continue
            self._runs[run.id] = run
            if run.status in {RunStatus.COMPLETED, RunStatus.FAILED}:
                continue
            run.set_stage("failed", RunStatus.FAILED, detail=f"Interrupted during {run.stage}")
            run.update(message="Run did not finish")
            dirty = True
        if dirty:
            self.persist()

    def _write_file(self, snapshots: List[Dict[str, Any]]) -> None:
        assert self._path is not None
        self._path.parent.mkdir(parents=True, exist_ok=True)
        tmp_file = self._path.with_suffix(self._path.suffix + ".tmp")
        with tmp_file.open("w", encoding="utf-8") as handle:
            json.dump(snapshots, handle, indent=2, sort_keys=True)
        tmp_file.replace(self._path)


@dataclass(frozen=True)
class GraphSummary:
    n: int
    m: int
    max_level: int
    level_sizes: Dict[int, int]

    @classmethod
    def from_decomposition(cls, d: TrussDecomposition) -> "GraphSummary":
        return cls(
            n=d.graph.n,
            m=d.graph.m,
            max_level=d.max_level,
            level_sizes=hierarchy_levels(d).sizes(),
        )

    def lines(self) -> List[str]:
        head = f"n={self.n} m={self.m} T={self.max_level}"
        levels = [f"level {value}: {size} node(s)" for value, size in sorted(self.level_sizes.items())]
        return [head, *levels]


def _single_input(cfg: PipelineConfig) -> Path:
    if len(cfg.inputs) != 1:
        raise ValueError(f"expected exactly one input file, got {len(cfg.inputs)}")
    return cfg.inputs[0]


def _out_dir(cfg: PipelineConfig) -> Path:
    out_dir = cfg.out_dir if cfg.out_dir is not None else Path.cwd()
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def _decompose(ledger: RunLedger, run: PipelineRun, g: WeightedGraph, workers: int) -> TrussDecomposition:
    with ledger.stage(run, "support"):
        support = edge_support(g, workers=workers)
    with ledger.stage(run, "peel"):
        return decomposition_from_support(g, support)


def load_input(ledger: RunLedger, run: PipelineRun, cfg: PipelineConfig) -> WeightedGraph:
    path = _single_input(cfg)
    with ledger.stage(run, "ingest", detail=str(path)):
        return load_graph(path, InputMode(cfg.mode))


def run_ingest(ledger: RunLedger, run: PipelineRun, cfg: PipelineConfig, out: Path) -> WeightedGraph:
    """Normalise an input file into a canonical weighted edge list."""

    g = load_input(ledger, run, cfg)
    with ledger.stage(run, "write"):
        write_edge_list(g, out)
    return g


def run_truss(ledger: RunLedger, run: PipelineRun, cfg: PipelineConfig) -> GraphSummary:
    """Write ``edges.tsv`` (``labelA labelB t``) and ``nodes.tsv`` (``label tau``)."""

    g = load_input(ledger, run, cfg)
    d = _decompose(ledger, run, g, cfg.threads)
    out_dir = _out_dir(cfg)
    labels = g.labels
    with ledger.stage(run, "write"):
        with (out_dir / "edges.tsv").open("w", encoding="utf-8", newline="") as handle:
            rows = [
                [labels[u], labels[v], t]
                for (u, v, _), t in zip(g.edges(), d.edge_truss.tolist())
            ]
            write_table(handle, ["labelA", "labelB", "t"], rows, delimiter="\t")
        with (out_dir / "nodes.tsv").open("w", encoding="utf-8", newline="") as handle:
            rows = [[label, tau] for label, tau in zip(labels, d.node_truss.tolist())]
            write_table(handle, ["label", "tau"], rows, delimiter="\t")
    return GraphSummary.from_decomposition(d)


def _sc_config(g: WeightedGraph, cfg: PipelineConfig) -> SCConfig:
    options = {"aggregator": Aggregator(cfg.aggregator), "coefficients": tuple(cfg.coefficients)}
    if cfg.sc_config is None:
        return SCConfig(**options)
    return SCConfig.from_potentials(g, read_innate_potentials(cfg.sc_config), **options)


def compute_measures(
    ledger: RunLedger, run: PipelineRun, cfg: PipelineConfig, g: WeightedGraph
) -> Dict[Measure, Tuple[CentralityVector, Dict[str, Sequence[float]]]]:
    """Score every requested measure; returns the vector and its output columns."""

    results: Dict[Measure, Tuple[CentralityVector, Dict[str, Sequence[float]]]] = {}
    d: Optional[TrussDecomposition] = None
    if Measure.SC in cfg.measures or Measure.SC_COM in cfg.measures:
        d = _decompose(ledger, run, g, cfg.threads)
    conv = baselines.DistanceConvention(cfg.distance)
    for measure in dict.fromkeys(cfg.measures):
        with ledger.stage(run, f"score:{measure.value}"):
            if measure in (Measure.SC, Measure.SC_COM):
                sc_cfg = _sc_config(g, cfg)
                if measure is Measure.SC:
                    scores = sc_score(g, d, sc_cfg)
                else:
                    assert cfg.communities is not None
                    communities = CommunityAssignment.from_mapping(g, read_communities(cfg.communities))
                    scores = sc_com_score(g, communities, sc_cfg, d)
                vector = scores.as_vector(measure.value)
                columns = {"omega": scores.omega, "beta": scores.beta, "gamma": scores.gamma, "psi": scores.psi}
            else:
                vector = _baseline(g, measure, conv, cfg)
                columns = {measure.value: vector.scores}
        results[measure] = (vector, columns)
    return results


def _baseline(
    g: WeightedGraph, measure: Measure, conv: baselines.DistanceConvention, cfg: PipelineConfig
) -> CentralityVector:
    if measure is Measure.DC:
        return baselines.degree_centrality(g, weighted=cfg.weighted_degree)
    if measure is Measure.EC:
        return baselines.eigenvector_centrality(g)
    if measure is Measure.BC:
        return baselines.betweenness_centrality(g, conv, workers=cfg.threads)
    if measure is Measure.CC:
        return baselines.closeness_centrality(g, conv, workers=cfg.threads)
    if measure is Measure.LC:
        return baselines.laplacian_centrality(g)
    return baselines.network_constraint(g)


def run_centrality(ledger: RunLedger, run: PipelineRun, cfg: PipelineConfig) -> List[Path]:
    """Write ``<measure>.csv`` per requested measure into the output directory."""

    g = load_input(ledger, run, cfg)
    results = compute_measures(ledger, run, cfg, g)
    out_dir = _out_dir(cfg)
    written = []
    with ledger.stage(run, "write"):
        for measure, (_, columns) in results.items():
            path = out_dir / f"{measure.value}.csv"
            header, rows = score_rows(g.labels, columns)
            with path.open("w", encoding="utf-8", newline="") as handle:
                write_table(handle, header, rows)
            written.append(path)
    return written


def load_ranked(path: Path) -> RankedList:
    """Rank a score file named after its stem.

    Orientation follows the score column when it names a known measure
    (``label,nc``), otherwise the file stem.
    """

    column, scores = read_scores(path)
    measure = Path(path).stem
    known = {item.value for item in Measure}
    orientation = orientation_for(column if column in known else measure)
    vector = CentralityVector(
        measure=measure,
        labels=tuple(scores),
        scores=np.fromiter(scores.values(), dtype=np.float64, count=len(scores)),
        higher_is_better=orientation,
    )
    return rank_scores(vector)


def run_rank(
    score_paths: Sequence[Path],
    out: Path,
    ground_truth: Optional[Path] = None,
    cutoff: Optional[int] = None,
) -> Tuple[List[str], List[List[str]]]:
    """Write an actor-by-measure rank matrix as TSV.

    Actors follow the ground-truth order when a ground-truth file is given,
    otherwise the first measure's order.
    """

    ranked = [load_ranked(path) for path in score_paths]
    actors = None
    if ground_truth is not None:
        actors = GroundTruth.for_labels(ranked[0].labels, read_ground_truth(ground_truth)).roster_order()
    header, rows = rank_matrix(ranked, actors=actors, cutoff=cutoff)
    with Path(out).open("w", encoding="utf-8", newline="") as handle:
        write_table(handle, header, rows, delimiter="\t")
    return header, rows


def run_eval(
    ledger: RunLedger,
    run: PipelineRun,
    cfg: PipelineConfig,
    score_paths: Sequence[Path],
    out: Path,
    report: Optional[Path] = None,
    rounding: RmseRounding = RmseRounding.NONE,
) -> List[EvaluationRow]:
    """Score ranked measures against ground truth and write the CSV report."""

    if cfg.ground_truth is None:
        raise ValueError("evaluation needs a ground-truth file")
    values = read_ground_truth(cfg.ground_truth)
    rows: List[EvaluationRow] = []
    ranked: List[RankedList] = []
    with ledger.stage(run, "evaluate"):
        for path in score_paths:
            r = load_ranked(path)
            ranked.append(r)
            rows.extend(evaluate(GroundTruth.for_labels(r.labels, values), [r], cfg.ks))
    with Path(out).open("w", encoding="utf-8", newline="") as handle:
        write_table(handle, EVALUATION_HEADER, [row.as_row(rounding) for row in rows])
    if report is not None:
        summary = None
        if cfg.inputs:
            g = load_input(ledger, run, cfg)
            summary = GraphSummary.from_decomposition(_decompose(ledger, run, g, cfg.threads))
        with ledger.stage(run, "report"):
            text = render_report(
                rows=rows,
                ranked=ranked,
                ground_truth=values,
                ks=cfg.ks,
                rounding=rounding,
                summary=summary,
            )
            Path(report).write_text(text, encoding="utf-8")
    return rows


def run_generate(ledger: RunLedger, run: PipelineRun, spec: GeneratorSpec, out: Path) -> WeightedGraph:
    with ledger.stage(run, "generate", detail=spec.describe()):
        g = generate(spec)
    with ledger.stage(run, "write"):
        write_edge_list(g, out, header=spec.describe())
    return g


def run_bench(
    ledger: RunLedger,
    run: PipelineRun,
    cfg: PipelineConfig,
    spec: Optional[GeneratorSpec] = None,
) -> GraphSummary:
    """Time the full SC pipeline: generate or ingest, support, peel, score."""

    if spec is not None:
        with ledger.stage(run, "generate", detail=spec.describe()):
            g = generate(spec)
    else:
        g = load_input(ledger, run, cfg)
    d = _decompose(ledger, run, g, cfg.threads)
    with ledger.stage(run, "score"):
        sc_score(g, d, _sc_config(g, cfg))
    return GraphSummary.from_decomposition(d)


def timing_line(summary: GraphSummary, run: PipelineRun) -> str:
    info = RunInfo.from_run(run)
    stages = " ".join(f"{name}={seconds:.3f}s" for name, seconds in info.timings.items())
    return f"n={summary.n} m={summary.m} T={summary.max_level} {stages} total={info.total_seconds:.3f}s"
