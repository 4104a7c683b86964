"""Command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, List, Optional

from . import __version__, config
from .archive import unpack
from .baselines import DistanceConvention
from .centrality import Aggregator
from .evaluation import RmseRounding
from .fetch import fetch
from .formats import InputMode
from .generators import GeneratorModel, GeneratorSpec
from .models import Measure, PipelineConfig, PipelineRun, RunInfo
from .pipeline import (
    RunLedger,
    run_bench,
    run_centrality,
    run_eval,
    run_generate,
    run_ingest,
    run_rank,
    run_truss,
    timing_line,
)

Handler = Callable[[argparse.Namespace, RunLedger, PipelineRun], None]


def _config(args: argparse.Namespace, **fields) -> PipelineConfig:
    return PipelineConfig(threads=args.threads, seed=args.seed, **fields)


def _cmd_ingest(args: argparse.Namespace, ledger: RunLedger, run: PipelineRun) -> None:
    cfg = _config(args, inputs=[args.input], mode=args.mode)
    g = run_ingest(ledger, run, cfg, args.out)
    print(f"n={g.n} m={g.m} -> {args.out}")


def _cmd_truss(args: argparse.Namespace, ledger: RunLedger, run: PipelineRun) -> None:
    cfg = _config(args, inputs=[args.input], mode=args.mode, out_dir=args.out_dir)
    summary = run_truss(ledger, run, cfg)
    print("\n".join(summary.lines()))


def _cmd_centrality(args: argparse.Namespace, ledger: RunLedger, run: PipelineRun) -> None:
    cfg = _config(
        args,
        inputs=[args.input],
        mode=args.mode,
        measures=args.measure or [Measure.SC.value],
        sc_config=args.sc_config,
        communities=args.communities,
        out_dir=args.out_dir,
        distance=args.distance,
        aggregator=args.aggregator,
        coefficients=tuple(args.coefficients),
        weighted_degree=not args.unweighted_degree,
    )
    for path in run_centrality(ledger, run, cfg):
        print(path)


def _cmd_rank(args: argparse.Namespace, ledger: RunLedger, run: PipelineRun) -> None:
    with ledger.stage(run, "rank"):
        run_rank(args.scores, args.out, ground_truth=args.gt, cutoff=args.cutoff)
    print(args.out)


def _cmd_eval(args: argparse.Namespace, ledger: RunLedger, run: PipelineRun) -> None:
    cfg = _config(
        args,
        inputs=[args.graph] if args.graph is not None else [],
        mode=args.mode,
        ground_truth=args.gt,
        ks=args.k or [10],
    )
    run_eval(
        ledger,
        run,
        cfg,
        args.scores,
        args.out,
        report=args.report,
        rounding=RmseRounding(args.rmse_rounding),
    )
    print(args.out)


def _generator_spec(args: argparse.Namespace) -> GeneratorSpec:
    return GeneratorSpec(
        model=GeneratorModel(args.model),
        n=args.n,
        seed=args.seed,
        m=args.m,
        nei=args.nei,
        p=args.p,
        ambs=args.ambs,
        fw=args.fw,
        bw=args.bw,
    )


def _cmd_generate(args: argparse.Namespace, ledger: RunLedger, run: PipelineRun) -> None:
    g = run_generate(ledger, run, _generator_spec(args), args.out)
    print(f"n={g.n} m={g.m} -> {args.out}")


def _cmd_bench(args: argparse.Namespace, ledger: RunLedger, run: PipelineRun) -> None:
    if (args.input is None) == (args.model is None):
        raise ValueError("bench needs either an input file or --model, not both")
    if args.model is not None:
        if args.n is None:
            raise ValueError("--model needs --n")
        cfg = _config(args)
        summary = run_bench(ledger, run, cfg, spec=_generator_spec(args))
    else:
        cfg = _config(args, inputs=[args.input], mode=args.mode)
        summary = run_bench(ledger, run, cfg)
    if args.json:
        print(RunInfo.from_run(run).model_dump_json(indent=2))
    else:
        print(timing_line(summary, run))


def _cmd_fetch(args: argparse.Namespace, ledger: RunLedger, run: PipelineRun) -> None:
    if args.out_dir is None:
        config.ensure_data_dirs()
    out_dir = args.out_dir or config.DOWNLOAD_DIR
    with ledger.stage(run, "download", detail=args.url):
        path = fetch(args.url, out_dir)
    print(path)
    if args.unpack:
        target = args.extract_dir or config.EXTRACT_DIR / path.name.split(".")[0]
        with ledger.stage(run, "unpack", detail=str(target)):
            files = unpack(path, target)
        for item in files:
            print(item)


def _add_mode(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--mode",
        choices=[mode.value for mode in InputMode],
        default=InputMode.EDGE_LIST.value,
        help="input format: weighted edge list, paper-author lines or email-sender-recipient lines",
    )


def _add_generator(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument(
        "--model",
        choices=[model.value for model in GeneratorModel],
        required=required,
        help="er (Erdos-Renyi G(n,m)), ws (Watts-Strogatz) or ff (forest fire)",
    )
    parser.add_argument("--n", type=int, required=required, help="number of nodes")
    parser.add_argument("--m", type=int, default=None, help=f"ER edge count (default {config.ER_EDGES_PER_NODE}n)")
    parser.add_argument("--nei", type=int, default=config.WS_NEIGHBORHOOD, help="WS neighbors on each side")
    parser.add_argument("--p", type=float, default=config.WS_REWIRE_PROBABILITY, help="WS rewiring probability")
    parser.add_argument("--ambs", type=int, default=config.FF_AMBASSADORS, help="FF ambassadors per new node")
    parser.add_argument("--fw", type=float, default=config.FF_FORWARD_PROBABILITY, help="FF forward burning probability")
    parser.add_argument("--bw", type=float, default=config.FF_BACKWARD_FACTOR, help="FF backward burning factor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="socialcentrality",
        description="Social Centrality via k-truss decomposition, baseline centralities and evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for support counting, BC and CC")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="random seed")
    parser.add_argument("--ledger", type=Path, default=None, help="JSON file recording every run")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    ingest = sub.add_parser("ingest", help="normalise an input file into a weighted edge list")
    ingest.add_argument("input", type=Path)
    _add_mode(ingest)
    ingest.add_argument("--out", type=Path, required=True, help="edge list to write")
    ingest.set_defaults(handler=_cmd_ingest)

    truss = sub.add_parser("truss", help="edge and node trussness as TSV")
    truss.add_argument("input", type=Path)
    _add_mode(truss)
    truss.add_argument("--out-dir", type=Path, default=None, help="directory for edges.tsv and nodes.tsv")
    truss.set_defaults(handler=_cmd_truss)

    centrality = sub.add_parser("centrality", help="score nodes with one or more measures")
    centrality.add_argument("input", type=Path)
    _add_mode(centrality)
    centrality.add_argument(
        "--measure",
        action="append",
        choices=[measure.value for measure in Measure],
        help="measure to compute; repeat for several (default sc)",
    )
    centrality.add_argument("--sc-config", type=Path, default=None, help="CSV label,alpha,delta")
    centrality.add_argument("--communities", type=Path, default=None, help="label community lines (sc-com)")
    centrality.add_argument(
        "--aggregator",
        choices=[agg.value for agg in Aggregator],
        default=Aggregator.MULTIPLICATIVE.value,
        help="how sociability, bonding and bridging combine",
    )
    centrality.add_argument(
        "--coefficients",
        type=float,
        nargs=3,
        default=[1.0, 1.0, 1.0],
        metavar=("A", "B", "C"),
        help="weighted-sum coefficients",
    )
    centrality.add_argument(
        "--distance",
        choices=[conv.value for conv in DistanceConvention],
        default=DistanceConvention.RECIPROCAL.value,
        help="path length of an edge for BC and CC: 1/w or w",
    )
    centrality.add_argument("--unweighted-degree", action="store_true", help="DC counts neighbors")
    centrality.add_argument("--out-dir", type=Path, default=None, help="directory for <measure>.csv")
    centrality.set_defaults(handler=_cmd_centrality)

    rank = sub.add_parser("rank", help="rank matrix from score files")
    rank.add_argument("scores", type=Path, nargs="+", help="<measure>.csv files")
    rank.add_argument("--gt", type=Path, default=None, help="order actors by this ground truth")
    rank.add_argument("--cutoff", type=int, default=None, help="show ranks above this as '-'")
    rank.add_argument("--out", type=Path, required=True, help="TSV to write")
    rank.set_defaults(handler=_cmd_rank)

    evaluate = sub.add_parser("eval", help="compare score files against ground truth")
    evaluate.add_argument("scores", type=Path, nargs="+", help="<measure>.csv files")
    evaluate.add_argument("--gt", type=Path, required=True, help="CSV label,value")
    evaluate.add_argument("--k", type=int, action="append", help="top-k size; repeat for several (default 10)")
    evaluate.add_argument("--out", type=Path, required=True, help="CSV report to write")
    evaluate.add_argument("--report", type=Path, default=None, help="also write a markdown report")
    evaluate.add_argument("--graph", type=Path, default=None, help="graph to summarise in the report")
    _add_mode(evaluate)
    evaluate.add_argument(
        "--rmse-rounding",
        choices=[mode.value for mode in RmseRounding],
        default=RmseRounding.NONE.value,
        help="rounding applied to RMSE in the outputs",
    )
    evaluate.set_defaults(handler=_cmd_eval)

    generate = sub.add_parser("generate", help="write a synthetic graph")
    _add_generator(generate, required=True)
    generate.add_argument("--out", type=Path, required=True, help="edge list to write")
    generate.set_defaults(handler=_cmd_generate)

    bench = sub.add_parser("bench", help="time the SC pipeline stage by stage")
    bench.add_argument("input", type=Path, nargs="?", default=None)
    _add_mode(bench)
    _add_generator(bench, required=False)
    bench.add_argument("--json", action="store_true", help="print the run record as JSON")
    bench.set_defaults(handler=_cmd_bench)

    fetch_cmd = sub.add_parser("fetch", help="download a dataset, resuming partial files")
    fetch_cmd.add_argument("url")
    fetch_cmd.add_argument("--out-dir", type=Path, default=None, help="download directory")
    fetch_cmd.add_argument("--unpack", action="store_true", help="unpack .zip or .gz after download")
    fetch_cmd.add_argument("--extract-dir", type=Path, default=None, help="unpack target directory")
    fetch_cmd.set_defaults(handler=_cmd_fetch)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger("socialcentrality").setLevel(level)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    _configure_logging(args)
    handler: Handler = args.handler
    try:
        ledger = RunLedger(args.ledger)
        with ledger.track(args.command, seed=args.seed) as run:
            handler(args, ledger, run)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0

