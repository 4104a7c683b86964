"""Markdown evaluation report."""

from __future__ import annotations

from typing import TYPE_CHECKING, List, Mapping, Optional, Sequence

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from . import config
from .evaluation import EVALUATION_HEADER, EvaluationRow, GroundTruth, RmseRounding, rank_matrix
from .models import RankedList

if TYPE_CHECKING:
    from .pipeline import GraphSummary

REPORT_TEMPLATE = "report.md.j2"


def _environment() -> Environment:
    return Environment(
        loader=FileSystemLoader(str(config.TEMPLATE_DIR)),
        autoescape=False,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
        undefined=StrictUndefined,
    )


def render_report(
    rows: Sequence[EvaluationRow],
    ranked: Sequence[RankedList],
    ground_truth: Mapping[str, float],
    ks: Sequence[int],
    rounding: RmseRounding = RmseRounding.NONE,
    summary: Optional["GraphSummary"] = None,
) -> str:
    """Render the evaluation table and the rank matrix of the top ground-truth actors."""

    actors: List[str] = []
    if ranked:
        roster = GroundTruth.for_labels(ranked[0].labels, ground_truth).roster_order()
        actors = roster[: max(ks)] if ks else roster
    matrix_header, matrix_rows = rank_matrix(ranked, actors=actors)
    template = _environment().get_template(REPORT_TEMPLATE)
    return template.render(
        summary=summary,
        header=EVALUATION_HEADER,
        rows=[row.as_row(rounding) for row in rows],
        rounding=rounding.value,
        matrix_header=matrix_header,
        matrix_rows=matrix_rows,
        top=len(actors),
    )
