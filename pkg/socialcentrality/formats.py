"""Text file readers and writers for graphs, scores, rankings and reports."""

from __future__ import annotations

import csv
import logging
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, TextIO, Tuple

from . import config
from .graph import (
    IngestionError,
    MembershipRecord,
    WeightedGraph,
    build_from_edge_list,
    project_coauthorship,
    project_email,
)
from .utils import format_score

logger = logging.getLogger(__name__)


class InputMode(str, Enum):
    EDGE_LIST = "edge-list"
    COAUTHOR = "coauthor"
    EMAIL = "email"


def _split_fields(line: str) -> List[str]:
    """Tab-separated when the line has a tab, whitespace-separated otherwise."""

    if "\t" in line:
        return [part.strip() for part in line.split("\t")]
    return line.split()


def _data_lines(handle: TextIO) -> Iterator[Tuple[int, List[str]]]:
    for number, raw in enumerate(handle, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = _split_fields(raw.rstrip())
        if "" in fields:
            raise IngestionError(number, f"empty field in {line!r}")
        yield number, fields


def read_edge_list(path: Path) -> WeightedGraph:
    """Read ``labelA labelB [weight]`` lines; a lone label declares a node."""

    records: List[Tuple[str, ...]] = []
    lines: List[int] = []
    with Path(path).open("r", encoding="utf-8") as handle:
        for number, fields in _data_lines(handle):
            if len(fields) > 3:
                raise IngestionError(number, f"expected at most 3 fields, got {len(fields)}")
            records.append(tuple(fields))
            lines.append(number)
    return build_from_edge_list(records, line_numbers=lines)


def read_memberships(path: Path, mode: InputMode) -> List[MembershipRecord]:
    """Group ``itemId member`` (co-author) or ``emailId sender recipient`` lines by item."""

    members: Dict[str, List[str]] = {}
    senders: Dict[str, str] = {}
    first_line: Dict[str, int] = {}
    expected = 2 if mode is InputMode.COAUTHOR else 3
    with Path(path).open("r", encoding="utf-8") as handle:
        for number, fields in _data_lines(handle):
            if len(fields) != expected:
                raise IngestionError(number, f"expected {expected} fields, got {len(fields)}")
            item = fields[0]
            first_line.setdefault(item, number)
            if mode is InputMode.EMAIL:
                sender, member = fields[1], fields[2]
                known = senders.setdefault(item, sender)
                if known != sender:
                    raise IngestionError(
                        number, f"email {item!r} has conflicting senders {known!r} and {sender!r}"
                    )
            else:
                member = fields[1]
            bucket = members.setdefault(item, [])
            if member not in bucket:
                bucket.append(member)
    return [
        MembershipRecord(
            item_id=item,
            members=tuple(bucket),
            sender=senders.get(item),
            line=first_line[item],
        )
        for item, bucket in members.items()
    ]


def load_graph(path: Path, mode: InputMode = InputMode.EDGE_LIST) -> WeightedGraph:
    if mode is InputMode.EDGE_LIST:
        return read_edge_list(path)
    records = read_memberships(path, mode)
    if mode is InputMode.COAUTHOR:
        return project_coauthorship(records)
    return project_email(records)


def write_edge_list(graph: WeightedGraph, path: Path, header: Optional[str] = None) -> None:
    """Write tab-separated edges; isolated nodes appear as one-label lines."""

    labels = graph.labels
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        if header:
            handle.write(f"# {header}\n")
        for u, v, w in graph.edges():
            handle.write(f"{labels[u]}\t{labels[v]}\t{w!r}\n")
        for node in (graph.degrees == 0).nonzero()[0].tolist():
            handle.write(f"{labels[node]}\n")


def read_label_values(path: Path, columns: Sequence[str]) -> Dict[str, Tuple[float, ...]]:
    """Read a headed CSV keyed by ``label`` and return the requested numeric columns."""

    result: Dict[str, Tuple[float, ...]] = {}
    with Path(path).open("r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        missing = [name for name in ("label", *columns) if name not in (reader.fieldnames or [])]
        if missing:
            raise IngestionError(1, f"missing column(s): {', '.join(missing)}")
        for number, row in enumerate(reader, start=2):
            label = (row["label"] or "").strip()
            if not label:
                raise IngestionError(number, "empty label")
            try:
                result[label] = tuple(float(row[name]) for name in columns)
            except (TypeError, ValueError):
                raise IngestionError(number, f"non-numeric value in {dict(row)!r}") from None
    return result


def read_ground_truth(path: Path) -> Dict[str, float]:
    return {label: values[0] for label, values in read_label_values(path, ["value"]).items()}


def read_innate_potentials(path: Path) -> Dict[str, Tuple[float, float]]:
    rows = read_label_values(path, ["alpha", "delta"])
    return {label: (values[0], values[1]) for label, values in rows.items()}


def read_communities(path: Path) -> Dict[str, int]:
    """Read ``label community`` lines."""

    result: Dict[str, int] = {}
    with Path(path).open("r", encoding="utf-8") as handle:
        for number, fields in _data_lines(handle):
            if len(fields) != 2:
                raise IngestionError(number, f"expected 2 fields, got {len(fields)}")
            try:
                result[fields[0]] = int(fields[1])
            except ValueError:
                raise IngestionError(number, f"community id {fields[1]!r} is not an integer") from None
    return result


def read_scores(path: Path) -> Tuple[str, Dict[str, float]]:
    """Read a score CSV; the last column holds the score to rank by.

    Returns that column's header name and the scores keyed by label.
    """

    with Path(path).open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header or header[0] != "label" or len(header) < 2:
            raise IngestionError(1, "score file must start with a 'label,...' header")
        scores: Dict[str, float] = {}
        for number, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                scores[row[0]] = float(row[-1])
            except ValueError:
                raise IngestionError(number, f"score {row[-1]!r} is not a number") from None
    return header[-1], scores


def write_table(
    handle: TextIO,
    header: Sequence[str],
    rows: Sequence[Sequence[object]],
    delimiter: str = ",",
) -> None:
    writer = csv.writer(handle, delimiter=delimiter, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def score_rows(
    labels: Sequence[str], columns: Mapping[str, Sequence[float]]
) -> Tuple[List[str], List[List[str]]]:
    digits = config.SCORE_SIGNIFICANT_DIGITS
    header = ["label", *columns.keys()]
    rows = [
        [label, *(format_score(float(values[i]), digits) for values in columns.values())]
        for i, label in enumerate(labels)
    ]
    return header, rows
