"""Immutable weighted graph model and ingestion.

Nodes are dense integer ids assigned in first-seen label order. Storage is
CSR: ``indptr``/``indices``/``weights`` hold both directions of every edge
with each row sorted by neighbor id, and ``edge_ids`` maps every CSR slot to
the canonical edge id. Canonical edges ``(edge_u[e], edge_v[e])`` satisfy
``edge_u < edge_v`` and are numbered in ``(u, v)`` lexicographic order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

EdgeRecord = Union[Tuple[str, str], Tuple[str, str, float]]


class IngestionError(ValueError):
    """Raised for malformed input records; ``line`` is 1-based."""

    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Simple undirected graph with strictly positive edge weights."""

    labels: Tuple[str, ...]
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    edge_ids: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_w: np.ndarray

    def __post_init__(self) -> None:
        for array in (
            self.indptr,
            self.indices,
            self.weights,
            self.edge_ids,
            self.edge_u,
            self.edge_v,
            self.edge_w,
        ):
            array.setflags(write=False)

    @classmethod
    def from_canonical_edges(
        cls,
        labels: Sequence[str],
        edge_u: np.ndarray,
        edge_v: np.ndarray,
        edge_w: np.ndarray,
    ) -> "WeightedGraph":
        """Build from unique ``u < v`` edges with positive weights (any order)."""

        n = len(labels)
        u = np.asarray(edge_u, dtype=np.int64)
        v = np.asarray(edge_v, dtype=np.int64)
        w = np.asarray(edge_w, dtype=np.float64)
        if not (len(u) == len(v) == len(w)):
            raise ValueError("edge arrays must have equal length")
        if len(u):
            if np.any(u >= v):
                raise ValueError("canonical edges require edge_u < edge_v")
            if u.min() < 0 or v.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(w <= 0) or not np.all(np.isfinite(w)):
                raise ValueError("edge weights must be finite and strictly positive")
        order = np.lexsort((v, u))
        u, v, w = u[order], v[order], w[order]
        if len(u) > 1:
            dup = (u[1:] == u[:-1]) & (v[1:] == v[:-1])
            if np.any(dup):
                raise ValueError("duplicate edges; coalesce before building")
        m = len(u)
        ids = np.arange(m, dtype=np.int64)
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        slot_w = np.concatenate([w, w])
        slot_e = np.concatenate([ids, ids])
        perm = np.lexsort((dst, src))
        counts = np.bincount(src, minlength=n) if m else np.zeros(n, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(
            labels=tuple(labels),
            indptr=indptr,
            indices=dst[perm],
            weights=slot_w[perm],
            edge_ids=slot_e[perm],
            edge_u=u,
            edge_v=v,
            edge_w=w,
        )

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edge_u)

    @cached_property
    def label_index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.diff(self.indptr)
        deg.setflags(write=False)
        return deg

    @cached_property
    def strength(self) -> np.ndarray:
        """Sum of incident edge weights per node."""

        values = self.row_sums(self.weights)
        values.setflags(write=False)
        return values

    def row_sums(self, slot_values: np.ndarray) -> np.ndarray:
        """Per-node sum of values aligned with CSR slots, in ascending neighbor order."""

        out = np.zeros(self.n, dtype=np.float64)
        nonempty = self.degrees > 0
        if np.any(nonempty):
            out[nonempty] = np.add.reduceat(
                np.asarray(slot_values, dtype=np.float64), self.indptr[:-1][nonempty]
            )
        return out

    def node_id(self, label: str) -> int:
        try:
            return self.label_index[label.strip()]
        except KeyError:
            raise KeyError(f"Unknown node label {label!r}") from None

    def label(self, i: int) -> str:
        self._check_node(i)
        return self.labels[i]

    def neighbors(self, i: int) -> List[Tuple[int, float]]:
        """Neighbors of ``i`` with edge weights, sorted by neighbor id."""

        self._check_node(i)
        start, end = self.indptr[i], self.indptr[i + 1]
        return list(zip(self.indices[start:end].tolist(), self.weights[start:end].tolist()))

    def edge_id(self, i: int, j: int) -> Optional[int]:
        self._check_node(i)
        self._check_node(j)
        start, end = self.indptr[i], self.indptr[i + 1]
        row = self.indices[start:end]
        pos = int(np.searchsorted(row, j))
        if pos < len(row) and row[pos] == j:
            return int(self.edge_ids[start + pos])
        return None

    def weight(self, i: int, j: int) -> float:
        edge = self.edge_id(i, j)
        return 0.0 if edge is None else float(self.edge_w[edge])

    def edges(self) -> Iterator[Tuple[int, int, float]]:
        yield from zip(self.edge_u.tolist(), self.edge_v.tolist(), self.edge_w.tolist())

    def scale_weights(self, factor: float) -> "WeightedGraph":
        if not factor > 0:
            raise ValueError("scale factor must be positive")
        return WeightedGraph.from_canonical_edges(
            self.labels, self.edge_u, self.edge_v, self.edge_w * factor
        )

    def _check_node(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise IndexError(f"node id {i} out of range [0, {self.n})")


@dataclass(frozen=True)
class MembershipRecord:
    """One paper (author list) or one email (sender plus recipients).

    ``members`` are the authors, or the recipients when ``sender`` is set.
    """

    item_id: str
    members: Tuple[str, ...]
    sender: Optional[str] = None
    line: int = 0

    def __post_init__(self) -> None:
        if not self.members:
            raise IngestionError(self.line, f"item {self.item_id!r} has no members")
        if len(set(self.members)) != len(self.members):
            raise IngestionError(self.line, f"item {self.item_id!r} lists a member twice")


@dataclass
class _EdgeAccumulator:
    """Collects labelled weight contributions and coalesces them by summing."""

    label_index: Dict[str, int] = field(default_factory=dict)
    labels: List[str] = field(default_factory=list)
    contributions: Dict[Tuple[int, int], List[float]] = field(default_factory=dict)
    self_loops: int = 0
    zero_weight: int = 0

    def node(self, label: str) -> int:
        node = self.label_index.get(label)
        if node is None:
            node = len(self.labels)
            self.label_index[label] = node
            self.labels.append(label)
        return node

    def add(self, a: str, b: str, weight: float) -> None:
        i, j = self.node(a), self.node(b)
        if i == j:
            self.self_loops += 1
            return
        if weight == 0:
            self.zero_weight += 1
            return
        key = (i, j) if i < j else (j, i)
        self.contributions.setdefault(key, []).append(weight)

    def build(self) -> WeightedGraph:
        if self.self_loops:
            logger.warning("Dropped %d self-loop record(s)", self.self_loops)
        if self.zero_weight:
            logger.warning("Dropped %d zero-weight record(s)", self.zero_weight)
        m = len(self.contributions)
        us = np.empty(m, dtype=np.int64)
        vs = np.empty(m, dtype=np.int64)
        ws = np.empty(m, dtype=np.float64)
        for idx, ((i, j), parts) in enumerate(self.contributions.items()):
            us[idx] = i
            vs[idx] = j
            # fsum is exact, so coalescing is independent of record order
            ws[idx] = math.fsum(parts)
        graph = WeightedGraph.from_canonical_edges(self.labels, us, vs, ws)
        logger.info("Built graph with n=%d m=%d", graph.n, graph.m)
        return graph


def _clean_label(raw: object, line: int) -> str:
    if not isinstance(raw, str):
        raise IngestionError(line, f"label must be a string, got {type(raw).__name__}")
    label = raw.strip()
    if not label:
        raise IngestionError(line, "empty node label")
    return label


def _clean_weight(raw: object, line: int) -> float:
    try:
        weight = float(raw)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise IngestionError(line, f"weight {raw!r} is not a number") from None
    if not math.isfinite(weight) or weight < 0:
        raise IngestionError(line, f"weight {raw!r} must be finite and non-negative")
    return weight


def build_from_edge_list(
    records: Iterable[Union[EdgeRecord, Tuple[str]]],
    line_numbers: Optional[Sequence[int]] = None,
) -> WeightedGraph:
    """Build a graph from ``(labelA, labelB[, weight])`` records.

    Duplicate pairs are coalesced by summing weights; zero-weight records and
    self-loops are dropped but their labels still become nodes. A one-label
    record declares an isolated node.
    """

    acc = _EdgeAccumulator()
    for position, record in enumerate(records):
        line = line_numbers[position] if line_numbers is not None else position + 1
        if not isinstance(record, (tuple, list)) or not 1 <= len(record) <= 3:
            raise IngestionError(line, f"expected 1 to 3 fields, got {record!r}")
        if len(record) == 1:
            acc.node(_clean_label(record[0], line))
            continue
        a = _clean_label(record[0], line)
        b = _clean_label(record[1], line)
        weight = _clean_weight(record[2], line) if len(record) == 3 else 1.0
        acc.add(a, b, weight)
    return acc.build()


def project_coauthorship(records: Iterable[MembershipRecord]) -> WeightedGraph:
    """Co-author projection: a paper with n authors adds 1/(n-1) to each author pair."""

    acc = _EdgeAccumulator()
    for record in records:
        members = [_clean_label(label, record.line) for label in record.members]
        for label in members:
            acc.node(label)
        size = len(members)
        if size < 2:
            continue
        share = 1.0 / (size - 1)
        for x in range(size):
            for y in range(x + 1, size):
                acc.add(members[x], members[y], share)
    return acc.build()


def project_email(records: Iterable[MembershipRecord]) -> WeightedGraph:
    """Email projection: a mail to n recipients adds 1/n to each sender-recipient pair."""

    acc = _EdgeAccumulator()
    for record in records:
        if record.sender is None or not str(record.sender).strip():
            raise IngestionError(record.line, f"email {record.item_id!r} has no sender")
        sender = _clean_label(record.sender, record.line)
        acc.node(sender)
        share = 1.0 / len(record.members)
        for recipient in record.members:
            acc.add(sender, _clean_label(recipient, record.line), share)
    return acc.build()


def neighbors(g: WeightedGraph, i: int) -> List[Tuple[int, float]]:
    return g.neighbors(i)
