"""Competition ranking and ground-truth comparison metrics."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import rankdata, spearmanr

from . import config
from .models import CentralityVector, RankedList
from .utils import round_all

logger = logging.getLogger(__name__)


class UndefinedCorrelationError(ValueError):
    """Spearman correlation is undefined when either rank vector is constant."""


class RmseRounding(str, Enum):
    NONE = "none"
    CEIL = "ceil"
    ROUND = "round"


def rank_scores(scores: CentralityVector) -> RankedList:
    """Standard competition ranks ("1224"); ties after rounding to 9 significant digits."""

    rounded = round_all(scores.scores, config.RANK_SIGNIFICANT_DIGITS)
    if any(math.isnan(value) for value in rounded):
        raise ValueError(f"measure {scores.measure} has NaN scores")
    sign = -1.0 if scores.higher_is_better else 1.0
    keys = [sign * value for value in rounded]
    order = sorted(range(len(keys)), key=lambda i: (keys[i], scores.labels[i]))
    ranks = rankdata(keys, method="min").astype(np.int64) if keys else np.zeros(0, dtype=np.int64)
    return RankedList(measure=scores.measure, labels=scores.labels, ranks=ranks, order=tuple(order))


@dataclass(frozen=True)
class GroundTruth:
    """External importance values keyed by label.

    ``values`` is the full roster; ``node_values`` covers graph nodes, NaN
    where a node has no ground truth.
    """

    values: Dict[str, float]
    labels: Tuple[str, ...]
    node_values: np.ndarray = field(compare=False)
    missing: Tuple[str, ...] = ()

    @classmethod
    def for_labels(cls, labels: Sequence[str], values: Mapping[str, float]) -> "GroundTruth":
        index = {label: i for i, label in enumerate(labels)}
        node_values = np.full(len(labels), np.nan)
        missing = []
        for label, value in values.items():
            node = index.get(label)
            if node is None:
                missing.append(label)
            else:
                node_values[node] = value
        if missing:
            logger.warning("%d ground-truth actor(s) are not in the graph", len(missing))
        return cls(
            values=dict(values),
            labels=tuple(labels),
            node_values=node_values,
            missing=tuple(missing),
        )

    def roster_order(self) -> List[str]:
        """All ground-truth labels, best first, ties by label."""

        return sorted(self.values, key=lambda label: (-self.values[label], label))

    def present_order(self) -> List[int]:
        nodes = np.flatnonzero(~np.isnan(self.node_values)).tolist()
        return sorted(nodes, key=lambda i: (-self.node_values[i], self.labels[i]))


def _warn_boundary_tie(what: str, values: Sequence[float], k: int) -> None:
    if 0 < k < len(values) and values[k - 1] == values[k]:
        tied = sum(1 for value in values if value == values[k - 1])
        logger.warning(
            "%s: top-%d boundary splits a tie group of %d; truncated by label order", what, k, tied
        )


def _top_ground_truth(gt: GroundTruth, k: int) -> List[int]:
    order = gt.present_order()
    _warn_boundary_tie("ground truth", [gt.node_values[i] for i in order], k)
    return order[:k]


def _top_measure(r: RankedList, k: int) -> List[int]:
    _warn_boundary_tie(r.measure, [int(r.ranks[i]) for i in r.order], k)
    return list(r.order[:k])


def rmse_from_ranks(ranks: Sequence[float], positions: Optional[Sequence[int]] = None) -> float:
    """Root mean squared gap between assigned ranks and ground-truth positions (1..k)."""

    if positions is None:
        positions = range(1, len(ranks) + 1)
    gaps = [(float(rank) - float(pos)) ** 2 for rank, pos in zip(ranks, positions)]
    if not gaps:
        raise ValueError("RMSE needs at least one ranked actor")
    return math.sqrt(math.fsum(gaps) / len(gaps))


def rmse_topk(gt: GroundTruth, r: RankedList, k: int) -> float:
    """RMSE over the top-k ground-truth actors; actors absent from the graph are skipped."""

    roster = gt.roster_order()
    _warn_boundary_tie("ground truth", [gt.values[label] for label in roster], k)
    index = {label: i for i, label in enumerate(r.labels)}
    ranks: List[int] = []
    positions: List[int] = []
    skipped = 0
    for position, label in enumerate(roster[:k], start=1):
        node = index.get(label)
        if node is None:
            skipped += 1
            continue
        ranks.append(int(r.ranks[node]))
        positions.append(position)
    if skipped:
        logger.warning("RMSE@%d: %d actor(s) missing from the graph, k reduced to %d", k, skipped, len(ranks))
    if not ranks:
        logger.warning("RMSE@%d undefined: none of the top-%d actors are in the graph", k, k)
        return math.nan
    return rmse_from_ranks(ranks, positions)


def round_rmse(value: float, mode: RmseRounding = RmseRounding.NONE) -> float:
    if math.isnan(value):
        return value
    if mode is RmseRounding.CEIL:
        return float(math.ceil(value))
    if mode is RmseRounding.ROUND:
        return float(round(value))
    return value


def jaccard_topk(gt: GroundTruth, r: RankedList, k: int) -> float:
    if k < 1:
        raise ValueError("k must be positive")
    relevant = set(_top_ground_truth(gt, k))
    retrieved = set(_top_measure(r, k))
    union = relevant | retrieved
    return len(relevant & retrieved) / len(union) if union else 1.0


def precision_recall(gt: GroundTruth, r: RankedList, k: int) -> Tuple[float, float]:
    if k < 1:
        raise ValueError("k must be positive")
    relevant = set(_top_ground_truth(gt, k))
    retrieved = set(_top_measure(r, k))
    hits = len(relevant & retrieved)
    precision = hits / len(retrieved) if retrieved else 0.0
    recall = hits / len(relevant) if relevant else 0.0
    return precision, recall


def spearman_from_vectors(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman's rho with average ranks for ties, ascending order on both inputs."""

    if len(x) != len(y):
        raise ValueError("vectors must have equal length")
    if len(x) < 2:
        raise UndefinedCorrelationError("Spearman correlation needs at least two observations")
    xs = np.asarray(x, dtype=np.float64)
    ys = np.asarray(y, dtype=np.float64)
    if np.ptp(xs) == 0 or np.ptp(ys) == 0:
        raise UndefinedCorrelationError("Spearman correlation is undefined for constant ranks")
    rho = spearmanr(xs, ys).statistic
    if math.isnan(rho):
        raise UndefinedCorrelationError("Spearman correlation is undefined for these inputs")
    return float(rho)


def spearman_rho(gt: GroundTruth, r: RankedList) -> float:
    """Correlation between ground-truth order and the measure's ranks, over nodes with ground truth."""

    nodes = np.flatnonzero(~np.isnan(gt.node_values))
    truth = -gt.node_values[nodes]
    measured = r.ranks[nodes].astype(np.float64)
    return spearman_from_vectors(truth, measured)


@dataclass(frozen=True)
class EvaluationRow:
    measure: str
    k: int
    rmse: float
    jaccard: float
    precision: float
    recall: float
    spearman: float

    def as_row(self, rounding: RmseRounding = RmseRounding.NONE) -> List[str]:
        return [
            self.measure,
            str(self.k),
            f"{round_rmse(self.rmse, rounding):.6g}",
            f"{self.jaccard:.6g}",
            f"{self.precision:.6g}",
            f"{self.recall:.6g}",
            "nan" if math.isnan(self.spearman) else f"{self.spearman:.6g}",
        ]


EVALUATION_HEADER = ["measure", "k", "rmse", "jaccard", "precision", "recall", "spearman"]


def evaluate(gt: GroundTruth, ranked: Sequence[RankedList], ks: Sequence[int]) -> List[EvaluationRow]:
    rows = []
    for r in ranked:
        try:
            rho = spearman_rho(gt, r)
        except UndefinedCorrelationError as exc:
            logger.warning("Spearman undefined for %s: %s", r.measure, exc)
            rho = math.nan
        for k in ks:
            precision, recall = precision_recall(gt, r, k)
            rows.append(
                EvaluationRow(
                    measure=r.measure,
                    k=k,
                    rmse=rmse_topk(gt, r, k),
                    jaccard=jaccard_topk(gt, r, k),
                    precision=precision,
                    recall=recall,
                    spearman=rho,
                )
            )
    return rows


def rank_matrix(
    ranked: Sequence[RankedList],
    actors: Optional[Sequence[str]] = None,
    cutoff: Optional[int] = None,
) -> Tuple[List[str], List[List[str]]]:
    """Actor-by-measure rank table; ranks above ``cutoff`` show as ``-``."""

    if not ranked:
        return ["actor"], []
    lead = ranked[0]
    if actors is None:
        actors = [lead.labels[i] for i in lead.order]
    indexes: List[Dict[str, int]] = [{label: i for i, label in enumerate(r.labels)} for r in ranked]
    header = ["actor", *(r.measure for r in ranked)]
    rows = []
    for actor in actors:
        row = [actor]
        for r, index in zip(ranked, indexes):
            node = index.get(actor)
            if node is None:
                row.append("-")
                continue
            rank = int(r.ranks[node])
            row.append("-" if cutoff is not None and rank > cutoff else str(rank))
        rows.append(row)
    return header, rows
