"""Weighted baseline centralities: DC, EC, BC, CC, LC and Burt's network constraint."""

from __future__ import annotations

import heapq
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix

from . import config
from .graph import WeightedGraph
from .models import CentralityVector

logger = logging.getLogger(__name__)

Adjacency = List[List[Tuple[int, float]]]


class DistanceConvention(str, Enum):
    """How edge weights turn into path lengths for BC and CC."""

    RECIPROCAL = "reciprocal"
    DIRECT = "direct"


class ConvergenceError(RuntimeError):
    def __init__(self, iterations: int) -> None:
        super().__init__(f"power iteration failed to converge in {iterations} iterations")
        self.iterations = iterations


def degree_centrality(g: WeightedGraph, weighted: bool = True) -> CentralityVector:
    if weighted:
        scores = g.strength.copy()
        name = "dc"
    else:
        scores = g.degrees.astype(np.float64)
        name = "dc-unweighted"
    return CentralityVector(measure=name, labels=g.labels, scores=scores)


def _adjacency_matrix(g: WeightedGraph) -> csr_matrix:
    return csr_matrix((g.weights, g.indices, g.indptr), shape=(g.n, g.n))


def eigenvector_centrality(
    g: WeightedGraph,
    tol: float = config.EC_TOLERANCE,
    max_iters: int = config.EC_MAX_ITERS,
) -> CentralityVector:
    """Power iteration on ``A / max(w) + I`` from a uniform start, scaled to unit maximum.

    The identity shift keeps bipartite graphs from oscillating without
    changing the principal eigenvector. Dividing by the largest weight makes
    the iteration, and its convergence, independent of the weight scale.
    """

    if g.m == 0:
        return CentralityVector(measure="ec", labels=g.labels, scores=np.zeros(g.n))
    adjacency = _adjacency_matrix(g) / float(g.edge_w.max())
    x = np.ones(g.n)
    for iteration in range(1, max_iters + 1):
        nxt = adjacency @ x + x
        nxt /= nxt.max()
        if np.max(np.abs(nxt - x)) < tol:
            logger.debug("Eigenvector centrality converged after %d iterations", iteration)
            return CentralityVector(measure="ec", labels=g.labels, scores=nxt)
        x = nxt
    raise ConvergenceError(max_iters)


def _lengths(g: WeightedGraph, conv: DistanceConvention) -> Adjacency:
    indptr = g.indptr.tolist()
    indices = g.indices.tolist()
    weights = g.weights.tolist()
    if conv is DistanceConvention.RECIPROCAL:
        weights = [1.0 / w for w in weights]
    return [
        list(zip(indices[indptr[i] : indptr[i + 1]], weights[indptr[i] : indptr[i + 1]]))
        for i in range(g.n)
    ]


def _dijkstra(adj: Adjacency, source: int, track_paths: bool):
    """Settled order, distances, path counts and predecessors from ``source``."""

    n = len(adj)
    dist = [math.inf] * n
    sigma = [0.0] * n
    preds: List[List[int]] = [[] for _ in range(n)] if track_paths else []
    done = [False] * n
    settled: List[int] = []
    dist[source] = 0.0
    sigma[source] = 1.0
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        settled.append(v)
        for w, length in adj[v]:
            candidate = d + length
            tie = math.isclose(candidate, dist[w], rel_tol=config.PATH_LENGTH_RTOL)
            if candidate < dist[w] and not tie:
                dist[w] = candidate
                heapq.heappush(heap, (candidate, w))
                if track_paths:
                    sigma[w] = sigma[v]
                    preds[w] = [v]
            elif track_paths and tie and not done[w]:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return settled, dist, sigma, preds


def _betweenness_chunk(adj: Adjacency, sources: Sequence[int]) -> np.ndarray:
    n = len(adj)
    partial = [0.0] * n
    for s in sources:
        settled, _, sigma, preds = _dijkstra(adj, s, track_paths=True)
        delta = [0.0] * n
        for w in reversed(settled):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                partial[w] += delta[w]
    return np.asarray(partial)


def _closeness_chunk(adj: Adjacency, sources: Sequence[int]) -> np.ndarray:
    out = []
    for s in sources:
        settled, dist, _, _ = _dijkstra(adj, s, track_paths=False)
        reachable = len(settled) - 1
        total = math.fsum(dist[v] for v in settled)
        out.append(reachable / total if reachable > 0 else 0.0)
    return np.asarray(out)


def _per_source(
    g: WeightedGraph,
    work: Callable[[Adjacency, Sequence[int]], np.ndarray],
    adj: Adjacency,
    workers: int,
) -> List[np.ndarray]:
    chunk = config.SOURCE_CHUNK_SIZE
    chunks = [range(start, min(start + chunk, g.n)) for start in range(0, g.n, chunk)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda sources: work(adj, sources), chunks))
    return [work(adj, sources) for sources in chunks]


def betweenness_centrality(
    g: WeightedGraph,
    conv: DistanceConvention = DistanceConvention.RECIPROCAL,
    workers: int = 1,
) -> CentralityVector:
    """Brandes accumulation over Dijkstra; each unordered pair counted once."""

    adj = _lengths(g, conv)
    scores = np.zeros(g.n)
    for partial in _per_source(g, _betweenness_chunk, adj, workers):
        scores += partial
    return CentralityVector(measure="bc", labels=g.labels, scores=scores / 2.0)


def closeness_centrality(
    g: WeightedGraph,
    conv: DistanceConvention = DistanceConvention.RECIPROCAL,
    workers: int = 1,
) -> CentralityVector:
    """Reachable count over summed distance, within each node's component."""

    adj = _lengths(g, conv)
    parts = _per_source(g, _closeness_chunk, adj, workers)
    scores = np.concatenate(parts) if parts else np.zeros(0)
    return CentralityVector(measure="cc", labels=g.labels, scores=scores)


def laplacian_energy(g: WeightedGraph) -> float:
    strength = g.strength
    return float(np.sum(strength**2) + 2.0 * np.sum(g.edge_w**2))


def laplacian_centrality(g: WeightedGraph) -> CentralityVector:
    """Drop in Laplacian energy when a node is deleted, in closed form."""

    strength = g.strength
    w = g.weights
    terms = 2.0 * strength[g.indices] * w - w**2 + 2.0 * w**2
    scores = strength**2 + g.row_sums(terms)
    return CentralityVector(measure="lc", labels=g.labels, scores=scores)


def network_constraint(g: WeightedGraph) -> CentralityVector:
    """Burt's constraint; isolated nodes get +inf and rank last."""

    strength = g.strength.tolist()
    indptr = g.indptr.tolist()
    indices = g.indices.tolist()
    weights = g.weights.tolist()
    share = [
        {indices[p]: weights[p] / strength[i] for p in range(indptr[i], indptr[i + 1])}
        for i in range(g.n)
    ]
    scores = []
    for i in range(g.n):
        p_i = share[i]
        if not p_i:
            scores.append(math.inf)
            continue
        total = 0.0
        for j, p_ij in p_i.items():
            indirect = 0.0
            for q, p_iq in p_i.items():
                if q != j:
                    p_qj = share[q].get(j)
                    if p_qj is not None:
                        indirect += p_iq * p_qj
            total += (p_ij + indirect) ** 2
        scores.append(total)
    return CentralityVector(
        measure="nc", labels=g.labels, scores=np.asarray(scores), higher_is_better=False
    )
