"""k-truss decomposition, hierarchy levels and tie classification.

Trussness is computed on the unweighted skeleton. Edges are peeled in
ascending support order from a bucket queue; when an edge is removed every
triangle partner with a larger current support loses one unit of support.
The support an edge holds when it is peeled is its trussness minus two.
Within a bucket edges start in id order.

Node trussness is the maximum trussness of incident edges; nodes without
edges get 0 so they sit below every real level.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import config
from .graph import WeightedGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TrussDecomposition:
    graph: WeightedGraph
    edge_truss: np.ndarray
    node_truss: np.ndarray
    max_level: int

    def __post_init__(self) -> None:
        self.edge_truss.setflags(write=False)
        self.node_truss.setflags(write=False)

    def truss_of(self, i: int, j: int) -> int:
        """Trussness of the edge ``i``-``j``, 0 when absent."""

        edge = self.graph.edge_id(i, j)
        return 0 if edge is None else int(self.edge_truss[edge])


@dataclass(frozen=True)
class HierarchyPartition:
    """Nodes grouped by node trussness, ascending by level value."""

    levels: Tuple[Tuple[int, FrozenSet[int]], ...]

    def level_of(self, node: int) -> int:
        for value, members in self.levels:
            if node in members:
                return value
        raise KeyError(node)

    def sizes(self) -> Dict[int, int]:
        return {value: len(members) for value, members in self.levels}


def _row_sets(g: WeightedGraph) -> List[frozenset]:
    indptr = g.indptr.tolist()
    indices = g.indices.tolist()
    return [frozenset(indices[indptr[i] : indptr[i + 1]]) for i in range(g.n)]


def _support_chunk(
    rows: List[frozenset], eu: List[int], ev: List[int], start: int, end: int
) -> List[int]:
    return [len(rows[eu[e]] & rows[ev[e]]) for e in range(start, end)]


def edge_support(g: WeightedGraph, workers: int = 1) -> np.ndarray:
    """Closed triads per edge, ``|N_i ∩ N_j|``, indexed by edge id."""

    rows = _row_sets(g)
    eu = g.edge_u.tolist()
    ev = g.edge_v.tolist()
    chunk = config.EDGE_CHUNK_SIZE
    bounds = [(start, min(start + chunk, g.m)) for start in range(0, g.m, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _support_chunk(rows, eu, ev, *b), bounds))
    else:
        parts = [_support_chunk(rows, eu, ev, *b) for b in bounds]
    support = np.zeros(g.m, dtype=np.int64)
    for (start, end), part in zip(bounds, parts):
        support[start:end] = part
    return support


def peel(g: WeightedGraph, support: np.ndarray) -> np.ndarray:
    """Edge trussness by bucket-queue peeling, given initial supports."""

    m = g.m
    sup = support.tolist()
    eu = g.edge_u.tolist()
    ev = g.edge_v.tolist()
    indptr = g.indptr.tolist()
    indices = g.indices.tolist()
    slot_edges = g.edge_ids.tolist()
    live = [
        dict(zip(indices[indptr[i] : indptr[i + 1]], slot_edges[indptr[i] : indptr[i + 1]]))
        for i in range(g.n)
    ]

    max_sup = max(sup, default=0)
    counts = [0] * (max_sup + 1)
    for s in sup:
        counts[s] += 1
    bucket_start = [0] * (max_sup + 1)
    running = 0
    for s in range(max_sup + 1):
        bucket_start[s] = running
        running += counts[s]
    order = [0] * m
    pos = [0] * m
    fill = bucket_start[:]
    for e in range(m):
        s = sup[e]
        pos[e] = fill[s]
        order[fill[s]] = e
        fill[s] += 1

    truss = [0] * m
    for i in range(m):
        e = order[i]
        k = sup[e]
        truss[e] = k + 2
        u, v = eu[e], ev[e]
        small, large = live[u], live[v]
        if len(small) > len(large):
            small, large = large, small
        for w, e1 in small.items():
            e2 = large.get(w)
            if e2 is None:
                continue
            for f in (e1, e2):
                s = sup[f]
                if s <= k:
                    continue
                # move f to the front of its bucket, then shrink the bucket
                head = bucket_start[s]
                other = order[head]
                if other != f:
                    pf = pos[f]
                    order[pf] = other
                    pos[other] = pf
                    order[head] = f
                    pos[f] = head
                bucket_start[s] = head + 1
                sup[f] = s - 1
        del live[u][v]
        del live[v][u]
    return np.asarray(truss, dtype=np.int64)


def node_trussness(g: WeightedGraph, edge_truss: np.ndarray) -> np.ndarray:
    tau = np.zeros(g.n, dtype=np.int64)
    if g.m:
        np.maximum.at(tau, g.edge_u, edge_truss)
        np.maximum.at(tau, g.edge_v, edge_truss)
    return tau


def k_truss_decompose(g: WeightedGraph, workers: int = 1) -> TrussDecomposition:
    support = edge_support(g, workers=workers)
    return decomposition_from_support(g, support)


def decomposition_from_support(g: WeightedGraph, support: np.ndarray) -> TrussDecomposition:
    edge_truss = peel(g, support)
    tau = node_trussness(g, edge_truss)
    max_level = int(edge_truss.max()) if g.m else 0
    logger.info("Truss decomposition: n=%d m=%d T=%d", g.n, g.m, max_level)
    return TrussDecomposition(graph=g, edge_truss=edge_truss, node_truss=tau, max_level=max_level)


def hierarchy_levels(d: TrussDecomposition) -> HierarchyPartition:
    groups: Dict[int, List[int]] = {}
    for node, value in enumerate(d.node_truss.tolist()):
        groups.setdefault(value, []).append(node)
    return HierarchyPartition(
        levels=tuple((value, frozenset(groups[value])) for value in sorted(groups))
    )


def trussness_matrix(d: TrussDecomposition) -> np.ndarray:
    """Per-edge intra-community flag: both endpoints share the edge's trussness."""

    g = d.graph
    tau_u = d.node_truss[g.edge_u]
    tau_v = d.node_truss[g.edge_v]
    return (tau_u == d.edge_truss) & (tau_v == d.edge_truss)


def is_intra_community(d: TrussDecomposition, i: int, j: int) -> bool:
    if i == j:
        raise ValueError("intra-community test needs two distinct nodes")
    edge = d.graph.edge_id(i, j)
    if edge is None:
        return False
    t = d.edge_truss[edge]
    return bool(d.node_truss[i] == t and d.node_truss[j] == t)


def k_truss_edges(d: TrussDecomposition, k: int) -> np.ndarray:
    """Edge ids of the k-truss subgraph."""

    return np.flatnonzero(d.edge_truss >= k)


def intra_tie_components(d: TrussDecomposition) -> np.ndarray:
    """Component label per node in the graph formed by intra-community ties only."""

    g = d.graph
    mask = trussness_matrix(d)
    rows = g.edge_u[mask]
    cols = g.edge_v[mask]
    adjacency = coo_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(g.n, g.n)
    ).tocsr()
    _, labels = connected_components(adjacency, directed=False)
    return labels.astype(np.int64)
