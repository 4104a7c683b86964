"""Synthetic graph generators for scalability runs.

All generators draw from ``numpy.random.Generator(PCG64(seed))`` and emit
unit weights. Node labels are the decimal node ids.

Erdős–Rényi ``G(n, m)``: exactly ``m`` distinct pairs drawn uniformly.

Watts–Strogatz: ring lattice where node ``i`` links to ``i+1 .. i+nei``
(mod n). Edges are visited offset by offset; each is rewired with
probability ``p`` by replacing its far endpoint with a uniform node. A
replacement that would create a self-loop or a duplicate keeps the
original edge, so the edge count is always ``n * nei``.

Forest fire: nodes arrive in id order. A new node ``v`` picks ``ambs``
distinct ambassadors uniformly among earlier nodes and links to each. From
every burned node ``u`` (ambassadors first, then breadth-first) it burns
``x ~ Geometric`` unvisited out-neighbors of ``u`` with mean
``fw / (1 - fw)`` and ``y`` unvisited in-neighbors with mean
``bw*fw / (1 - bw*fw)``, links to them and continues from them. Links are
directed while the fire spreads and symmetrised in the output.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Set

import numpy as np

from . import config
from .graph import WeightedGraph

logger = logging.getLogger(__name__)


class GeneratorModel(str, Enum):
    ER = "er"
    WS = "ws"
    FF = "ff"


@dataclass(frozen=True)
class GeneratorSpec:
    model: GeneratorModel
    n: int
    seed: int = config.DEFAULT_SEED
    m: Optional[int] = None
    nei: int = config.WS_NEIGHBORHOOD
    p: float = config.WS_REWIRE_PROBABILITY
    ambs: int = config.FF_AMBASSADORS
    fw: float = config.FF_FORWARD_PROBABILITY
    bw: float = config.FF_BACKWARD_FACTOR

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        for name in ("p", "fw", "bw"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.fw >= 1.0:
            raise ValueError("fw must be below 1 for a finite burn")
        if self.model is GeneratorModel.ER:
            edges = self.edge_budget
            if edges < 0 or edges > self.n * (self.n - 1) // 2:
                raise ValueError(f"ER with m={edges} exceeds n(n-1)/2 for n={self.n}")
        if self.model is GeneratorModel.WS and (self.nei < 1 or self.n <= 2 * self.nei):
            raise ValueError("Watts-Strogatz needs nei >= 1 and n > 2*nei")
        if self.model is GeneratorModel.FF and self.ambs < 1:
            raise ValueError("forest fire needs at least one ambassador")

    @property
    def edge_budget(self) -> int:
        return self.m if self.m is not None else config.ER_EDGES_PER_NODE * self.n

    def describe(self) -> str:
        if self.model is GeneratorModel.ER:
            params = f"m={self.edge_budget}"
        elif self.model is GeneratorModel.WS:
            params = f"nei={self.nei} p={self.p}"
        else:
            params = f"ambs={self.ambs} fw={self.fw} bw={self.bw}"
        return (
            f"generator={self.model.value} n={self.n} {params} "
            f"seed={self.seed} rng={config.RNG_ALGORITHM}"
        )


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _from_pairs(n: int, keys: np.ndarray) -> WeightedGraph:
    """Graph from unique ``u * n + v`` keys with ``u < v``."""

    keys = np.asarray(keys, dtype=np.int64)
    u = keys // n
    v = keys % n
    return WeightedGraph.from_canonical_edges(
        [str(i) for i in range(n)], u, v, np.ones(len(keys))
    )


def _erdos_renyi(spec: GeneratorSpec) -> WeightedGraph:
    n, m = spec.n, spec.edge_budget
    rng = _rng(spec.seed)
    total = n * (n - 1) // 2
    chosen: Set[int] = set()
    # pairs are drawn as indices into the upper triangle
    complement = m > total // 2
    target = total - m if complement else m
    while len(chosen) < target:
        draw = rng.integers(0, total, size=max(16, 2 * (target - len(chosen))))
        for value in draw.tolist():
            chosen.add(value)
            if len(chosen) == target:
                break
    if complement:
        picked = np.setdiff1d(np.arange(total, dtype=np.int64), np.fromiter(chosen, dtype=np.int64))
    else:
        picked = np.sort(np.fromiter(chosen, dtype=np.int64, count=len(chosen)))
    u, v = _triangle_pair(picked, n)
    return _from_pairs(n, u * n + v)


def _triangle_pair(index: np.ndarray, n: int):
    """Map upper-triangle indices (row-major, ``u < v``) back to pairs."""

    index = np.asarray(index, dtype=np.int64)
    # rows start at offset(u) = u*n - u*(u+1)/2
    rows = np.arange(n, dtype=np.int64)
    offsets = rows * n - rows * (rows + 1) // 2
    u = np.searchsorted(offsets, index, side="right") - 1
    v = index - offsets[u] + u + 1
    return u, v


def _watts_strogatz(spec: GeneratorSpec) -> WeightedGraph:
    n, nei = spec.n, spec.nei
    rng = _rng(spec.seed)
    edges: Set[int] = set()
    lattice: List[int] = []
    for offset in range(1, nei + 1):
        for i in range(n):
            j = (i + offset) % n
            key = min(i, j) * n + max(i, j)
            lattice.append(key)
            edges.add(key)
    rewire = rng.random(len(lattice)) < spec.p
    targets = rng.integers(0, n, size=len(lattice)).tolist()
    kept = 0
    for position in np.flatnonzero(rewire).tolist():
        old = lattice[position]
        i = position % n
        target = targets[position]
        if target == i:
            kept += 1
            continue
        new = min(i, target) * n + max(i, target)
        if new in edges:
            kept += 1
            continue
        edges.discard(old)
        edges.add(new)
    if kept:
        logger.debug("Watts-Strogatz kept %d edge(s) whose rewiring collided", kept)
    return _from_pairs(n, np.fromiter(edges, dtype=np.int64, count=len(edges)))


def _geometric(rng: np.random.Generator, p: float) -> int:
    """Number of successes before the first failure, success probability ``p``."""

    if p <= 0.0:
        return 0
    return int(rng.geometric(1.0 - p)) - 1


def _forest_fire(spec: GeneratorSpec) -> WeightedGraph:
    n = spec.n
    rng = _rng(spec.seed)
    out_links: List[List[int]] = [[] for _ in range(n)]
    in_links: List[List[int]] = [[] for _ in range(n)]
    back = spec.bw * spec.fw
    for v in range(1, n):
        count = min(spec.ambs, v)
        ambassadors = rng.choice(v, size=count, replace=False).tolist()
        visited = {v, *ambassadors}
        queue = list(ambassadors)
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            out_links[v].append(u)
            in_links[u].append(v)
            for pool, prob in ((out_links[u], spec.fw), (in_links[u], back)):
                fresh = [w for w in pool if w not in visited]
                burn = min(_geometric(rng, prob), len(fresh))
                if burn == 0:
                    continue
                picked = rng.choice(len(fresh), size=burn, replace=False).tolist()
                for idx in picked:
                    w = fresh[idx]
                    visited.add(w)
                    queue.append(w)
    keys: Set[int] = set()
    for v in range(n):
        for u in out_links[v]:
            keys.add(min(u, v) * n + max(u, v))
    return _from_pairs(n, np.fromiter(keys, dtype=np.int64, count=len(keys)))


def generate(spec: GeneratorSpec) -> WeightedGraph:
    logger.info("Generating %s", spec.describe())
    if spec.model is GeneratorModel.ER:
        return _erdos_renyi(spec)
    if spec.model is GeneratorModel.WS:
        return _watts_strogatz(spec)
    return _forest_fire(spec)
