"""Sociability, bonding and bridging potentials and the Social Centrality score."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Tuple, Union

import numpy as np

from .graph import WeightedGraph
from .models import CentralityVector
from .truss import TrussDecomposition, k_truss_decompose, trussness_matrix

logger = logging.getLogger(__name__)

Potential = Union[float, np.ndarray]


class Aggregator(str, Enum):
    MULTIPLICATIVE = "multiplicative"
    WEIGHTED_SUM = "weighted-sum"


@dataclass(frozen=True)
class SCConfig:
    """Innate potentials and aggregation choice.

    ``alpha``/``delta`` are a constant or one value per node.
    ``coefficients`` are ``(a, b, c)`` for ``a*omega + b*beta + c*gamma``.
    """

    alpha: Potential = 1.0
    delta: Potential = 1.0
    aggregator: Aggregator = Aggregator.MULTIPLICATIVE
    coefficients: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self) -> None:
        for name in ("alpha", "delta"):
            if np.any(np.asarray(getattr(self, name)) < 0):
                raise ValueError(f"{name} must be non-negative")
        if len(self.coefficients) != 3 or any(c < 0 for c in self.coefficients):
            raise ValueError("weighted-sum needs three non-negative coefficients")

    def alpha_for(self, n: int) -> np.ndarray:
        return _expand(self.alpha, n, "alpha")

    def delta_for(self, n: int) -> np.ndarray:
        return _expand(self.delta, n, "delta")

    @classmethod
    def from_potentials(
        cls,
        graph: WeightedGraph,
        potentials: Mapping[str, Tuple[float, float]],
        **options,
    ) -> "SCConfig":
        """Per-node alpha/delta from a label mapping; unlisted nodes default to 1."""

        alpha = np.ones(graph.n)
        delta = np.ones(graph.n)
        unknown = 0
        for label, (a, d) in potentials.items():
            node = graph.label_index.get(label)
            if node is None:
                unknown += 1
                continue
            alpha[node] = a
            delta[node] = d
        if unknown:
            logger.warning("Ignored innate potentials for %d label(s) not in the graph", unknown)
        return cls(alpha=alpha, delta=delta, **options)


def _expand(value: Potential, n: int, name: str) -> np.ndarray:
    array = np.asarray(value, dtype=np.float64)
    if array.ndim == 0:
        return np.full(n, float(array))
    if array.shape != (n,):
        raise ValueError(f"{name} has {array.shape[0]} entries for {n} nodes")
    return array


@dataclass(frozen=True, eq=False)
class SCScores:
    labels: Tuple[str, ...]
    omega: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    psi: np.ndarray

    def as_vector(self, measure: str = "sc") -> CentralityVector:
        return CentralityVector(measure=measure, labels=self.labels, scores=self.psi)


@dataclass(frozen=True, eq=False)
class CommunityAssignment:
    membership: np.ndarray

    @classmethod
    def from_mapping(cls, graph: WeightedGraph, mapping: Mapping[str, int]) -> "CommunityAssignment":
        missing = [label for label in graph.labels if label not in mapping]
        if missing:
            preview = ", ".join(repr(label) for label in missing[:5])
            raise ValueError(f"no community id for {len(missing)} node(s): {preview}")
        return cls(np.asarray([mapping[label] for label in graph.labels], dtype=np.int64))


def sociability(g: WeightedGraph) -> np.ndarray:
    return g.strength.copy()


def _slot_intra(g: WeightedGraph, edge_intra: np.ndarray) -> np.ndarray:
    return edge_intra[g.edge_ids]


def _bonding(
    g: WeightedGraph, tau: np.ndarray, slot_intra: np.ndarray, omega: np.ndarray, alpha: np.ndarray
) -> np.ndarray:
    nbr = g.indices
    terms = np.where(slot_intra, omega[nbr] * tau[nbr], 0.0)
    return alpha + g.row_sums(terms)


def _bridging(
    g: WeightedGraph, tau: np.ndarray, slot_intra: np.ndarray, delta: np.ndarray
) -> np.ndarray:
    nbr = g.indices
    terms = np.where(slot_intra, 0.0, g.weights * tau[nbr])
    return delta + g.row_sums(terms)


def bonding(g: WeightedGraph, d: TrussDecomposition, cfg: SCConfig = SCConfig()) -> np.ndarray:
    slot_intra = _slot_intra(g, trussness_matrix(d))
    return _bonding(g, d.node_truss.astype(np.float64), slot_intra, sociability(g), cfg.alpha_for(g.n))


def bridging(g: WeightedGraph, d: TrussDecomposition, cfg: SCConfig = SCConfig()) -> np.ndarray:
    slot_intra = _slot_intra(g, trussness_matrix(d))
    return _bridging(g, d.node_truss.astype(np.float64), slot_intra, cfg.delta_for(g.n))


def aggregate(omega: np.ndarray, beta: np.ndarray, gamma: np.ndarray, cfg: SCConfig) -> np.ndarray:
    if cfg.aggregator is Aggregator.MULTIPLICATIVE:
        return omega * (1.0 + beta) * (1.0 + gamma)
    a, b, c = cfg.coefficients
    return a * omega + b * beta + c * gamma


def _score(
    g: WeightedGraph, d: TrussDecomposition, edge_intra: np.ndarray, cfg: SCConfig
) -> SCScores:
    tau = d.node_truss.astype(np.float64)
    slot_intra = _slot_intra(g, edge_intra)
    omega = sociability(g)
    beta = _bonding(g, tau, slot_intra, omega, cfg.alpha_for(g.n))
    gamma = _bridging(g, tau, slot_intra, cfg.delta_for(g.n))
    psi = aggregate(omega, beta, gamma, cfg)
    return SCScores(labels=g.labels, omega=omega, beta=beta, gamma=gamma, psi=psi)


def sc_score(
    g: WeightedGraph, d: Optional[TrussDecomposition] = None, cfg: SCConfig = SCConfig()
) -> SCScores:
    if d is None:
        d = k_truss_decompose(g)
    return _score(g, d, trussness_matrix(d), cfg)


def sc_com_score(
    g: WeightedGraph,
    communities: CommunityAssignment,
    cfg: SCConfig = SCConfig(),
    d: Optional[TrussDecomposition] = None,
) -> SCScores:
    """SC with tie classes taken from a community assignment; hierarchy still from trussness."""

    membership = np.asarray(communities.membership)
    if membership.shape != (g.n,):
        raise ValueError(f"community assignment covers {membership.shape[0]} of {g.n} nodes")
    if d is None:
        d = k_truss_decompose(g)
    edge_intra = membership[g.edge_u] == membership[g.edge_v]
    return _score(g, d, edge_intra, cfg)
