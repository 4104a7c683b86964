"""Synthetic graph generators."""

from __future__ import annotations

import time

import numpy as np
import pytest

from socialcentrality.centrality import sc_score
from socialcentrality.generators import GeneratorModel, GeneratorSpec, generate
from socialcentrality.truss import k_truss_decompose


def _edge_set(g):
    return set(zip(g.edge_u.tolist(), g.edge_v.tolist()))


def test_er_without_edges() -> None:
    g = generate(GeneratorSpec(GeneratorModel.ER, n=10, m=0))

    assert (g.n, g.m) == (10, 0)


@pytest.mark.parametrize("n, m", [(50, 100), (10, 40), (12, 66)])
def test_er_edge_count_is_exact(n: int, m: int) -> None:
    g = generate(GeneratorSpec(GeneratorModel.ER, n=n, m=m, seed=3))

    assert g.m == m
    assert np.all(g.edge_u < g.edge_v)
    assert np.all(g.edge_w == 1.0)


def test_er_default_budget_and_limit() -> None:
    assert generate(GeneratorSpec(GeneratorModel.ER, n=100)).m == 200
    with pytest.raises(ValueError):
        GeneratorSpec(GeneratorModel.ER, n=5, m=11)


def test_ws_without_rewiring_is_a_ring_lattice() -> None:
    g = generate(GeneratorSpec(GeneratorModel.WS, n=20, nei=4, p=0.0))

    assert g.m == 80
    assert g.degrees.tolist() == [8] * 20
    assert g.edge_id(0, 19) is not None
    assert g.edge_id(0, 5) is None


def test_ws_rewiring_keeps_edge_count() -> None:
    g = generate(GeneratorSpec(GeneratorModel.WS, n=500, nei=4, p=0.3, seed=9))
    lattice = generate(GeneratorSpec(GeneratorModel.WS, n=500, nei=4, p=0.0))

    assert g.m == 500 * 4
    assert _edge_set(g) != _edge_set(lattice)


def test_ws_needs_room_for_the_lattice() -> None:
    with pytest.raises(ValueError):
        GeneratorSpec(GeneratorModel.WS, n=8, nei=4)


def test_forest_fire_edge_count_band() -> None:
    g = generate(GeneratorSpec(GeneratorModel.FF, n=1000, ambs=4, fw=0.3, bw=0.2, seed=1))

    assert g.n <= g.m <= 20 * g.n
    assert int(g.degrees.min()) >= 1


@pytest.mark.parametrize("model", list(GeneratorModel))
def test_same_seed_same_graph(model: GeneratorModel) -> None:
    first = generate(GeneratorSpec(model, n=300, seed=42))
    second = generate(GeneratorSpec(model, n=300, seed=42))
    other = generate(GeneratorSpec(model, n=300, seed=43))

    assert _edge_set(first) == _edge_set(second)
    assert _edge_set(first) != _edge_set(other)


def test_description_names_model_parameters_and_rng() -> None:
    spec = GeneratorSpec(GeneratorModel.WS, n=100, nei=3, p=0.1, seed=7)

    assert spec.describe() == "generator=ws n=100 nei=3 p=0.1 seed=7 rng=PCG64"


def test_invalid_probabilities_are_rejected() -> None:
    with pytest.raises(ValueError):
        GeneratorSpec(GeneratorModel.WS, n=100, p=1.5)
    with pytest.raises(ValueError):
        GeneratorSpec(GeneratorModel.FF, n=100, fw=1.0)


@pytest.mark.slow
def test_million_node_watts_strogatz_pipeline() -> None:
    started = time.perf_counter()
    g = generate(GeneratorSpec(GeneratorModel.WS, n=1_000_000, nei=4, p=0.3, seed=42))
    d = k_truss_decompose(g)
    scores = sc_score(g, d)
    elapsed = time.perf_counter() - started

    assert g.m == 4_000_000
    assert scores.psi.shape == (1_000_000,)
    assert elapsed <= 600
