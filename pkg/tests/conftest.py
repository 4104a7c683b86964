"""Pytest configuration for ensuring the application package is importable."""

from __future__ import annotations

import itertools
import os
import random
import sys
from pathlib import Path
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from socialcentrality import config  # noqa: E402
from socialcentrality.graph import WeightedGraph, build_from_edge_list  # noqa: E402

DATA_DIR = Path(__file__).resolve().parent / "data"


def pytest_collection_modifyitems(config, items):  # noqa: ARG001
    if os.environ.get("SOCIALCENTRALITY_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set SOCIALCENTRALITY_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def isolated_data_dir(tmp_path, monkeypatch) -> Path:
    data_dir = tmp_path / "data"
    downloads = data_dir / "downloads"
    extracted = data_dir / "extracted"
    monkeypatch.setattr(config, "DATA_DIR", data_dir)
    monkeypatch.setattr(config, "DOWNLOAD_DIR", downloads)
    monkeypatch.setattr(config, "EXTRACT_DIR", extracted)
    return data_dir


@pytest.fixture
def make_graph() -> Callable[..., WeightedGraph]:
    def build(edges: Iterable[Sequence], isolated: Sequence[str] = ()) -> WeightedGraph:
        records: list[Tuple] = [tuple(edge) for edge in edges]
        records.extend((label,) for label in isolated)
        return build_from_edge_list(records)

    return build


@pytest.fixture
def bali_path() -> Path:
    path = DATA_DIR / "bali.tsv"
    if not path.exists():
        pytest.skip("Bali network fixture not available (tests/data/bali.tsv)")
    return path


def _random_graph(n: int, p: float, seed: int, weighted: bool = False) -> WeightedGraph:
    """G(n, p) with labels ``v0..``; weights drawn from {0.5, 1, 3} when ``weighted``."""

    rng = random.Random(seed)
    pairs = [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < p]
    weights = [rng.choice([0.5, 1.0, 3.0]) if weighted else 1.0 for _ in pairs]
    return WeightedGraph.from_canonical_edges(
        [f"v{i}" for i in range(n)],
        np.array([i for i, _ in pairs], dtype=np.int64),
        np.array([j for _, j in pairs], dtype=np.int64),
        np.array(weights, dtype=np.float64),
    )


@pytest.fixture
def random_graph() -> Callable[..., WeightedGraph]:
    return _random_graph
