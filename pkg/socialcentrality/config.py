"""Shared paths and numeric defaults."""

from __future__ import annotations

from pathlib import Path

APP_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = APP_ROOT / "data"
DOWNLOAD_DIR = DATA_DIR / "downloads"
EXTRACT_DIR = DATA_DIR / "extracted"
TEMPLATE_DIR = Path(__file__).resolve().parent / "templates"

DEFAULT_DOWNLOAD_CHUNK_SIZE = 1024 * 1024  # 1 MiB
DOWNLOAD_RETRIES = 3
DOWNLOAD_BACKOFF = 2

DEFAULT_SEED = 0
RNG_ALGORITHM = "PCG64"

EC_TOLERANCE = 1e-10
EC_MAX_ITERS = 10_000

# Path lengths within this relative gap count as equal in BC path counting.
PATH_LENGTH_RTOL = 1e-12

# Scores are compared after rounding to this many significant digits.
RANK_SIGNIFICANT_DIGITS = 9
SCORE_SIGNIFICANT_DIGITS = 12

# Sources per work unit for betweenness/closeness. Fixed so results do not
# depend on the worker count.
SOURCE_CHUNK_SIZE = 64
EDGE_CHUNK_SIZE = 65_536

ER_EDGES_PER_NODE = 2
WS_NEIGHBORHOOD = 4
WS_REWIRE_PROBABILITY = 0.3
FF_AMBASSADORS = 4
FF_FORWARD_PROBABILITY = 0.3
FF_BACKWARD_FACTOR = 0.2


def ensure_data_dirs() -> None:
    for directory in (DATA_DIR, DOWNLOAD_DIR, EXTRACT_DIR):
        directory.mkdir(parents=True, exist_ok=True)
