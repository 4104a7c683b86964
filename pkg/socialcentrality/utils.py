"""Formatting helpers."""

from __future__ import annotations

import math
from typing import Iterable, List


def human_readable_bytes(value: int, precision: int = 1) -> str:
    """Format a byte count as a human readable string."""

    if value < 1024:
        return f"{value} B"
    units = ["KiB", "MiB", "GiB", "TiB", "PiB"]
    scaled = float(value)
    for unit in units:
        scaled /= 1024.0
        if scaled < 1024.0:
            return f"{scaled:.{precision}f} {unit}"
    return f"{scaled:.{precision}f} EiB"


def round_significant(value: float, digits: int) -> float:
    """Round ``value`` to ``digits`` significant digits; non-finite values pass through."""

    if value == 0 or not math.isfinite(value):
        return value
    return float(f"{value:.{digits - 1}e}")


def round_all(values: Iterable[float], digits: int) -> List[float]:
    return [round_significant(float(v), digits) for v in values]


def format_score(value: float, digits: int) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"

