"""Shared result types, pipeline configuration and run records."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator


class Measure(str, Enum):
    SC = "sc"
    SC_COM = "sc-com"
    DC = "dc"
    EC = "ec"
    BC = "bc"
    CC = "cc"
    LC = "lc"
    NC = "nc"

    @property
    def higher_is_better(self) -> bool:
        return self is not Measure.NC


def orientation_for(measure: str) -> bool:
    """Higher-is-better flag for a measure name; unknown names rank descending."""

    try:
        return Measure(measure).higher_is_better
    except ValueError:
        return True


@dataclass(frozen=True, eq=False)
class CentralityVector:
    measure: str
    labels: Tuple[str, ...]
    scores: np.ndarray
    higher_is_better: bool = True

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.scores):
            raise ValueError("one score per label required")


@dataclass(frozen=True, eq=False)
class RankedList:
    """Competition ranks per node plus a fully ordered node sequence.

    ``order`` breaks rank ties by label; ``ranks`` do not depend on it.
    """

    measure: str
    labels: Tuple[str, ...]
    ranks: np.ndarray
    order: Tuple[int, ...]

    def rank_of(self, label: str) -> int:
        return int(self.ranks[self.labels.index(label)])


class RunStatus(str, Enum):
    """Lifecycle states of a CLI pipeline run."""

    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class PipelineRun:
    """State of one CLI invocation, including wall-clock time per stage."""

    id: str
    command: str
    seed: int = 0
    status: RunStatus = RunStatus.PENDING
    stage: str = "pending"
    stage_detail: Optional[str] = None
    timings: Dict[str, float] = field(default_factory=dict)
    message: Optional[str] = None
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    updated_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def update(self, **fields: Any) -> None:
        with self.lock:
            for key, value in fields.items():
                if not hasattr(self, key):
                    raise AttributeError(f"PipelineRun has no attribute '{key}'")
                setattr(self, key, value)
            self.updated_at = datetime.now(timezone.utc)

    def set_stage(self, stage: str, status: Optional[RunStatus] = None, detail: Optional[str] = None) -> None:
        with self.lock:
            self.stage = stage
            if status is not None:
                self.status = status
            if detail is not None:
                self.stage_detail = detail
            self.updated_at = datetime.now(timezone.utc)

    def record_timing(self, stage: str, seconds: float) -> None:
        with self.lock:
            self.timings[stage] = self.timings.get(stage, 0.0) + seconds
            self.updated_at = datetime.now(timezone.utc)

    def snapshot(self) -> Dict[str, Any]:
        with self.lock:
            return {
                "id": self.id,
                "command": self.command,
                "seed": self.seed,
                "status": self.status.value,
                "stage": self.stage,
                "stage_detail": self.stage_detail,
                "timings": dict(self.timings),
                "message": self.message,
                "created_at": _format_iso8601(self.created_at),
                "updated_at": _format_iso8601(self.updated_at),
            }

    @classmethod
    def from_snapshot(cls, data: Dict[str, Any]) -> "PipelineRun":
        return cls(
            id=data["id"],
            command=data["command"],
            seed=data.get("seed", 0),
            status=RunStatus(data["status"]),
            stage=data["stage"],
            stage_detail=data.get("stage_detail"),
            timings={key: float(value) for key, value in data.get("timings", {}).items()},
            message=data.get("message"),
            created_at=_parse_iso8601(data["created_at"]),
            updated_at=_parse_iso8601(data["updated_at"]),
        )


class RunInfo(BaseModel):
    """Public view of a run, printed by ``bench --json``."""

    id: str
    command: str
    seed: int
    status: RunStatus
    stage: str
    stage_detail: Optional[str] = None
    timings: Dict[str, float]
    total_seconds: float
    message: Optional[str] = None
    created_at: datetime
    updated_at: datetime

    @classmethod
    def from_run(cls, run: PipelineRun) -> "RunInfo":
        data = run.snapshot()
        return cls(
            id=data["id"],
            command=data["command"],
            seed=data["seed"],
            status=RunStatus(data["status"]),
            stage=data["stage"],
            stage_detail=data["stage_detail"],
            timings=data["timings"],
            total_seconds=sum(data["timings"].values()),
            message=data["message"],
            created_at=_parse_iso8601(data["created_at"]),
            updated_at=_parse_iso8601(data["updated_at"]),
        )


class PipelineConfig(BaseModel):
    """Validated inputs for one pipeline run."""

    inputs: List[Path] = Field(default_factory=list)
    mode: str = "edge-list"
    measures: List[Measure] = Field(default_factory=lambda: [Measure.SC])
    sc_config: Optional[Path] = None
    communities: Optional[Path] = None
    ground_truth: Optional[Path] = None
    ks: List[int] = Field(default_factory=lambda: [10])
    out_dir: Optional[Path] = None
    threads: int = Field(default=1, ge=1)
    seed: int = 0
    distance: str = "reciprocal"
    aggregator: str = "multiplicative"
    coefficients: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    weighted_degree: bool = True

    @field_validator("inputs")
    @classmethod
    def _inputs_exist(cls, value: List[Path]) -> List[Path]:
        for path in value:
            if not path.is_file():
                raise ValueError(f"input file {path} does not exist")
        return value

    @field_validator("sc_config", "communities", "ground_truth")
    @classmethod
    def _optional_file_exists(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.is_file():
            raise ValueError(f"file {value} does not exist")
        return value

    @field_validator("ks")
    @classmethod
    def _positive_ks(cls, value: List[int]) -> List[int]:
        if any(k < 1 for k in value):
            raise ValueError("k values must be positive")
        return value

    @field_validator("mode")
    @classmethod
    def _known_mode(cls, value: str) -> str:
        if value not in {"edge-list", "coauthor", "email"}:
            raise ValueError(f"unknown input mode {value!r}")
        return value

    @model_validator(mode="after")
    def _sc_com_needs_communities(self) -> "PipelineConfig":
        if Measure.SC_COM in self.measures and self.communities is None:
            raise ValueError("measure sc-com requires a community file")
        return self


def _parse_iso8601(value: str) -> datetime:
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    return datetime.fromisoformat(value)


def _format_iso8601(value: datetime) -> str:
    if value.tzinfo is None:
        return value.isoformat() + "Z"
    return value.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")
