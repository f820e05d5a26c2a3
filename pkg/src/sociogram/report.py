"""Canonical JSON rendering of analysis reports."""

from __future__ import annotations

import dataclasses
import json
import math
import statistics
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Mapping

from .errors import Undefined

SCHEMA_VERSION = "1.0"
FLOAT_DIGITS = 12


def canonical(obj):
    """Convert ``obj`` into plain JSON types with 12-significant-digit floats.

    Undefined sentinels and non-finite floats become ``{"value": null, "reason": ...}``.
    """
    if isinstance(obj, Undefined):
        return obj.to_json()
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return {"value": None, "reason": "non_finite"}
        rounded = float(format(obj, f".{FLOAT_DIGITS}g"))
        return 0.0 if rounded == 0 else rounded
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: canonical(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, Mapping):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(canonical(v) for v in obj)
    if hasattr(obj, "item"):  # numpy scalar
        return canonical(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report: Mapping) -> str:
    return json.dumps(canonical(report), sort_keys=True, ensure_ascii=False, indent=2, allow_nan=False) + "\n"


def emit_report(report: Mapping, dest: str | Path) -> Path:
    dest = Path(dest)
    dest.write_text(dumps(report), encoding="utf-8")
    return dest


def load_schema() -> dict:
    with resources.as_file(resources.files("sociogram") / "data" / "report.schema.json") as path:
        return json.loads(path.read_text(encoding="utf-8"))


def distribution_summary(scores: Mapping[str, float], top: int = 10) -> dict:
    """min/max/mean/median plus the ``top`` highest-scoring vertices (ties by id)."""
    if not scores:
        return {"count": 0, "min": Undefined("empty"), "max": Undefined("empty"),
                "mean": Undefined("empty"), "median": Undefined("empty"), "top": []}
    values = [scores[v] for v in sorted(scores)]
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:top]
    return {
        "count": len(values),
        "min": min(values),
        "max": max(values),
        "mean": math.fsum(values) / len(values),
        "median": statistics.median(values),
        "top": [{"vertex": v, "score": s} for v, s in ranked],
    }
