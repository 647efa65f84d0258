"""
Reading vectors and index sets from flags, and writing reports
"""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel

from src.cli_report.models import Report
from src.measures_norms.functions import Distribution
from src.measures_norms.rules import (
    is_observable_rule,
    is_weight_rule,
    named_observable,
    named_weight,
)
from src.utils.exceptions import ParseError

# Which vector a flag carries decides which named rules it accepts.
VECTOR_KINDS = ("V", "h", "mu")


def _named_measure(name: str, n: int) -> Optional[np.ndarray]:
    if name == "uniform":
        return np.full(n, 1.0 / n)
    if name.startswith("point:"):
        try:
            index = int(name.split(":", 1)[1])
        except ValueError as e:
            raise ParseError(f"Unreadable point mass {name!r}", field="mu") from e
        if not 0 <= index < n:
            raise ParseError(f"Point mass at {index} is out of range", field="mu", n=n)
        return Distribution.point_mass(n, index).weights
    return None


def _named(kind: str, text: str, n: int) -> Optional[np.ndarray]:
    if kind == "V" and is_weight_rule(text):
        return named_weight(text, n)
    if kind == "h" and is_observable_rule(text):
        return named_observable(text, n)
    if kind == "mu":
        return _named_measure(text, n)
    return None


def _numbers(values: Any, kind: str) -> np.ndarray:
    if not isinstance(values, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
    ):
        raise ParseError(f"{kind} must be a list of numbers", field=kind)
    return np.asarray(values, dtype=float)


def load_vector_file(path: Path) -> Dict[str, Any]:
    """A JSON vector file: either a bare list or {"V": [...], "h": [...], "mu": [...]}"""
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ParseError(f"Cannot read vector file {path}: {e}", field="vectors") from e
    except json.JSONDecodeError as e:
        raise ParseError(
            f"Malformed JSON in {path}: {e.msg}", line=e.lineno, column=e.colno
        ) from e
    if isinstance(document, list):
        return {kind: document for kind in VECTOR_KINDS}
    if not isinstance(document, dict):
        raise ParseError("Vector file must hold a list or an object", field="vectors")
    return document


def parse_vector(
    text: Optional[str],
    kind: str,
    n: int,
    vectors: Optional[Dict[str, Any]] = None,
) -> Optional[np.ndarray]:
    """
    Resolve a --V, --h or --mu flag

    The flag may be an inline JSON array, a comma list, a named rule or the path
    of a vector file. Without a flag the --vectors document is consulted.

    Returns:
        The vector, or None when neither source provides one
    """
    if text is None:
        if vectors is not None and kind in vectors:
            return _numbers(vectors[kind], kind)
        return None

    text = text.strip()
    if text.startswith("["):
        try:
            return _numbers(json.loads(text), kind)
        except json.JSONDecodeError as e:
            raise ParseError(f"Malformed inline {kind}: {e.msg}", field=kind) from e

    named = _named(kind, text, n)
    if named is not None:
        return named

    path = Path(text)
    if path.is_file():
        document = load_vector_file(path)
        if kind not in document:
            raise ParseError(f"Vector file {path} has no {kind!r} entry", field=kind)
        return _numbers(document[kind], kind)

    try:
        return np.array([float(part) for part in text.split(",")], dtype=float)
    except ValueError as e:
        raise ParseError(
            f"Cannot read {kind} from {text!r}: expected a list, a rule name or a file",
            field=kind,
        ) from e


def parse_int_list(text: Optional[str], field: str) -> Optional[List[int]]:
    """Comma-separated integers; an empty string is the empty list"""
    if text is None:
        return None
    parts = [part.strip() for part in text.split(",") if part.strip()]
    try:
        return [int(part) for part in parts]
    except ValueError as e:
        raise ParseError(f"{field} must be comma-separated integers", field=field) from e


def to_jsonable(value: Any) -> Any:
    """
    Plain JSON types for models, numpy values and enums

    Non-finite floats become the strings "inf", "-inf" and "nan".
    """
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump(mode="python", by_alias=True))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isnan(number):
            return "nan"
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return number
    if isinstance(value, Path):
        return str(value)
    return value


def dumps_report(report: Report) -> str:
    """Strict JSON with sorted keys"""
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_text(text: str, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def write_csv(frame: pd.DataFrame, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)


def _short(value: Any) -> str:
    if isinstance(value, list):
        if len(value) <= 8 and all(not isinstance(v, (list, dict)) for v in value):
            return json.dumps(value)
        return f"[{len(value)} items]"
    if isinstance(value, dict):
        return f"{{{len(value)} fields}}"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_text(report: Report) -> str:
    """Human-readable summary: header, check table if any, top-level results"""
    data = to_jsonable(report)
    lines = [
        f"ergograph {data['tool_version']}  command: {data['command']}",
        f"input sha256: {data['input_digest']}",
    ]
    results: Dict[str, Any] = data["results"]
    checks = results.get("checks")
    if isinstance(checks, list):
        lines.append("")
        width = max((len(row["name"]) for row in checks), default=0)
        for row in checks:
            lines.append(f"  {row['name']:<{width}}  {row['status']}")
    lines.append("")
    for key in sorted(results):
        if key == "checks":
            continue
        value = results[key]
        if isinstance(value, dict):
            lines.append(f"{key}:")
            for inner in sorted(value):
                lines.append(f"  {inner}: {_short(value[inner])}")
        else:
            lines.append(f"{key}: {_short(value)}")
    for warning in data["warnings"]:
        lines.append(f"warning: {warning}")
    return "\n".join(lines) + "\n"
