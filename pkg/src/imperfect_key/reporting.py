"""Serialization of reports: JSON, CSV and human-readable text.

Machine formats print every float with 17 significant digits so the same
value is spelled identically in JSON and CSV and round-trips exactly.
"""

from __future__ import annotations

import io
import json
import math
from typing import Any, Iterable, Sequence

import numpy as np

from .distributions import BitString, KeyDistribution, from_probabilities


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(x, ".17g")


def format_human(x: float) -> str:
    """Six significant digits, plus log10 for positive values."""
    x = float(x)
    if x > 0:
        return f"{x:.6g} (log10 {math.log10(x):.6g})"
    return f"{x:.6g}"


def _plain(value: Any) -> Any:
    if isinstance(value, BitString):
        return str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    return value


def _encode(value: Any, indent: int, level: int) -> str:
    value = _plain(value)
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return json.dumps(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [_encode(v, indent, level + 1) for v in value]
        return "[" + pad + ("," + pad).join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json(obj: Any, indent: int = 2) -> str:
    """JSON text with 17-significant-digit floats and insertion-ordered keys."""
    return _encode(obj, indent, 0) + "\n"


def _cell(value: Any) -> str:
    value = _plain(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Comma-separated text with a header row and LF line endings; no quoting."""
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        if len(row) != len(header):
            raise ValueError("row width does not match header")
        cells = [_cell(v) for v in row]
        if any("," in c or "\n" in c for c in cells):
            raise ValueError("CSV cells may not contain commas or newlines")
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def distribution_to_csv(p: KeyDistribution) -> str:
    """``index,probability`` rows: decimal index, 17-digit probability."""
    return to_csv(["index", "probability"], ((i, pr) for i, pr in p.items()))


def distribution_from_csv(text: str) -> KeyDistribution:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "index,probability":
        raise ValueError("missing 'index,probability' header")
    pairs = [ln.split(",") for ln in lines[1:]]
    indices = [int(i) for i, _ in pairs]
    if indices != list(range(len(indices))):
        raise ValueError("indices must run 0, 1, 2, ... in order")
    return from_probabilities([float(pr) for _, pr in pairs])


__all__ = [
    "distribution_from_csv",
    "distribution_to_csv",
    "format_float",
    "format_human",
    "to_csv",
    "to_json",
]
