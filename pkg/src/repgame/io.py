"""Diff-stable JSON and CSV output.

Floats are written with 17 significant digits, which round-trips every
float64 exactly.  The stdlib JSON encoder offers no hook for float
formatting, so JSON is emitted by a small recursive writer.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Dict, List, Sequence, TextIO

import numpy as np

__all__ = ["format_float", "to_jsonable", "dumps", "loads", "write_csv", "csv_text"]


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def to_jsonable(obj: Any) -> Any:
    """Plain Python containers and scalars; numbers of every supported type become floats."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    # mpf types differ per mpmath context, so test for the raw value slot
    if isinstance(obj, (float, np.floating, Fraction)) or hasattr(obj, "_mpf_"):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj: Any, out: List[str], indent: int, level: int) -> None:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," if indent else ", "
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append((sep if i else "") + pad + json.dumps(k) + ": ")
            _emit(v, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(obj):
            out.append((sep if i else "") + pad)
            _emit(v, out, indent, level + 1)
        out.append(end + "]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    else:
        out.append(json.dumps(obj))


def dumps(obj: Any, indent: int = 2) -> str:
    out: List[str] = []
    _emit(to_jsonable(obj), out, indent, 0)
    return "".join(out)


def loads(text: str) -> Any:
    return json.loads(text)


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating, Fraction)) or hasattr(v, "_mpf_"):
        return format_float(float(v))
    return "" if v is None else str(v)


def write_csv(rows: Sequence[Dict[str, Any]], stream: TextIO, columns: Sequence[str] = None) -> None:
    if not rows and columns is None:
        return
    columns = list(columns or rows[0].keys())
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])


def csv_text(rows: Sequence[Dict[str, Any]], columns: Sequence[str] = None) -> str:
    buf = io.StringIO()
    write_csv(rows, buf, columns)
    return buf.getvalue()
