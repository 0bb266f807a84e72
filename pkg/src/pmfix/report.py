"""Deterministic text/JSON rendering of report dataclasses.

Text output is ``key: value`` lines nested by two-space indentation; list
items are introduced by ``- ``.  Numbers use the shortest decimal that
round-trips, with integral values printed without a fractional part.
"""
from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction


def fmt_num(x) -> str:
    v = float(x)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if v == 0:
        return "0"
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _fields(obj):
    for f in dataclasses.fields(obj):
        if f.repr:
            yield f.name, getattr(obj, f.name)


def _is_scalar(v) -> bool:
    return v is None or isinstance(v, (bool, int, float, str, Fraction))


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    return fmt_num(v)


def _lines(obj, indent: int):
    pad = "  " * indent
    if dataclasses.is_dataclass(obj):
        items = list(_fields(obj))
    elif isinstance(obj, dict):
        items = list(obj.items())
    else:
        raise TypeError(type(obj))
    for key, v in items:
        if _is_scalar(v):
            yield f"{pad}{key}: {_scalar(v)}"
        elif isinstance(v, (list, tuple)) and all(_is_scalar(e) for e in v):
            yield f"{pad}{key}: [{', '.join(_scalar(e) for e in v)}]"
        elif isinstance(v, (list, tuple)) and all(
                isinstance(e, (list, tuple)) and all(_is_scalar(c) for c in e) for e in v):
            yield f"{pad}{key}:"
            for row in v:
                yield f"{pad}  - [{', '.join(_scalar(c) for c in row)}]"
        elif isinstance(v, (list, tuple)):
            yield f"{pad}{key}:" + (" []" if not v else "")
            for e in v:
                sub = list(_lines(e, indent + 2))
                if sub:
                    yield f"{pad}  - {sub[0].lstrip()}"
                    yield from sub[1:]
        else:
            yield f"{pad}{key}:"
            yield from _lines(v, indent + 1)


def to_text(obj) -> str:
    return "\n".join(_lines(obj, 0)) + "\n"


def to_data(obj):
    """Plain JSON-compatible structure with field order preserved."""
    if dataclasses.is_dataclass(obj):
        return {k: to_data(v) for k, v in _fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_data(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_data(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    v = float(obj)
    return None if math.isnan(v) or math.isinf(v) else v


def to_json(obj) -> str:
    return json.dumps(to_data(obj), indent=2) + "\n"
