"""
JSON encoding of engine values.

Rationals travel as "p/q" strings (or "p"), scalars as {"re", "im"},
forms as {"i,j,...": scalar} with sorted keys, so a report dumped with
sort_keys is byte-identical across runs.
"""

import dataclasses
import json
from enum import Enum
from typing import Any, List, Sequence

from sympy import QQ

from .exceptions import InputException
from .exterior import Form, Scalar, format_rational, parse_rational


def encode(value: Any) -> Any:
    """Convert dataclasses, forms, scalars and rationals into plain JSON values."""
    if value is None or isinstance(value, (bool, int, str, float)):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Scalar):
        return {"re": format_rational(value.x), "im": format_rational(value.y)}
    if isinstance(value, QQ.dtype):
        return format_rational(value)
    if isinstance(value, Form):
        return {",".join(str(k) for k in idx) or "1": encode(value.coefficient(idx)) for idx in value}
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        if hasattr(value, "to_dict"):
            return value.to_dict()
        out = {f.name: encode(getattr(value, f.name)) for f in dataclasses.fields(value)}
        if isinstance(getattr(type(value), "holds", None), property):
            out["holds"] = value.holds
        return out
    if isinstance(value, dict):
        return {_encode_key(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    raise TypeError(f"cannot encode {type(value).__name__}")


def _encode_key(key: Any) -> str:
    if isinstance(key, tuple):
        return ",".join(str(k) for k in key)
    return str(key)


def dumps(value: Any) -> str:
    return json.dumps(encode(value), sort_keys=True, indent=2)


def decode_rational_matrix(data: Any, label: str) -> List[List]:
    """
    Read a square array-of-arrays of "p/q" strings (integers also accepted).

    Raises:
        InputException: If the array is not square or an entry is not rational
    """
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise InputException(f"{label} must be an array of arrays")
    size = len(data)
    if any(len(r) != size for r in data):
        raise InputException(f"{label} must be square", f"{size} rows of lengths {[len(r) for r in data]}")
    return [[_decode_rational(c, label) for c in row] for row in data]


def _decode_rational(entry: Any, label: str):
    if isinstance(entry, bool):
        raise InputException(f"{label} contains a boolean")
    if isinstance(entry, int):
        return QQ(entry)
    if isinstance(entry, str):
        return parse_rational(entry)
    raise InputException(f"{label} entry {entry!r} is not a rational string")


def format_matrix(rows: Sequence[Sequence]) -> List[List[str]]:
    return [[format_rational(c) for c in row] for row in rows]
