"""Tensor files.

Two formats, chosen by extension:

``.json``
    ``{"dims": [n1, n2, n3], "data": [...]}`` with ``data`` in slice-major
    order (frontal slice 0 column by column, then slice 1, ...).  Floats are
    written with ``repr`` and round-trip exactly.
``.t3b``
    Three little-endian ``uint32`` (``n1, n2, n3``) followed by
    ``n1*n2*n3`` little-endian ``float64`` values in the same order.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import ParseError
from .tensor import Tensor3

__all__ = ["read_tensor", "write_tensor", "tensor_to_json", "tensor_from_json", "FORMATS"]

FORMATS = (".json", ".t3b")
_HEADER = struct.Struct("<3I")


def _suffix(path) -> str:
    ext = Path(path).suffix.lower()
    if ext not in FORMATS:
        raise ValueError(f"unknown tensor format {ext!r} for {path}; use one of {FORMATS}")
    return ext


def _check_dims(dims) -> tuple[int, int, int]:
    if (not isinstance(dims, (list, tuple)) or len(dims) != 3
            or not all(isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in dims)):
        raise ParseError(f"dims must be three positive integers, got {dims!r}")
    return tuple(dims)


def tensor_to_json(A: Tensor3) -> dict:
    return {"dims": list(A.shape), "data": [float(x) for x in A.to_flat()]}


def tensor_from_json(obj) -> Tensor3:
    if not isinstance(obj, dict) or "dims" not in obj or "data" not in obj:
        raise ParseError("expected an object with 'dims' and 'data'")
    dims = _check_dims(obj["dims"])
    data = obj["data"]
    if not isinstance(data, list):
        raise ParseError("'data' must be a list of numbers")
    expected = dims[0] * dims[1] * dims[2]
    if len(data) != expected:
        raise ParseError(f"data has {len(data)} entries, dims {list(dims)} need {expected}")
    try:
        flat = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric data: {exc}") from None
    try:
        return Tensor3.from_flat(dims, flat)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_tensor(path) -> Tensor3:
    """Load a tensor; raises :class:`ParseError` on malformed content and
    ``OSError`` when the file cannot be read."""
    ext = _suffix(path)
    raw = Path(path).read_bytes()
    if ext == ".json":
        try:
            obj = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ParseError(f"{path}: invalid JSON: {exc}") from None
        return tensor_from_json(obj)
    if len(raw) < _HEADER.size:
        raise ParseError(f"{path}: truncated header ({len(raw)} bytes)")
    dims = _check_dims(list(_HEADER.unpack_from(raw)))
    count = dims[0] * dims[1] * dims[2]
    body = len(raw) - _HEADER.size
    if body != 8 * count:
        raise ParseError(f"{path}: payload is {body} bytes, dims {list(dims)} need {8 * count}")
    flat = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size, count=count)
    try:
        return Tensor3.from_flat(dims, flat)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


def write_tensor(path, A: Tensor3) -> None:
    ext = _suffix(path)
    if ext == ".json":
        Path(path).write_text(json.dumps(tensor_to_json(A)) + "\n", encoding="utf-8")
        return
    payload = np.ascontiguousarray(A.to_flat(), dtype="<f8").tobytes()
    Path(path).write_bytes(_HEADER.pack(*A.shape) + payload)
