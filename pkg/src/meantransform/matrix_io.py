"""JSON interchange for matrices.

Wire format::

    {"rows": n, "cols": m, "data": [[re, im], ...]}

with ``rows * cols`` pairs in row-major order.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .numerics import InputError, as_matrix

__all__ = ["matrix_to_json", "matrix_from_json", "load_matrix", "dumps_matrix", "complex_to_json", "complex_from_json"]


def _real(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise InputError("non-finite number in matrix data")
    return v


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    # normalise -0.0 so output is byte-stable
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def complex_from_json(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise InputError(f"complex entries are [re, im] pairs, got {pair!r}")
    return complex(_real(pair[0]), _real(pair[1]))


def matrix_to_json(T) -> dict:
    A = as_matrix(T, square=False)
    rows, cols = A.shape
    return {"rows": rows, "cols": cols, "data": [complex_to_json(z) for z in A.ravel()]}


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InputError("matrix JSON must be an object")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except KeyError as exc:
        raise InputError(f"matrix JSON missing field {exc}") from None
    for name, v in (("rows", rows), ("cols", cols)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise InputError(f"{name} must be a positive integer, got {v!r}")
    if not isinstance(data, list) or len(data) != rows * cols:
        got = len(data) if isinstance(data, list) else type(data).__name__
        raise InputError(f"data must hold rows*cols = {rows * cols} entries, got {got}")
    A = np.array([complex_from_json(p) for p in data], dtype=complex).reshape(rows, cols)
    return A


def dumps_matrix(T) -> str:
    return json.dumps(matrix_to_json(T))


def load_matrix(path) -> np.ndarray:
    """Read a matrix file; any parse or format problem raises ``InputError``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return matrix_from_json(obj)
