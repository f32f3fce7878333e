"""JSON serialisation with 17 significant digits."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .qmat import QMatrix
from .quat import Quaternion
from .slicefun import SliceSeries


def _float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps(obj) -> str:
    """Compact JSON with every float written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Quaternion):
        return dumps(obj.to_list())
    if isinstance(obj, QMatrix):
        return dumps(matrix_to_dict(obj))
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def matrix_to_dict(T: QMatrix) -> dict:
    return {"n": T.n, "entries": T.data.tolist()}


def matrix_from_dict(d: dict) -> QMatrix:
    entries = np.asarray(d["entries"], dtype=float)
    n = int(d.get("n", entries.shape[0]))
    if entries.shape != (n, n, 4):
        raise ValueError(f"matrix entries must have shape ({n}, {n}, 4), got {entries.shape}")
    return QMatrix(entries)


def read_matrix(path) -> QMatrix:
    return matrix_from_dict(json.loads(Path(path).read_text()))


def write_matrix(T: QMatrix, path) -> None:
    Path(path).write_text(dumps(matrix_to_dict(T)) + "\n")


def read_series(path) -> SliceSeries:
    return SliceSeries.from_dict(json.loads(Path(path).read_text()))


def write_series(f: SliceSeries, path) -> None:
    Path(path).write_text(dumps(f.to_dict()) + "\n")
