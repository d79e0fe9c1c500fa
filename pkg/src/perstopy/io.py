"""Reading and writing the JSON and CSV formats used by the command line."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .metric import FiniteMetricSpace, PointedMetricSpace, validate


class InputError(Exception):
    """A file could not be read or parsed."""


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def read_json(path: str | Path):
    text = read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None


def space_from_json(data) -> FiniteMetricSpace | PointedMetricSpace:
    if not isinstance(data, dict) or "dist" not in data:
        raise InputError('a metric space needs an object with a "dist" matrix')
    dist = data["dist"]
    labels = data.get("labels")
    if labels is not None and len(labels) != len(dist):
        raise InputError(f"{len(labels)} labels for {len(dist)} rows")
    X = validate(dist, labels)
    bp = data.get("basepoint")
    return X if bp is None else X.pointed(int(bp))


def load_space(path: str | Path) -> FiniteMetricSpace | PointedMetricSpace:
    return space_from_json(read_json(path))


def space_to_json(X) -> dict:
    # distances keep full precision so a saved space reloads bit for bit
    space = X.space if isinstance(X, PointedMetricSpace) else X
    out = {"labels": list(space.labels), "dist": space.dist.tolist()}
    if isinstance(X, PointedMetricSpace):
        out["basepoint"] = X.basepoint
    return out


def rounded(obj):
    """Floats to 12 significant digits, infinities to the string "inf", arrays to lists."""
    if isinstance(obj, dict):
        return {str(k): rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return rounded(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.12g}")
    return obj


def dumps(obj) -> str:
    return json.dumps(rounded(obj), indent=2)


def matrix_to_csv(m) -> str:
    rows = []
    for row in np.asarray(m, dtype=float):
        rows.append(",".join("nan" if math.isnan(v) else "inf" if math.isinf(v) else f"{v:.12g}" for v in row))
    return "\n".join(rows) + "\n"
