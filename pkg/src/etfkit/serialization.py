"""JSON encodings shared by every subcommand.

Matrices use ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` (row-major);
frames add ``"kind": "frame"`` and ``"real"``.  Floats are written with
``repr`` so a save/load cycle is bit-exact.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError
from .frames import Frame


def matrix_to_json(M: np.ndarray) -> dict:
    M = np.asarray(M, dtype=np.complex128)
    rows, cols = M.shape
    data = [[float(z.real), float(z.imag)] for z in M.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_json(doc) -> np.ndarray:
    if not isinstance(doc, dict):
        raise ParseError("matrix document must be a JSON object")
    try:
        rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    except KeyError as exc:
        raise ParseError(f"matrix document is missing {exc.args[0]!r}") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
        raise ParseError("rows and cols must be non-negative integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        got = len(data) if isinstance(data, list) else type(data).__name__
        raise ParseError(f"expected {rows * cols} entries for a {rows} x {cols} matrix, got {got}")
    out = np.empty(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(data):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise ParseError(f"entry {k} must be a [re, im] pair of numbers")
        if not all(math.isfinite(x) for x in pair):
            raise ParseError(f"entry {k} is not finite")
        out[k] = complex(pair[0], pair[1])
    return out.reshape(rows, cols)


def frame_to_json(f: Frame) -> dict:
    doc = {"kind": "frame", "real": f.real}
    doc.update(matrix_to_json(f.V))
    return doc


def frame_from_json(doc) -> Frame:
    if isinstance(doc, dict) and doc.get("kind", "frame") != "frame":
        raise ParseError(f"expected kind 'frame', got {doc.get('kind')!r}")
    return Frame(matrix_from_json(doc))


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def load_json(path: str | os.PathLike):
    return loads(Path(path).read_text())


def dumps(doc) -> str:
    return json.dumps(doc, indent=None, separators=(",", ":"), allow_nan=False) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the target directory and rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_frame(f: Frame, path: str | os.PathLike) -> None:
    atomic_write(path, dumps(frame_to_json(f)))


def load_frame(path: str | os.PathLike) -> Frame:
    return frame_from_json(load_json(path))


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and tuples into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def incidence_csv(sys) -> str:
    """Point-by-block 0/1 incidence matrix as CSV, one row per point."""
    return "".join(",".join(str(int(x)) for x in row) + "\n" for row in sys.incidence())


SCHEMA_NAMES = (
    "bound_report", "construct", "error", "frame", "frame_report", "matrix",
    "membership_report", "pert_check", "table1", "witness",
)


def load_schema(name: str) -> dict:
    """A JSON Schema shipped with the package, by file stem."""
    if name not in SCHEMA_NAMES:
        raise KeyError(f"unknown schema {name!r}")
    return json.loads(resources.files("etfkit").joinpath("schemas", f"{name}.json").read_text())
