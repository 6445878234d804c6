"""Delimited and JSON artifact formats."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .curves import Curve
from .errors import IoFailure, ValidationError
from .wigner import PhaseFunction, PhaseGridSpec


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def write_columns(path: Path, columns: dict[str, np.ndarray]) -> Path:
    return write_csv(path, list(columns), zip(*columns.values()))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return None if np.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    try:
        path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def write_curve(curve: Curve, path: Path) -> list[Path]:
    """Curve CSV (``lnc,value``) plus a JSON sidecar recording its kind."""
    path = Path(path)
    csv_path = write_csv(path, ["lnc", "value"], zip(curve.abscissa, curve.ordinate))
    side = write_json(path.with_suffix(".json"), {"kind": curve.kind, "points": len(curve)})
    return [csv_path, side]


def read_curve(path: Path) -> Curve:
    path = Path(path)
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    kind = json.loads(path.with_suffix(".json").read_text())["kind"]
    return Curve(data[:, 0], data[:, 1], kind)


def write_phase(f: PhaseFunction, path: Path) -> Path:
    """Phase grid CSV ``x,y,f``, row-major (x outer, y inner)."""
    x, y = f.spec.x, f.spec.y
    xx = np.repeat(x, y.size)
    yy = np.tile(y, x.size)
    return write_csv(path, ["x", "y", "f"], zip(xx, yy, f.values.ravel()))


def read_phase(path: Path) -> PhaseFunction:
    data = np.loadtxt(Path(path), delimiter=",", skiprows=1, ndmin=2)
    x = np.unique(data[:, 0])
    y = np.unique(data[:, 1])
    if x.size * y.size != data.shape[0]:
        raise ValidationError("phase CSV is not a full rectangular grid")
    spec = PhaseGridSpec(x[0], x[-1], y[0], y[-1], x.size, y.size)
    return PhaseFunction(spec, data[:, 2].reshape(x.size, y.size))
