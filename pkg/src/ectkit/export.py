"""Deterministic file output: matrix CSVs, PGM heatmaps, metadata sidecars."""
from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .ingest import RasterImage, write_pgm


def atomic_write(path, data: bytes | str) -> None:
    """Write to a temporary file in the target directory, then rename."""
    path = Path(path)
    if isinstance(data, str):
        data = data.encode("utf-8")
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def matrix_csv(row_labels: Sequence, col_labels: Sequence[str], values: np.ndarray, corner: str) -> str:
    """Header row of column labels, then one row per label with its entries."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([corner, *col_labels])
    for label, row in zip(row_labels, values):
        w.writerow([_fmt(label), *(_fmt(v) for v in row)])
    return buf.getvalue()


def read_matrix_csv(text: str) -> tuple[list[str], np.ndarray, np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    labels = np.array([float(r[0]) for r in body])
    values = np.array([[float(x) for x in r[1:]] for r in body]).reshape(len(body), len(header) - 1)
    return header[1:], labels, values


def heatmap(values: np.ndarray, maxval: int = 255) -> tuple[RasterImage, float, float]:
    """Affine map min -> 0, max -> maxval; the top image row is the last matrix row.

    A constant matrix maps to all zeros.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        v = np.zeros((1, 1))
    lo, hi = float(v.min()), float(v.max())
    if hi > lo:
        scaled = np.floor((v - lo) * (maxval / (hi - lo)) + 0.5).astype(np.int64)
    else:
        scaled = np.zeros(v.shape, dtype=np.int64)
    scaled = np.clip(scaled, 0, maxval)
    return RasterImage.from_array(scaled[::-1], maxval), lo, hi


def heatmap_pgm(values: np.ndarray, maxval: int = 255) -> tuple[bytes, float, float]:
    img, lo, hi = heatmap(values, maxval)
    return write_pgm(img), lo, hi


def sidecar(meta: Mapping[str, object]) -> str:
    """``key=value`` lines in insertion order."""
    lines = []
    for k, v in meta.items():
        if isinstance(v, float):
            v = repr(v)
        lines.append(f"{k}={v}")
    return "\n".join(lines) + "\n"


def read_sidecar(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line and not line.startswith("#"):
            k, _, v = line.partition("=")
            out[k] = v
    return out
