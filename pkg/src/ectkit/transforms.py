"""Euler characteristic transform and its smooth, temporal and lifted variants."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._parallel import map_ordered
from .complex import EmbeddedComplex
from .directions import as_direction_array
from .filtration import EulerCurve, _step_data, ecc, simplex_heights, vertex_heights

GLOBAL = "global"
PER_DIRECTION = "per_direction"
MODES = (GLOBAL, PER_DIRECTION)

# heights this close above a threshold (relative to max(1, R)) count as reached;
# absorbs roundoff from rotating or re-centering coordinates
THRESHOLD_TOL = 1e-9

LEVEL_TOL = 1e-9


def _domain_radius(radius: float) -> float:
    """Substitute 1 for a degenerate radius so [-R, R] has positive length."""
    return float(radius) if radius > 0 else 1.0


@dataclass(frozen=True, eq=False)
class ECTMatrix:
    """Thresholds x directions grid of Euler characteristics.

    ``entries[i, j]`` is chi of the sublevel complex at threshold
    ``thresholds[i, j]`` in direction ``directions[j]``. In global mode every
    column shares the same thresholds.
    """

    directions: np.ndarray
    mode: str
    thresholds: np.ndarray
    entries: np.ndarray
    radius: float
    per_direction_ranges: np.ndarray | None = None

    @property
    def num_thresholds(self) -> int:
        return int(self.entries.shape[0])

    @property
    def num_directions(self) -> int:
        return int(self.entries.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def _ect_column(heights: list[np.ndarray], thresholds: np.ndarray, final: int, radius: float, tol: float):
    bp, chi = _step_data(heights)
    padded = np.concatenate([[0], chi]).astype(np.int64)
    col = padded[np.searchsorted(bp, thresholds + tol, side="right")]
    return np.where(thresholds >= radius, final, col)


def ect(
    complex: EmbeddedComplex,
    directions,
    num_thresholds: int,
    mode: str = GLOBAL,
    radius: float | None = None,
    workers: int | None = None,
) -> ECTMatrix:
    """Sample the ECT on ``num_thresholds`` thresholds per direction.

    Global mode uses T evenly spaced thresholds on [-R, R] (``radius``
    overrides the complex's own R, e.g. to put several shapes on one grid;
    a zero radius becomes 1).
    Per-direction mode spaces them between the min and max vertex height in
    each direction. Each column comes from one sorted pass over simplex
    heights and a binary search per threshold.
    """
    if num_thresholds < 2:
        raise ValueError(f"need at least 2 thresholds, got {num_thresholds}")
    if mode not in MODES:
        raise ValueError(f"unknown threshold mode {mode!r}; expected one of {MODES}")
    dirs = as_direction_array(directions)
    if dirs.shape[1] != complex.dim:
        raise ValueError(f"directions live in R^{dirs.shape[1]}, complex in R^{complex.dim}")
    R = complex.radius if radius is None else float(radius)
    if R < complex.radius:
        raise ValueError(f"radius {R} is smaller than the complex's radius {complex.radius}")
    R = _domain_radius(R)
    final = sum((-1) ** k * c for k, c in enumerate(complex.counts))
    tol = THRESHOLD_TOL * max(1.0, R)
    verts = complex.vertex_indices()
    T = int(num_thresholds)

    def column(w):
        hs = simplex_heights(complex, w)
        if mode == GLOBAL:
            th = np.linspace(-R, R, T)
            rng = None
        else:
            hv = hs[0]
            lo, hi = (float(hv.min()), float(hv.max())) if verts.size else (0.0, 0.0)
            th = np.linspace(lo, hi, T)
            th[-1] = hi
            rng = (lo, hi)
        return _ect_column(hs, th, final, R, tol), th, rng

    cols = map_ordered(column, list(dirs), workers)
    entries = np.stack([c[0] for c in cols], axis=1) if cols else np.zeros((T, 0), dtype=np.int64)
    if mode == GLOBAL:
        thresholds = np.linspace(-R, R, T)
        ranges = None
    else:
        thresholds = np.stack([c[1] for c in cols], axis=1)
        ranges = np.array([c[2] for c in cols], dtype=float)
    return ECTMatrix(dirs, mode, thresholds, entries.astype(np.int64), R, ranges)


# --------------------------------------------------------------------------
# smooth Euler characteristic curves


@dataclass(frozen=True, eq=False)
class SmoothCurve:
    """Piecewise-linear function on [-R, R], zero outside."""

    knots: np.ndarray
    values: np.ndarray
    radius: float
    mean: float = 0.0

    def evaluate(self, t) -> np.ndarray:
        return np.interp(np.asarray(t, dtype=float), self.knots, self.values, left=0.0, right=0.0)

    def __call__(self, t: float) -> float:
        return float(self.evaluate(t))

    def __iter__(self):
        return iter(zip(self.knots.tolist(), self.values.tolist()))


def sect_curve(curve: EulerCurve, radius: float) -> SmoothCurve:
    """Integrate the mean-centred Euler curve from -R up to each t.

    The curve is constant between breakpoints, so the integral is exact and
    piecewise linear with knots at -R, the interior breakpoints, and R.
    """
    R = float(radius)
    if not R > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    bp = curve.breakpoints
    inner = bp[(bp > -R) & (bp < R)]
    xs = np.concatenate([[-R], inner, [R]])
    vals = curve.evaluate(xs[:-1]).astype(float)
    lengths = np.diff(xs)
    mean = math.fsum((vals * lengths).tolist()) / (2 * R)
    increments = (vals - mean) * lengths
    ys = np.concatenate([[0.0], np.cumsum(increments)])
    return SmoothCurve(xs, ys, R, mean)


@dataclass(frozen=True, eq=False)
class SECT:
    directions: np.ndarray
    curves: tuple[SmoothCurve, ...]
    radius: float

    def matrix(self, num_thresholds: int) -> tuple[np.ndarray, np.ndarray]:
        """Sample every curve on T evenly spaced heights in [-R, R].

        Returns ``(heights, values)`` with ``values`` of shape (T, N).
        """
        if num_thresholds < 2:
            raise ValueError(f"need at least 2 thresholds, got {num_thresholds}")
        ts = np.linspace(-self.radius, self.radius, int(num_thresholds))
        if not self.curves:
            return ts, np.zeros((ts.size, 0))
        return ts, np.stack([c.evaluate(ts) for c in self.curves], axis=1)


def sect(complex: EmbeddedComplex, directions, radius: float | None = None, workers: int | None = None) -> SECT:
    """Smooth Euler characteristic curve in every direction.

    A zero radius (a single point at the origin, or an empty complex) is
    replaced by 1.
    """
    dirs = as_direction_array(directions)
    R = _domain_radius(complex.radius if radius is None else radius)
    curves = map_ordered(lambda w: sect_curve(ecc(complex, w), R), list(dirs), workers)
    return SECT(dirs, tuple(curves), R)


@dataclass(frozen=True, eq=False)
class DetectSurface:
    """Direction-averaged SECC values, one row per time step.

    The direction integral is taken as the plain mean over the sampled
    directions; multiply by the sphere's measure for the unnormalised value.
    """

    times: np.ndarray
    eval_heights: np.ndarray
    values: np.ndarray
    num_directions: int
    radius: float
    normalization: str = "mean_over_directions"


def detect(
    series: Sequence[EmbeddedComplex],
    directions,
    eval_heights,
    times=None,
    radius: float | None = None,
    workers: int | None = None,
) -> DetectSurface:
    """DETECT surface of a time series of shapes.

    Every SECC is built on the common domain [-R, R], R being the largest
    radius in the series unless given.
    """
    series = list(series)
    if not series:
        raise ValueError("DETECT needs at least one shape")
    dirs = as_direction_array(directions)
    xs = np.asarray(eval_heights, dtype=float).ravel()
    R = _domain_radius(max(K.radius for K in series) if radius is None else radius)
    if times is None:
        times = np.arange(len(series), dtype=float)
    times = np.asarray(times, dtype=float)
    if times.shape[0] != len(series):
        raise ValueError("times and series have different lengths")

    def row(K):
        per_dir = np.stack([sect_curve(ecc(K, w), R).evaluate(xs) for w in dirs], axis=0)
        return per_dir.mean(axis=0)

    values = np.stack(map_ordered(row, series, workers), axis=0)
    return DetectSurface(times, xs, values, int(dirs.shape[0]), R)


# --------------------------------------------------------------------------
# lifted transforms on scalar fields


def _lifted_chi(field, v, h: float, member: np.ndarray) -> int:
    K = field.complex
    hv = vertex_heights(K.points, v)
    reach_all = h >= K.radius
    chi = 0
    for k, block in enumerate(K.simplices):
        if block.shape[0] == 0:
            continue
        sel = member[block].all(axis=1)
        if not reach_all:
            sel &= hv[block].max(axis=1) <= h
        chi += (-1) ** k * int(sel.sum())
    return chi


def lect_members(field, t: float) -> np.ndarray:
    return np.abs(field.values - t) <= LEVEL_TOL


def select_members(field, t: float) -> np.ndarray:
    return field.values >= t - LEVEL_TOL


def lect(field, v, h: float, t: float) -> int:
    """chi of the part of the level set {f = t} at height <= h along v.

    A simplex is in the level set when all of its vertex values equal t
    to within ``LEVEL_TOL``.
    """
    return _lifted_chi(field, v, h, lect_members(field, t))


def select(field, v, h: float, t: float) -> int:
    """chi of the part of the superlevel set {f >= t} at height <= h along v."""
    return _lifted_chi(field, v, h, select_members(field, t))


def selected_simplices(field, v, h: float, t: float, superlevel: bool = True) -> set[tuple[int, ...]]:
    member = select_members(field, t) if superlevel else lect_members(field, t)
    K = field.complex
    hv = vertex_heights(K.points, v)
    out = set()
    for block in K.simplices:
        for row in block:
            if member[row].all() and (h >= K.radius or hv[row].max() <= h):
                out.add(tuple(int(x) for x in row))
    return out


def level_values(field) -> np.ndarray:
    """Distinct attained vertex values, merging those within ``LEVEL_TOL``."""
    vals = np.unique(np.asarray(field.values, dtype=float))
    if vals.size == 0:
        return vals
    keep = np.concatenate([[True], np.diff(vals) > LEVEL_TOL])
    return vals[keep]
