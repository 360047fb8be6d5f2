"""Directional height functions, sublevel complexes and Euler curves."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .complex import EmbeddedComplex, Simplex, _readonly, _tight_radius
from .directions import Direction

# distinct heights closer than this (relative to max(1, |h|)) are one breakpoint
MERGE_TOL = 1e-12


def _vector(omega) -> np.ndarray:
    if isinstance(omega, Direction):
        return np.asarray(omega.vector, dtype=float)
    return np.asarray(omega, dtype=float)


def vertex_heights(points: np.ndarray, omega) -> np.ndarray:
    """<p, omega> for every point.

    Written as an explicit sum over coordinates so the result does not
    depend on BLAS blocking.
    """
    w = _vector(omega)
    if points.shape[1] != w.shape[0]:
        raise ValueError(f"direction has {w.shape[0]} components, complex lives in R^{points.shape[1]}")
    h = points[:, 0] * w[0]
    for j in range(1, w.shape[0]):
        h = h + points[:, j] * w[j]
    return h


def simplex_heights(complex: EmbeddedComplex, omega) -> list[np.ndarray]:
    """Per-dimension arrays of max vertex height over each simplex."""
    hv = vertex_heights(complex.points, omega)
    return [hv[b].max(axis=1) if b.shape[0] else np.zeros(0) for b in complex.simplices]


def height(simplex: Simplex, complex: EmbeddedComplex, omega) -> float:
    """max over the simplex's vertices of <v, omega>."""
    hv = vertex_heights(complex.points[list(simplex)], omega)
    return float(hv.max())


def sublevel(complex: EmbeddedComplex, omega, a: float) -> EmbeddedComplex:
    """Subcomplex of simplices whose height is at most ``a``."""
    hs = simplex_heights(complex, omega)
    blocks = tuple(_readonly(b[h <= a]) for b, h in zip(complex.simplices, hs))
    return EmbeddedComplex(complex.points, blocks, _tight_radius(complex.points, blocks))


@dataclass(frozen=True, eq=False)
class EulerCurve:
    """Right-continuous step function a -> chi(K_a) on [-R, R].

    Stored as breakpoints where the value changes: ``values[i]`` holds on
    ``[breakpoints[i], breakpoints[i+1])``. The curve is 0 before the first
    breakpoint and ``final_chi`` from ``radius`` on.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    final_chi: int
    radius: float

    def __len__(self) -> int:
        return int(self.breakpoints.shape[0])

    def __iter__(self):
        return iter(zip(self.breakpoints.tolist(), self.values.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EulerCurve):
            return NotImplemented
        return (
            self.final_chi == other.final_chi
            and np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.values, other.values)
        )

    def evaluate(self, a, tol: float = 0.0) -> np.ndarray:
        """Vectorised curve value; breakpoints up to ``a + tol`` count as reached."""
        a = np.asarray(a, dtype=float)
        idx = np.searchsorted(self.breakpoints, a + tol, side="right")
        padded = np.concatenate([[0], self.values]).astype(np.int64)
        out = padded[idx]
        # K lies in B(0, R): everything has entered by a = R
        return np.where(a >= self.radius, self.final_chi, out)

    def __call__(self, a: float) -> int:
        return int(self.evaluate(a))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for a, chi in self:
            w.writerow([repr(float(a)), int(chi)])
        return buf.getvalue()


def _step_data(heights: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Merged breakpoints and chi after each, before collapsing equal runs."""
    h = np.concatenate(heights)
    if h.size == 0:
        return np.zeros(0), np.zeros(0, dtype=np.int64)
    w = np.concatenate([np.full(x.shape[0], (-1) ** k, dtype=np.int64) for k, x in enumerate(heights)])
    order = np.argsort(h, kind="stable")
    hs = h[order]
    cs = np.cumsum(w[order])
    gap = np.diff(hs) > MERGE_TOL * np.maximum(1.0, np.abs(hs[1:]))
    ends = np.flatnonzero(np.append(gap, True))
    return hs[ends], cs[ends]


def ecc(complex: EmbeddedComplex, omega, radius: float | None = None) -> EulerCurve:
    """Euler characteristic curve of ``complex`` in direction ``omega``.

    Sorts simplices by height and accumulates (-1)^dim, so the cost is one
    sort. Heights within ``MERGE_TOL`` are merged into one breakpoint
    (placed at the largest of them) and runs of equal chi are collapsed.
    """
    bp, chi = _step_data(simplex_heights(complex, omega))
    final = int(chi[-1]) if chi.size else 0
    if chi.size:
        keep = chi != np.concatenate([[0], chi[:-1]])
        bp, chi = bp[keep], chi[keep]
    r = complex.radius if radius is None else float(radius)
    return EulerCurve(_readonly(bp.copy()), _readonly(chi.astype(np.int64)), final, r)


def read_curve_csv(text: str, radius: float) -> EulerCurve:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    bp = np.array([float(r[0]) for r in rows], dtype=float)
    chi = np.array([int(r[1]) for r in rows], dtype=np.int64)
    final = int(chi[-1]) if chi.size else 0
    return EulerCurve(bp, chi, final, float(radius))
