"""Centering, PCA alignment, and distances between transforms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .complex import EmbeddedComplex
from .transforms import ECTMatrix, SECT, SmoothCurve

EIGEN_GAP_TOL = 1e-6
SKEW_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class AlignmentReport:
    """What was done to a shape: x_new = rotation @ (x + translation)."""

    translation: np.ndarray
    rotation: np.ndarray
    signs: tuple[int, ...] = ()
    sign_ambiguous: tuple[bool, ...] = ()
    eigenvalues: np.ndarray | None = None
    degenerate_eigenvalues: bool = False
    notes: list[str] = field(default_factory=list)

    def to_metadata(self) -> dict[str, str]:
        meta = {
            "translation": " ".join(repr(float(x)) for x in self.translation),
            "rotation": ";".join(" ".join(repr(float(x)) for x in row) for row in self.rotation),
        }
        if self.signs:
            meta["axis_signs"] = " ".join(f"{s:+d}" for s in self.signs)
            meta["sign_ambiguous"] = " ".join(str(b).lower() for b in self.sign_ambiguous)
        if self.eigenvalues is not None:
            meta["eigenvalues"] = " ".join(repr(float(x)) for x in self.eigenvalues)
            meta["degenerate_eigenvalues"] = str(self.degenerate_eigenvalues).lower()
        return meta


def center(complex: EmbeddedComplex) -> tuple[EmbeddedComplex, AlignmentReport]:
    """Translate so the centroid of the complex's vertices is the origin."""
    if complex.is_empty():
        raise ValueError("cannot center an empty complex")
    shift = -complex.used_points().mean(axis=0)
    moved = complex.with_points(complex.points + shift)
    return moved, AlignmentReport(shift, np.eye(complex.dim))


def pca_align(complex: EmbeddedComplex) -> tuple[EmbeddedComplex, AlignmentReport]:
    """Center, then rotate principal axes onto the coordinate axes.

    Axes are ordered by decreasing variance of the vertex coordinates.
    Each axis is oriented so the third central moment along it is
    nonnegative; when that moment is within tolerance of zero the sign
    defaults to +1 and is flagged. If the result would be a reflection the
    last axis is flipped.
    """
    centered, first = center(complex)
    X = centered.used_points()
    cov = X.T @ X / X.shape[0]
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals, kind="stable")[::-1]
    evals, evecs = evals[order], evecs[:, order]

    Y = X @ evecs
    scale = max(1.0, centered.radius) ** 3
    skew = (Y ** 3).mean(axis=0)
    ambiguous = tuple(bool(abs(s) <= SKEW_TOL * scale) for s in skew)
    signs = [1 if (amb or s > 0) else -1 for s, amb in zip(skew, ambiguous)]
    basis = evecs * np.array(signs)
    notes = []
    if np.linalg.det(basis) < 0:
        signs[-1] = -signs[-1]
        basis[:, -1] = -basis[:, -1]
        notes.append("last axis flipped to keep a proper rotation")
    rotation = basis.T
    gaps = np.abs(np.diff(evals))
    degenerate = bool(gaps.size and gaps.min() <= EIGEN_GAP_TOL)
    if degenerate:
        notes.append("repeated covariance eigenvalues; principal axes are not unique")
    if any(ambiguous):
        notes.append("near-zero third moment; axis sign defaulted to +1")

    aligned = centered.with_points(centered.points @ rotation.T)
    report = AlignmentReport(
        first.translation, rotation, tuple(signs), ambiguous, evals, degenerate, notes
    )
    return aligned, report


# --------------------------------------------------------------------------
# distances


class GridMismatch(ValueError):
    pass


def _check_directions(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape or not np.allclose(a, b, rtol=0, atol=1e-12):
        raise GridMismatch("direction sets differ")


def ect_distance(A: ECTMatrix, B: ECTMatrix, p="2") -> float:
    """RMS (p=2) or max-abs (p=inf) difference of two ECT matrices on one grid."""
    if A.mode != B.mode:
        raise GridMismatch(f"threshold mode differs: {A.mode} vs {B.mode}")
    if A.num_thresholds != B.num_thresholds:
        raise GridMismatch(f"num_thresholds differs: {A.num_thresholds} vs {B.num_thresholds}")
    _check_directions(A.directions, B.directions)
    if A.mode == "global" and not math.isclose(A.radius, B.radius, rel_tol=1e-12, abs_tol=0.0):
        raise GridMismatch(f"radius differs: {A.radius!r} vs {B.radius!r}")
    diff = (A.entries - B.entries).astype(float)
    key = str(p).lower()
    if key == "2":
        return float(np.sqrt(np.mean(diff ** 2)))
    if key in ("inf", "infinity", "sup"):
        return float(np.max(np.abs(diff)))
    raise ValueError(f"unsupported norm {p!r}; use 2 or inf")


def _l2_squared(a: SmoothCurve, b: SmoothCurve, R: float) -> float:
    """Exact integral of (a - b)^2 over [-R, R] for piecewise-linear curves."""
    ts = np.union1d(np.union1d(a.knots, b.knots), [-R, R])
    ts = ts[(ts >= -R) & (ts <= R)]
    d = a.evaluate(ts) - b.evaluate(ts)
    h = np.diff(ts)
    d0, d1 = d[:-1], d[1:]
    return math.fsum((h * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0).tolist())


def sect_distance(A: SECT, B: SECT) -> float:
    """sqrt of the direction-averaged L2 distance between SECC curves."""
    _check_directions(A.directions, B.directions)
    if not math.isclose(A.radius, B.radius, rel_tol=1e-12, abs_tol=0.0):
        raise GridMismatch(f"radius differs: {A.radius!r} vs {B.radius!r}")
    if not A.curves:
        return 0.0
    total = math.fsum(_l2_squared(a, b, A.radius) for a, b in zip(A.curves, B.curves))
    return math.sqrt(total / len(A.curves))
