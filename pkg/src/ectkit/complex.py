"""Embedded simplicial complexes and their Euler characteristic.

A complex stores its simplices grouped by dimension: ``simplices[k]`` is an
integer array of shape ``(c_k, k + 1)`` whose rows are vertex indices in
strictly increasing order, sorted lexicographically.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 3

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Raised when simplices cannot form a valid complex."""


def canonical_simplex(vertices: Iterable[int]) -> Simplex:
    """Sort vertex indices; reject repeats and empty input."""
    s = tuple(sorted(int(v) for v in vertices))
    if not s:
        raise ComplexError("empty simplex")
    if len(s) > MAX_DIM + 1:
        raise ComplexError(f"simplex {s} has dimension {len(s) - 1} > {MAX_DIM}")
    if any(a == b for a, b in zip(s, s[1:])):
        raise ComplexError(f"simplex {s} repeats a vertex")
    return s


def _empty_block(k: int) -> np.ndarray:
    return np.zeros((0, k + 1), dtype=np.int64)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EmbeddedComplex:
    """A finite geometric simplicial complex in R^2 or R^3.

    Instances produced by :func:`build_complex` are face-closed and
    canonical. Direct construction performs no checks, which is how
    deliberately broken complexes are made for :func:`validate`.
    """

    points: np.ndarray
    simplices: tuple[np.ndarray, ...]
    radius: float

    @property
    def dim(self) -> int:
        """Ambient dimension d."""
        return int(self.points.shape[1])

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(int(b.shape[0]) for b in self.simplices)

    @property
    def top_dim(self) -> int:
        """Largest k with a k-simplex, or -1 for the empty complex."""
        nonempty = [k for k, c in enumerate(self.counts) if c]
        return nonempty[-1] if nonempty else -1

    @property
    def num_simplices(self) -> int:
        return sum(self.counts)

    def is_empty(self) -> bool:
        return self.num_simplices == 0

    def __len__(self) -> int:
        return self.num_simplices

    def __iter__(self):
        for block in self.simplices:
            for row in block:
                yield tuple(int(v) for v in row)

    def simplex_set(self) -> set[Simplex]:
        return set(self)

    def vertex_indices(self) -> np.ndarray:
        if not self.simplices or self.simplices[0].shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        return self.simplices[0][:, 0]

    def used_points(self) -> np.ndarray:
        """Coordinates of points that appear as 0-simplices."""
        return self.points[self.vertex_indices()]

    def with_points(self, points: np.ndarray) -> "EmbeddedComplex":
        """Same combinatorics on new coordinates; radius is recomputed."""
        points = _readonly(np.array(points, dtype=float))
        return EmbeddedComplex(points, self.simplices, _tight_radius(points, self.simplices))

    def __repr__(self) -> str:
        return f"EmbeddedComplex(d={self.dim}, counts={self.counts}, radius={self.radius:.6g})"


def _tight_radius(points: np.ndarray, simplices: Sequence[np.ndarray]) -> float:
    used = np.unique(np.concatenate([b.ravel() for b in simplices])) if simplices else []
    if len(used) == 0:
        return 0.0
    return float(np.sqrt((points[used] ** 2).sum(axis=1)).max())


def _as_points(points) -> np.ndarray:
    pts = np.array(points, dtype=float)
    if pts.ndim == 1 and pts.size == 0:
        pts = pts.reshape(0, 2)
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise ComplexError(f"points must have shape (n, 2) or (n, 3), got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ComplexError("points contain NaN or infinite coordinates")
    return pts


def _group_input(simplices) -> dict[int, np.ndarray]:
    """Group raw simplices by vertex count, as sorted integer rows."""
    if isinstance(simplices, np.ndarray):
        if simplices.size == 0:
            return {}
        arr = np.atleast_2d(simplices)
        rows = {arr.shape[1]: [arr.astype(np.int64)]}
    else:
        rows: dict[int, list] = {}
        for s in simplices:
            s = list(s)
            rows.setdefault(len(s), []).append(s)
    out = {}
    for n, group in rows.items():
        if n == 0:
            raise ComplexError("empty simplex")
        if n > MAX_DIM + 1:
            raise ComplexError(f"simplex with {n} vertices has dimension > {MAX_DIM}")
        arr = np.vstack([np.asarray(g, dtype=np.int64).reshape(-1, n) for g in group])
        out[n] = np.sort(arr, axis=1)
    return out


def build_complex(points, simplices) -> EmbeddedComplex:
    """Validate simplices and complete them to a face-closed complex.

    ``simplices`` is an iterable of vertex-index sequences (mixed sizes
    allowed) or a single ``(m, k+1)`` integer array. Missing faces are
    added; a simplex listed twice (after sorting its vertices) is an error.
    The radius is the largest norm among points used by some simplex.
    """
    pts = _as_points(points)
    n_pts = pts.shape[0]
    groups = _group_input(simplices)

    blocks = [_empty_block(k) for k in range(MAX_DIM + 1)]
    for n, arr in groups.items():
        if arr.size and (arr.min() < 0 or arr.max() >= n_pts):
            bad = arr[(arr < 0) | (arr >= n_pts)][0]
            raise ComplexError(f"vertex index {int(bad)} out of range for {n_pts} points")
        if n > 1:
            rep = np.nonzero((np.diff(arr, axis=1) == 0).any(axis=1))[0]
            if rep.size:
                raise ComplexError(f"simplex {tuple(arr[rep[0]])} repeats a vertex")
        uniq, counts = np.unique(arr, axis=0, return_counts=True)
        if (counts > 1).any():
            dup = tuple(int(v) for v in uniq[np.argmax(counts > 1)])
            raise ComplexError(f"duplicate simplex {dup}")
        blocks[n - 1] = uniq

    # close downward: faces of each k-simplex are its (k-1)-subsets
    for k in range(MAX_DIM, 0, -1):
        top = blocks[k]
        if top.shape[0] == 0:
            continue
        faces = [top[:, list(c)] for c in combinations(range(k + 1), k)]
        blocks[k - 1] = np.unique(np.vstack([blocks[k - 1], *faces]), axis=0)

    blocks = tuple(_readonly(np.ascontiguousarray(b)) for b in blocks)
    pts = _readonly(pts)
    return EmbeddedComplex(pts, blocks, _tight_radius(pts, blocks))


def raw_complex(points, simplices, radius: float | None = None) -> EmbeddedComplex:
    """Wrap simplices as given, without closure or canonicalization.

    Intended for inspecting malformed input with :func:`validate`.
    """
    pts = np.array(points, dtype=float).reshape(-1, np.shape(points)[-1] if len(points) else 2)
    buckets: list[list] = [[] for _ in range(MAX_DIM + 1)]
    for s in simplices:
        s = list(s)
        if not 1 <= len(s) <= MAX_DIM + 1:
            raise ComplexError(f"simplex {s} has unsupported size")
        buckets[len(s) - 1].append(s)
    blocks = tuple(
        np.asarray(b, dtype=np.int64).reshape(-1, k + 1) for k, b in enumerate(buckets)
    )
    if radius is None:
        ok = [b[(b >= 0).all(axis=1) & (b < len(pts)).all(axis=1)] for b in blocks]
        radius = _tight_radius(pts, ok)
    return EmbeddedComplex(pts, blocks, float(radius))


def empty_complex(dim: int = 2) -> EmbeddedComplex:
    return build_complex(np.zeros((0, dim)), [])


def euler_characteristic(complex: EmbeddedComplex) -> int:
    """Alternating sum c_0 - c_1 + c_2 - c_3 of simplex counts."""
    return sum((-1) ** k * c for k, c in enumerate(complex.counts))


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    severity: str = "error"  # or "warning"

    def __str__(self) -> str:
        return f"{self.severity}: {self.kind}: {self.message}"


def validate(complex: EmbeddedComplex, geometry: bool = True) -> list[Violation]:
    """Report structural problems and, in the plane, improper intersections.

    Errors cover index range, vertex ordering, duplicates, face closure and
    the radius bound. For d = 2 every pair of maximal simplices is checked
    with exact rational predicates; each improperly intersecting pair gives
    one ``intersection`` warning. No geometric check is made for d = 3.
    """
    out: list[Violation] = []
    pts = complex.points
    n_pts = pts.shape[0]
    present: set[Simplex] = set()

    for k, block in enumerate(complex.simplices):
        for row in block:
            s = tuple(int(v) for v in row)
            if any(v < 0 or v >= n_pts for v in s):
                out.append(Violation("index", f"simplex {s} references a missing point"))
                continue
            if any(a >= b for a, b in zip(s, s[1:])):
                out.append(Violation("ordering", f"simplex {s} is not strictly increasing"))
                s = tuple(sorted(set(s)))
            if s in present:
                out.append(Violation("duplicate", f"simplex {s} appears more than once"))
            present.add(s)

    for s in sorted(present, key=lambda t: (len(t), t)):
        for r in range(1, len(s)):
            for face in combinations(s, r):
                if face not in present:
                    out.append(Violation("closure", f"face {face} of {s} is missing"))

    used = sorted({v for s in present for v in s if 0 <= v < n_pts})
    if used:
        norms = np.sqrt((pts[used] ** 2).sum(axis=1))
        if norms.max() > complex.radius:
            out.append(Violation("radius", f"point norm {norms.max():.17g} exceeds R={complex.radius:.17g}"))

    if geometry and complex.dim == 2 and not any(v.severity == "error" for v in out):
        out.extend(_planar_intersections(pts, present))
    return out


def _orient(a, b, c) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def _exact_integer_coords(pts: np.ndarray, indices) -> dict[int, tuple[int, int]]:
    """Scale the given points by one power of two so every coordinate is an integer.

    Floats are dyadic rationals, so this is exact and lets the planar
    predicates run on Python integers.
    """
    ratios = {v: tuple(float(x).as_integer_ratio() for x in pts[v, :2]) for v in indices}
    scale = max((d for r in ratios.values() for _, d in r), default=1)
    return {v: tuple(n * (scale // d) for n, d in r) for v, r in ratios.items()}


def _on_segment(p, a, b) -> bool:
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
        and _orient(a, b, p) == 0
    )


def _segments_meet(a, b, c, d) -> bool:
    """Closed segments ab and cd share at least one point."""
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        _on_segment(c, a, b) or _on_segment(d, a, b) or _on_segment(a, c, d) or _on_segment(b, c, d)
    )


def _point_in(p, simplex_pts) -> bool:
    """Closed containment of p in a vertex, segment or triangle."""
    if len(simplex_pts) == 1:
        return p == simplex_pts[0]
    if len(simplex_pts) == 2:
        return _on_segment(p, *simplex_pts)
    a, b, c = simplex_pts
    o = (_orient(a, b, p), _orient(b, c, p), _orient(c, a, p))
    return not (min(o) < 0 < max(o))


def _improper(s: Simplex, t: Simplex, q) -> bool:
    """Whether s and t meet anywhere outside their common face.

    In the plane this happens iff a vertex of one, not shared, lies in the
    other, or an edge of one meets a vertex-disjoint edge of the other.
    """
    shared = set(s) & set(t)
    ps = [q[v] for v in s]
    pt = [q[v] for v in t]
    for v in s:
        if v not in shared and _point_in(q[v], pt):
            return True
    for v in t:
        if v not in shared and _point_in(q[v], ps):
            return True
    for e in combinations(s, 2):
        for f in combinations(t, 2):
            if set(e) & set(f):
                continue
            if _segments_meet(q[e[0]], q[e[1]], q[f[0]], q[f[1]]):
                return True
    return False


def _planar_intersections(pts: np.ndarray, present: set[Simplex]) -> list[Violation]:
    out = []
    covered = {f for s in present if len(s) > 1 for f in combinations(s, len(s) - 1)}
    maximal = sorted(present - covered, key=lambda t: (len(t), t))
    q = _exact_integer_coords(pts, {v for s in maximal for v in s})

    for s in maximal:
        if len(s) == 3 and _orient(q[s[0]], q[s[1]], q[s[2]]) == 0:
            out.append(Violation("degenerate", f"triangle {s} has zero area", "warning"))
        if len(s) == 2 and q[s[0]] == q[s[1]]:
            out.append(Violation("degenerate", f"edge {s} has zero length", "warning"))
    if len(maximal) < 2:
        return out

    # bucket bounding boxes on a uniform grid; only pairs sharing a cell are tested
    boxes = np.array([[min(q[v][0] for v in s), min(q[v][1] for v in s),
                       max(q[v][0] for v in s), max(q[v][1] for v in s)] for s in maximal])
    extent = np.maximum(boxes[:, 2] - boxes[:, 0], boxes[:, 3] - boxes[:, 1])
    cell = float(np.median(extent)) or float(extent.max()) or 1.0
    origin = boxes[:, :2].min(axis=0)
    lo = np.floor((boxes[:, :2] - origin) / cell).astype(np.int64)
    hi = np.floor((boxes[:, 2:] - origin) / cell).astype(np.int64)
    grid: dict[tuple[int, int], list[int]] = {}
    for i in range(len(maximal)):
        for cx in range(lo[i, 0], hi[i, 0] + 1):
            for cy in range(lo[i, 1], hi[i, 1] + 1):
                grid.setdefault((cx, cy), []).append(i)

    seen: set[tuple[int, int]] = set()
    for members in grid.values():
        for a in range(len(members)):
            i = members[a]
            for j in members[a + 1:]:
                if (i, j) in seen:
                    continue
                seen.add((i, j))
                bi, bj = boxes[i], boxes[j]
                if bj[0] > bi[2] or bi[0] > bj[2] or bj[1] > bi[3] or bi[1] > bj[3]:
                    continue
                if _improper(maximal[i], maximal[j], q):
                    out.append(Violation(
                        "intersection",
                        f"simplices {maximal[i]} and {maximal[j]} intersect improperly",
                        "warning",
                    ))
    return out
