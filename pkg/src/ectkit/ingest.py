"""Readers and writers for meshes, simplex lists and PGM images.

Raster images become complexes by splitting every selected pixel into two
triangles along its lower-left to upper-right diagonal. Pixel (column i,
row j) of an image with H rows covers [i, i+1] x [H-1-j, H-j], so row 0 is
at the top and y grows upward. Results are translated so the vertex
centroid sits at the origin.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .align import center
from .complex import ComplexError, EmbeddedComplex, build_complex, empty_complex


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, eq=False)
class RasterImage:
    """Greyscale raster; ``values`` is (height, width), row 0 at the top."""

    width: int
    height: int
    values: np.ndarray
    maxval: int = 255

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64)
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image must be nonempty, got {self.width}x{self.height}")
        if self.maxval < 1:
            raise ValueError(f"maxval must be positive, got {self.maxval}")
        if vals.size != self.width * self.height:
            raise ValueError(f"expected {self.width * self.height} values, got {vals.size}")
        vals = vals.reshape(self.height, self.width)
        if vals.min() < 0 or vals.max() > self.maxval:
            raise ValueError(f"pixel values must lie in [0, {self.maxval}]")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_array(cls, arr, maxval: int | None = None) -> "RasterImage":
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("image array must be two-dimensional")
        if maxval is None:
            maxval = max(1, int(arr.max()) if arr.size else 1)
        return cls(arr.shape[1], arr.shape[0], arr, maxval)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One real value per point of a complex."""

    complex: EmbeddedComplex
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.complex.points.shape[0],):
            raise ValueError(f"need {self.complex.points.shape[0]} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", vals)


# --------------------------------------------------------------------------
# raster triangulation


def _triangulate_mask(mask: np.ndarray):
    """Lattice points and triangles covering the True pixels.

    Returns ``(points, triangles, rows, cols)`` where ``rows``/``cols`` give
    each point's lattice position with row 0 at the top edge of the image.
    """
    H, W = mask.shape
    j, i = np.nonzero(mask)
    # lattice node (r, c) with r counted from the top; y = H - r
    ll = (j + 1) * (W + 1) + i
    lr = (j + 1) * (W + 1) + i + 1
    ur = j * (W + 1) + i + 1
    ul = j * (W + 1) + i
    tris = np.concatenate([np.stack([ll, lr, ur], axis=1), np.stack([ll, ur, ul], axis=1)])
    ids, inverse = np.unique(tris, return_inverse=True)
    rows, cols = ids // (W + 1), ids % (W + 1)
    points = np.stack([cols, H - rows], axis=1).astype(float)
    return points, inverse.reshape(tris.shape), rows, cols


def complex_from_binary_image(image: RasterImage, threshold: int = 1) -> EmbeddedComplex:
    """Triangulated, centred complex of pixels with value >= ``threshold``."""
    mask = image.values >= threshold
    if not mask.any():
        return empty_complex(2)
    points, tris, _, _ = _triangulate_mask(mask)
    return center(build_complex(points, tris))[0]


def field_from_grayscale_image(image: RasterImage) -> ScalarField:
    """Triangulate every pixel; each vertex gets the mean of its incident pixels."""
    H, W = image.height, image.width
    v = image.values.astype(float)
    total = np.zeros((H + 1, W + 1))
    count = np.zeros((H + 1, W + 1))
    for dr in (0, 1):
        for dc in (0, 1):
            total[dr:dr + H, dc:dc + W] += v
            count[dr:dr + H, dc:dc + W] += 1
    points, tris, rows, cols = _triangulate_mask(np.ones((H, W), dtype=bool))
    K = center(build_complex(points, tris))[0]
    return ScalarField(K, total[rows, cols] / count[rows, cols])


# --------------------------------------------------------------------------
# text formats


def _content_lines(text: str):
    """(line number, tokens) for non-blank lines, with '#' comments removed."""
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield n, body


def _number(tok: str, n: int, kind=float):
    try:
        x = kind(tok)
    except ValueError:
        raise ParseError(f"expected a number, got {tok!r}", n) from None
    if kind is float and not np.isfinite(x):
        raise ParseError(f"non-finite coordinate {tok!r}", n)
    return x


def _build(points, simplices, dim) -> EmbeddedComplex:
    pts = np.asarray(points, dtype=float).reshape(-1, dim)
    try:
        return build_complex(pts, simplices)
    except ComplexError as exc:
        raise ParseError(str(exc)) from None


def read_off(text: str) -> EmbeddedComplex:
    """Parse an ASCII OFF mesh.

    Faces with more than three vertices are fan-triangulated from their
    first vertex. Every listed vertex is a 0-simplex. If all z coordinates
    are zero the complex is planar.
    """
    lines = _content_lines(text)
    try:
        n, toks = next(lines)
    except StopIteration:
        raise ParseError("empty OFF input", 1) from None
    if toks[0] != "OFF":
        raise ParseError(f"expected 'OFF' header, got {toks[0]!r}", n)
    counts = toks[1:]
    if not counts:
        try:
            n, counts = next(lines)
        except StopIteration:
            raise ParseError("missing vertex/face counts", n + 1) from None
    if len(counts) < 2:
        raise ParseError("counts line needs at least 'nv nf'", n)
    nv, nf = (_number(t, n, int) for t in counts[:2])
    if nv < 0 or nf < 0:
        raise ParseError("negative vertex or face count", n)

    coords = []
    for _ in range(nv):
        try:
            n, toks = next(lines)
        except StopIteration:
            raise ParseError(f"expected {nv} vertices, found {len(coords)}", n + 1) from None
        if len(toks) < 3:
            raise ParseError("vertex line needs 3 coordinates", n)
        coords.append([_number(t, n) for t in toks[:3]])

    simplices: list[tuple[int, ...]] = [(i,) for i in range(nv)]
    for _ in range(nf):
        try:
            n, toks = next(lines)
        except StopIteration:
            raise ParseError(f"expected {nf} faces", n + 1) from None
        k = _number(toks[0], n, int)
        if k < 1 or len(toks) < k + 1:
            raise ParseError(f"face declares {k} vertices but lists {len(toks) - 1}", n)
        idx = [_number(t, n, int) for t in toks[1:k + 1]]
        for v in idx:
            if not 0 <= v < nv:
                raise ParseError(f"vertex index {v} out of range [0, {nv})", n)
        if k <= 3:
            if k > 1:
                simplices.append(tuple(idx))
        else:
            simplices.extend((idx[0], idx[m], idx[m + 1]) for m in range(1, k - 1))

    pts = np.asarray(coords, dtype=float).reshape(-1, 3)
    if pts.size and np.all(pts[:, 2] == 0.0):
        pts = pts[:, :2]
    return _build(pts, simplices, pts.shape[1] if pts.size else 2)


def read_simplex_list(text: str, close: bool = True) -> EmbeddedComplex:
    """Parse ``v x y [z]`` / ``s i j [k [l]]`` records.

    Every vertex line is a 0-simplex. With ``close=False`` the simplices are
    kept exactly as listed (for validating hand-written files).
    """
    coords: list[list[float]] = []
    listed: dict[tuple[int, ...], int] = {}
    raw: list[list[int]] = []
    dim = None
    for n, toks in _content_lines(text):
        tag, args = toks[0], toks[1:]
        if tag == "v":
            if len(args) not in (2, 3):
                raise ParseError("vertex record needs 2 or 3 coordinates", n)
            if dim is None:
                dim = len(args)
            elif len(args) != dim:
                raise ParseError(f"vertex has {len(args)} coordinates, earlier ones had {dim}", n)
            coords.append([_number(t, n) for t in args])
        elif tag == "s":
            if not 1 <= len(args) <= 4:
                raise ParseError("simplex record needs 1 to 4 vertex indices", n)
            idx = [_number(t, n, int) for t in args]
            raw.append(idx)
            key = tuple(sorted(idx))
            if len(set(key)) != len(key):
                raise ParseError(f"simplex {tuple(idx)} repeats a vertex", n)
            if key in listed:
                raise ParseError(f"duplicate simplex {key} (first on line {listed[key]})", n)
            listed[key] = n
        else:
            raise ParseError(f"unknown record type {tag!r}", n)

    n_pts = len(coords)
    for idx, line in zip(raw, listed.values()):
        for v in idx:
            if not 0 <= v < n_pts:
                raise ParseError(f"vertex index {v} out of range [0, {n_pts})", line)
    dim = dim or 2
    vertices = [(i,) for i in range(n_pts) if (i,) not in listed]
    if not close:
        from .complex import raw_complex

        return raw_complex(np.asarray(coords, dtype=float).reshape(-1, dim), vertices + raw)
    return _build(coords, vertices + [tuple(r) for r in raw], dim)


def write_simplex_list(complex: EmbeddedComplex) -> str:
    """Serialize used vertices and all simplices of dimension >= 1."""
    used = complex.vertex_indices()
    remap = np.full(complex.points.shape[0], -1, dtype=np.int64)
    remap[used] = np.arange(used.size)
    out = [f"# {complex.dim}d complex: counts {' '.join(map(str, complex.counts))}"]
    for p in complex.points[used]:
        out.append("v " + " ".join(repr(float(x)) for x in p))
    for block in complex.simplices[1:]:
        for row in remap[block]:
            out.append("s " + " ".join(str(int(x)) for x in row))
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# PGM


_TOKEN = re.compile(rb"[^\s#]+")


def _pgm_header(data: bytes, count: int):
    """Read ``count`` whitespace-separated header tokens after the magic.

    Returns tokens with their line numbers, the offset just past the single
    whitespace byte ending the last token, and the line number there.
    """
    pos, line = 2, 1
    toks = []
    while len(toks) < count:
        if pos >= len(data):
            raise ParseError("truncated PGM header", line)
        c = data[pos:pos + 1]
        if c == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end
        elif c.isspace():
            line += c == b"\n"
            pos += 1
        else:
            m = _TOKEN.match(data, pos)
            toks.append((m.group().decode("ascii", "replace"), line))
            pos = m.end()
    if pos < len(data) and data[pos:pos + 1].isspace():
        line += data[pos:pos + 1] == b"\n"
        pos += 1
    return toks, pos, line


def read_pgm(data: bytes) -> RasterImage:
    """Decode a P2 (ASCII) or P5 (binary, maxval <= 255) greymap."""
    if isinstance(data, str):
        data = data.encode("ascii")
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"unsupported PGM magic {magic!r}; expected P2 or P5", 1)
    toks, pos, line = _pgm_header(data, 3)
    w, h, maxval = (_number(t, n, int) for t, n in toks)
    if w < 1 or h < 1:
        raise ParseError(f"image size must be positive, got {w}x{h}", toks[1][1])
    if not 1 <= maxval <= 65535:
        raise ParseError(f"maxval {maxval} out of range", toks[2][1])

    if magic == b"P5":
        if maxval > 255:
            raise ParseError("binary PGM with maxval > 255 is not supported", toks[2][1])
        raster = data[pos:pos + w * h]
        if len(raster) < w * h:
            raise ParseError(f"expected {w * h} pixel bytes, found {len(raster)}", line)
        vals = np.frombuffer(raster, dtype=np.uint8).astype(np.int64)
    else:
        vals = []
        text = data[pos:].decode("ascii", "replace")
        for n, body in _content_lines(text):
            for t in body:
                vals.append(_number(t, n + line - 1, int))
        if len(vals) != w * h:
            raise ParseError(f"expected {w * h} pixel values, found {len(vals)}", line)
        vals = np.asarray(vals, dtype=np.int64)
    if vals.size and (vals.min() < 0 or vals.max() > maxval):
        raise ParseError(f"pixel value outside [0, {maxval}]", line)
    return RasterImage(w, h, vals.reshape(h, w), maxval)


def write_pgm(image: RasterImage) -> bytes:
    """Encode as ASCII P2, one image row per line."""
    rows = [f"P2\n{image.width} {image.height}\n{image.maxval}"]
    rows.extend(" ".join(str(int(v)) for v in r) for r in image.values)
    return ("\n".join(rows) + "\n").encode("ascii")


def load_complex(path, threshold: int = 1) -> EmbeddedComplex:
    """Read a complex from an OFF, PGM or simplex-list file, by extension."""
    from pathlib import Path

    path = Path(path)
    suffix = path.suffix.lower()
    if suffix in (".pgm", ".pnm"):
        return complex_from_binary_image(read_pgm(path.read_bytes()), threshold)
    text = path.read_text()
    if suffix == ".off":
        return read_off(text)
    return read_simplex_list(text)
