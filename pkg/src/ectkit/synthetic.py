"""Procedurally generated test shapes."""
from __future__ import annotations

from importlib import resources

import numpy as np

from .ingest import RasterImage, read_pgm

LEAFLET_FILE = "leaflet.pgm"


def leaflet_mask(size: int = 96, pairs: int = 5) -> np.ndarray:
    """Binary compound leaf: a stem carrying ``pairs`` of tilted leaflets.

    Each leaflet is pierced by a small hole, so the shape is connected with
    ``2 * pairs`` holes and Euler characteristic ``1 - 2 * pairs``. Row 0 is
    the top of the image.
    """
    rows, cols = np.mgrid[0:size, 0:size]
    x = cols + 0.5 - size / 2
    y = size - (rows + 0.5)
    s = size / 96

    mask = (np.abs(x) <= 1.6 * s) & (y >= 6 * s) & (y <= 90 * s)
    holes = np.zeros_like(mask)
    for k in range(pairs):
        base = (12 + k * 72 / max(pairs, 1)) * s
        length = (15 - 1.5 * k) * s
        width = (4.5 - 0.3 * k) * s
        for side in (-1, 1):
            tilt = np.deg2rad(25) * side
            cx = side * (length * np.cos(tilt) + 1.0 * s)
            cy = base + length * abs(np.sin(tilt))
            dx, dy = x - cx, y - cy
            u = dx * np.cos(tilt) + dy * np.sin(tilt)
            v = -dx * np.sin(tilt) + dy * np.cos(tilt)
            mask |= (u / (length + 1.5 * s)) ** 2 + (v / width) ** 2 <= 1
            holes |= dx ** 2 + dy ** 2 <= (1.8 * s) ** 2
    return mask & ~holes


def leaflet_image(size: int = 96, pairs: int = 5) -> RasterImage:
    return RasterImage.from_array(leaflet_mask(size, pairs).astype(np.int64), maxval=1)


def bundled_leaflet() -> RasterImage:
    """The leaflet raster shipped with the package."""
    data = resources.files("ectkit.data").joinpath(LEAFLET_FILE).read_bytes()
    return read_pgm(data)
