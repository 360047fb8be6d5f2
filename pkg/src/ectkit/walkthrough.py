"""End-to-end run on the bundled leaflet raster.

Triangulates and centres the image, takes the Euler curve in 64 evenly
spaced directions, assembles the global-threshold ECT and the SECT, and
checks along the way that each curve starts at 0 and ends at chi(K).

    python -m ectkit.walkthrough [OUT_DIR]
"""
from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np

from .complex import euler_characteristic, validate
from .directions import Direction, uniform_circle
from .export import atomic_write, heatmap_pgm, matrix_csv, sidecar
from .filtration import ecc
from .ingest import complex_from_binary_image
from .synthetic import bundled_leaflet
from .transforms import ect, sect


class InvariantError(RuntimeError):
    """A computed result broke a property that must always hold."""


def _check(cond: bool, message: str) -> None:
    if not cond:
        raise InvariantError(message)


def run(out_dir=None, num_directions: int = 64, num_thresholds: int = 101) -> dict:
    image = bundled_leaflet()
    K = complex_from_binary_image(image)
    _check(not [v for v in validate(K, geometry=False) if v.severity == "error"], "leaflet complex is malformed")
    chi = euler_characteristic(K)
    R = K.radius
    dirs = uniform_circle(num_directions)

    curves = [ecc(K, w) for w in dirs]
    for k, c in enumerate(curves):
        below = c.breakpoints[0] - max(1.0, R)
        _check(c(below) == 0, f"direction {k}: curve is nonzero below the shape")
        _check(c(R) == chi and c.final_chi == chi, f"direction {k}: curve does not end at chi(K)={chi}")

    M = ect(K, dirs, num_thresholds)
    _check(np.all(M.entries[-1] == chi), "top ECT row differs from chi(K)")
    _check(np.all(M.entries[0] == 0), "bottom ECT row is nonzero")

    S = sect(K, dirs)
    ends = np.array([[c(-S.radius), c(S.radius)] for c in S.curves])
    _check(np.abs(ends).max() <= 1e-9, "SECC does not vanish at +-R")

    fern_angle = Direction.from_angle(3 * math.pi / 4)
    summary = {
        "pixels": int(image.values.sum()),
        "counts": K.counts,
        "chi": chi,
        "radius": R,
        "breakpoints_3pi_4": len(ecc(K, fern_angle)),
        "ect_shape": M.shape,
    }
    if out_dir is not None:
        out = Path(out_dir)
        atomic_write(out / "ecc_3pi_4.csv", ecc(K, fern_angle).to_csv())
        labels = dirs.labels()
        atomic_write(out / "ect.csv", matrix_csv(M.thresholds, labels, M.entries, "threshold"))
        pgm, lo, hi = heatmap_pgm(M.entries)
        atomic_write(out / "ect.pgm", pgm)
        ts, vals = S.matrix(num_thresholds)
        atomic_write(out / "sect.csv", matrix_csv(ts, labels, vals, "t"))
        atomic_write(
            out / "walkthrough.meta",
            sidecar({**{k: v for k, v in summary.items() if k != "counts"}, "ect_min": lo, "ect_max": hi}),
        )
    return summary


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        summary = run(argv[0] if argv else None)
    except InvariantError as exc:
        print(f"walkthrough failed: {exc}", file=sys.stderr)
        return 4
    for k, v in summary.items():
        print(f"{k}={v}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
