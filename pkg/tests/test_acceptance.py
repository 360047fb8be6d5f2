"""Acceptance checks, one test per criterion.

Each test records a ``ACCEPTANCE <n> PASS|FAIL <name>: <detail>`` line;
the lines are printed in the terminal summary (and live with ``-s``).
"""
import contextlib
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, CUBE_OFF, OCTA_OFF, TETRA_OFF, naive_chi_below, naive_heights, random_complex, random_direction, rotation2
from ectkit.complex import build_complex, empty_complex, euler_characteristic
from ectkit.directions import direction_budget, uniform_circle
from ectkit.filtration import ecc
from ectkit.ingest import RasterImage, ScalarField, complex_from_binary_image, read_off
from ectkit.synthetic import bundled_leaflet
from ectkit.transforms import detect, ect, lect, sect, sect_curve, select
from ectkit.align import sect_distance
from ectkit import walkthrough

pytestmark = pytest.mark.acceptance


class Check:
    def __init__(self):
        self.ok = True
        self.notes = []

    def require(self, cond, note):
        if not cond:
            self.ok = False
            self.notes.append(note)


@contextlib.contextmanager
def criterion(number, name):
    chk = Check()
    start = time.perf_counter()
    try:
        yield chk
    except Exception as exc:
        chk.ok = False
        chk.notes.append(f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - start
    status = "PASS" if chk.ok else "FAIL"
    detail = "; ".join(chk.notes[:3]) or "ok"
    line = f"ACCEPTANCE {number} {status} {name}: {detail} ({elapsed:.2f}s)"
    ACCEPTANCE_LINES.append(line)
    print("\n" + line)
    assert chk.ok, detail


def leaflet():
    return complex_from_binary_image(bundled_leaflet())


def test_1_platonic_chi():
    with criterion(1, "platonic chi") as chk:
        start = time.perf_counter()
        values = {name: euler_characteristic(read_off(text)) for name, text in
                  [("tetrahedron", TETRA_OFF), ("cube", CUBE_OFF), ("octahedron", OCTA_OFF)]}
        elapsed = time.perf_counter() - start
        for name, chi in values.items():
            chk.require(chi == 2, f"{name} gives {chi}")
        chk.require(elapsed < 1.0, f"took {elapsed:.2f}s")


def oracle_cases():
    rng = np.random.default_rng(2)
    for dim in (2, 3):
        for _ in range(250):
            K = random_complex(rng, dim, max_simplices=200)
            yield K, [random_direction(rng, dim) for _ in range(8)]


def test_2_ecc_oracle_equivalence():
    with criterion(2, "ecc oracle equivalence") as chk:
        start = time.perf_counter()
        n = 0
        for K, dirs in oracle_cases():
            n += 1
            for w in dirs:
                curve = ecc(K, w)
                hs = naive_heights(K, w)
                for a, chi in curve:
                    chk.require(chi == naive_chi_below(hs, a), f"mismatch at a={a!r}")
        elapsed = time.perf_counter() - start
        chk.require(n == 500, f"{n} complexes")
        chk.require(elapsed < 60, f"took {elapsed:.1f}s")


def test_3_ecc_boundary_behaviour():
    with criterion(3, "ecc boundary behaviour") as chk:
        for K, dirs in oracle_cases():
            chi = euler_characteristic(K)
            for w in dirs:
                curve = ecc(K, w)
                first = curve.breakpoints[0]
                chk.require(curve(np.nextafter(first, -np.inf)) == 0, "nonzero below first breakpoint")
                chk.require(curve(K.radius) == chi, f"curve(R)={curve(K.radius)} != chi={chi}")


def test_4_rotation_shift():
    with criterion(4, "rotation shift") as chk:
        start = time.perf_counter()
        K = leaflet()
        rotated = K.with_points(K.points @ rotation2(2 * math.pi / 64).T)
        R = max(K.radius, rotated.radius)
        dirs = uniform_circle(64)
        M = ect(K, dirs, 256, radius=R).entries
        M2 = ect(rotated, dirs, 256, radius=R).entries
        elapsed = time.perf_counter() - start
        bad = int(np.count_nonzero(M2 != np.roll(M, 1, axis=1)))
        chk.require(bad == 0, f"{bad} entries differ")
        chk.require(elapsed < 10, f"took {elapsed:.1f}s")


def test_5_secc_endpoints():
    with criterion(5, "secc endpoints") as chk:
        rng = np.random.default_rng(5)
        worst = 0.0
        for i in range(100):
            dim = 2 + i % 2
            K = random_complex(rng, dim)
            S = sect(K, [random_direction(rng, dim) for _ in range(16)])
            for c in S.curves:
                worst = max(worst, abs(c(-S.radius)), abs(c(S.radius)))
        chk.require(worst <= 1e-9, f"max |SECC(+-R)| = {worst!r}")


def test_6_sect_exactness():
    with criterion(6, "sect exactness") as chk:
        E = build_complex([(0, 0), (1, 0)], [[0, 1]])
        s = sect_curve(ecc(E, (1.0, 0.0)), 1.0)
        for t, want in [(-1.0, 0.0), (0.0, -0.5), (1.0, 0.0), (-0.5, -0.25), (0.5, -0.25)]:
            chk.require(abs(s(t) - want) <= 1e-9, f"SECC({t}) = {s(t)!r}")
        d = sect_distance(sect(E, [(1.0, 0.0)], radius=1.0), sect(empty_complex(), [(1.0, 0.0)], radius=1.0))
        chk.require(abs(d - math.sqrt(1 / 6)) <= 1e-9, f"distance {d!r}")


def test_7_detect_orientation_invariance():
    with criterion(7, "detect orientation invariance") as chk:
        K = leaflet()
        rotated = K.with_points(K.points @ rotation2(2 * math.pi / 64).T)
        R = max(K.radius, rotated.radius)
        xs = np.linspace(-R, R, 101)
        a = detect([K], uniform_circle(64), xs, radius=R).values
        b = detect([rotated], uniform_circle(64), xs, radius=R).values
        worst = float(np.max(np.abs(a - b)))
        chk.require(worst <= 1e-9, f"max change {worst!r}")


def test_8_lect_select_identities():
    with criterion(8, "lect/select identities") as chk:
        rng = np.random.default_rng(8)
        for _ in range(50):
            K = random_complex(rng)
            n = K.points.shape[0]
            c = float(rng.integers(-3, 4))
            f = ScalarField(K, np.full(n, c))
            w = random_direction(rng)
            curve = ecc(K, w)
            for h in list(np.linspace(-1.5, 1.5, 7)) + list(curve.breakpoints):
                full = lect(f, w, h, c)
                chk.require(full == curve(h), "lect(c) differs from the ecc")
                chk.require(lect(f, w, h, c + 0.5) == 0, "lect(t != c) nonzero")
                for t in (c - 2, c - 1e-3, c):
                    chk.require(select(f, w, h, t) == full, "select(t <= c) differs from lect(c)")
            g = ScalarField(K, rng.normal(size=n))
            chk.require(select(g, w, K.radius, g.values[K.vertex_indices()].min()) == euler_characteristic(K),
                        "select at the minimum value is not chi(K)")


def test_9_direction_budget():
    with criterion(9, "direction budget") as chk:
        chk.require(direction_budget(3, 1).leading_term == 12, "delta=3")
        chk.require(direction_budget(1, 1).leading_term == 48, "delta=1")
        deltas = [0.1, 0.2, 0.25, 0.5, 0.75, 1, 1.5, 2, 3, 5]
        grid = np.array([[direction_budget(d, b).leading_term for b in range(1, 11)] for d in deltas])
        chk.require(np.all(np.diff(grid, axis=0) <= 0), "not nonincreasing in delta")
        chk.require(np.all(np.diff(grid, axis=1) >= 0), "not nondecreasing in b_delta")


def big_complex():
    # 130x130 filled raster: 17161 V + 50960 E + 33800 T
    K = complex_from_binary_image(RasterImage.from_array(np.ones((130, 130), dtype=np.int64), maxval=1))
    assert K.num_simplices >= 100_000
    return K


def test_10_performance_and_determinism():
    with criterion(10, "performance and determinism") as chk:
        K = big_complex()
        dirs = uniform_circle(64)
        start = time.perf_counter()
        base = ect(K, dirs, 256).entries
        elapsed = time.perf_counter() - start
        chk.require(elapsed <= 5.0, f"ECT took {elapsed:.2f}s")
        if chk.ok:
            chk.notes.append(f"{K.num_simplices} simplices in {elapsed:.2f}s")
        for workers in range(1, 9):
            same = np.array_equal(ect(K, dirs, 256, workers=workers).entries, base)
            chk.require(same, f"workers={workers} differs")


def test_11_walkthrough(tmp_path):
    with criterion(11, "leaflet walkthrough") as chk:
        summary = walkthrough.run(tmp_path)
        chk.require(summary["chi"] == -9, f"chi {summary['chi']}")
        for name in ("ecc_3pi_4.csv", "ect.csv", "ect.pgm", "sect.csv", "walkthrough.meta"):
            chk.require((tmp_path / name).exists(), f"{name} missing")
