import math

import numpy as np
import pytest

from ectkit.complex import build_complex


def random_complex(rng, dim=2, max_simplices=200, max_points=25):
    """Random face-closed complex with at most ``max_simplices`` simplices.

    Geometry is arbitrary (simplices may cross); only combinatorics and
    coordinates matter for Euler curves.
    """
    while True:
        n = int(rng.integers(1, max_points + 1))
        pts = rng.uniform(-1, 1, size=(n, dim))
        top = min(n, dim + 1, 4)
        m = int(rng.integers(1, 3 * n + 2))
        simplices = set()
        for _ in range(m):
            k = int(rng.integers(1, top + 1))
            simplices.add(tuple(sorted(rng.choice(n, size=k, replace=False).tolist())))
        K = build_complex(pts, sorted(simplices))
        if K.num_simplices <= max_simplices:
            return K


def random_direction(rng, dim=2):
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def naive_heights(K, omega):
    """Pure-Python f_omega for every simplex, as a dict."""
    w = [float(x) for x in omega]
    out = {}
    for s in K:
        hs = []
        for v in s:
            p = [float(x) for x in K.points[v]]
            h = p[0] * w[0]
            for j in range(1, len(w)):
                h = h + p[j] * w[j]
            hs.append(h)
        out[s] = max(hs)
    return out


def naive_chi_below(heights, a):
    """chi of {sigma : f(sigma) <= a} by direct recount."""
    return sum((-1) ** (len(s) - 1) for s, h in heights.items() if h <= a)


def rotation2(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def random_rotation3(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def hollow_triangle():
    return build_complex([(0, 0), (1, 0), (0.5, 1)], [[0, 1], [1, 2], [0, 2]])


@pytest.fixture
def unit_edge():
    return build_complex([(-1, 0), (1, 0)], [[0, 1]])


TETRA_OFF = """OFF
4 4 0
0 0 0
1 0 0
0 1 0
0 0 1
3 0 1 2
3 0 1 3
3 0 2 3
3 1 2 3
"""

CUBE_OFF = """OFF
8 6 0
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
4 0 3 2 1
4 4 5 6 7
4 0 1 5 4
4 1 2 6 5
4 2 3 7 6
4 3 0 4 7
"""

OCTA_OFF = """OFF
6 8 0
1 0 0
-1 0 0
0 1 0
0 -1 0
0 0 1
0 0 -1
3 0 2 4
3 2 1 4
3 1 3 4
3 3 0 4
3 2 0 5
3 1 2 5
3 3 1 5
3 0 3 5
"""
