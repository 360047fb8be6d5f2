from itertools import combinations

import numpy as np
import pytest

from conftest import CUBE_OFF, OCTA_OFF, TETRA_OFF, random_complex
from ectkit.complex import (
    ComplexError,
    build_complex,
    canonical_simplex,
    empty_complex,
    euler_characteristic,
    raw_complex,
    validate,
)
from ectkit.ingest import read_off


def brute_chi(simplices):
    """Recount by dimension straight from a list of simplex tuples."""
    counts = {}
    for s in simplices:
        counts[len(s) - 1] = counts.get(len(s) - 1, 0) + 1
    return sum((-1) ** k * c for k, c in counts.items())


def test_single_point():
    K = build_complex([(0, 0)], [[0]])
    assert K.counts == (1, 0, 0, 0)
    assert K.radius == 0.0


def test_triangle_closure():
    K = build_complex([(0, 0), (1, 0), (0, 1)], [[0, 1, 2]])
    assert K.counts[:3] == (3, 3, 1)
    assert K.simplex_set() == {(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)}


def test_tetrahedron_boundary_closure():
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    K = build_complex(pts, list(combinations(range(4), 3)))
    assert K.counts == (4, 6, 4, 0)
    assert euler_characteristic(K) == 2


def test_solid_tetrahedron():
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    K = build_complex(pts, [[0, 1, 2, 3]])
    assert K.counts == (4, 6, 4, 1)
    assert euler_characteristic(K) == 1


@pytest.mark.parametrize("text", [TETRA_OFF, CUBE_OFF, OCTA_OFF], ids=["tetra", "cube", "octa"])
def test_platonic_surfaces(text):
    assert euler_characteristic(read_off(text)) == 2


def test_cube_counts():
    assert read_off(CUBE_OFF).counts == (8, 18, 12, 0)


def test_empty():
    K = empty_complex()
    assert euler_characteristic(K) == 0
    assert K.radius == 0.0
    assert validate(K) == []


def test_duplicate_rejected():
    with pytest.raises(ComplexError, match="duplicate"):
        build_complex([(0, 0), (1, 0)], [[0, 1], [1, 0]])


def test_index_out_of_range():
    with pytest.raises(ComplexError, match="out of range"):
        build_complex([(0, 0), (1, 0)], [[0, 2]])


def test_repeated_vertex():
    with pytest.raises(ComplexError, match="repeats"):
        build_complex([(0, 0), (1, 0)], [[1, 1]])
    with pytest.raises(ComplexError):
        canonical_simplex([3, 3])


def test_nonfinite_points():
    with pytest.raises(ComplexError, match="NaN"):
        build_complex([(0, np.nan)], [[0]])


def test_radius_uses_referenced_points_only():
    K = build_complex([(0, 0), (1, 0), (100, 0)], [[0, 1]])
    assert K.radius == 1.0


def test_isolated_vertices_count():
    K = build_complex([(0, 0), (1, 0), (5, 5)], [[0, 1], [2]])
    assert euler_characteristic(K) == 2


def test_validate_builder_output(rng):
    for _ in range(20):
        assert [v for v in validate(random_complex(rng), geometry=False)] == []


def test_validate_missing_vertex():
    K = raw_complex([(0, 0), (1, 0)], [[0], [0, 1]])
    problems = validate(K)
    assert len(problems) == 1
    assert problems[0].kind == "closure" and "(1,)" in problems[0].message


def test_validate_ordering_and_index():
    K = raw_complex([(0, 0), (1, 0)], [[0], [1], [1, 0], [0, 5]])
    kinds = sorted(v.kind for v in validate(K))
    assert "ordering" in kinds and "index" in kinds


def test_validate_overlapping_triangles():
    # second triangle sits on part of the first one's bottom edge
    pts = [(0, 0), (2, 0), (0, 2), (1, 0), (3, 0), (1, 1)]
    K = build_complex(pts, [[0, 1, 2], [3, 4, 5]])
    problems = validate(K)
    assert [(p.kind, p.severity) for p in problems] == [("intersection", "warning")]


def test_validate_proper_shared_edge():
    K = build_complex([(0, 0), (1, 0), (0, 1), (1, 1)], [[0, 1, 2], [1, 2, 3]])
    assert validate(K) == []


def test_validate_crossing_edges():
    K = build_complex([(0, 0), (1, 1), (0, 1), (1, 0)], [[0, 1], [2, 3]])
    assert [p.kind for p in validate(K)] == ["intersection"]


def test_validate_vertex_on_edge():
    K = build_complex([(0, 0), (2, 0), (1, 0)], [[0, 1], [2]])
    assert [p.kind for p in validate(K)] == ["intersection"]


def test_validate_3d_skips_geometry():
    # two crossing edges in the z=0 plane, embedded in R^3
    K = build_complex([(0, 0, 0), (1, 1, 0), (0, 1, 0), (1, 0, 0)], [[0, 1], [2, 3]])
    assert validate(K) == []


def test_chi_matches_brute_force(rng):
    for dim in (2, 3):
        for _ in range(50):
            K = random_complex(rng, dim)
            assert euler_characteristic(K) == brute_chi(list(K))


def test_face_closure_property(rng):
    for _ in range(30):
        K = random_complex(rng, 3)
        present = K.simplex_set()
        for s in present:
            for r in range(1, len(s)):
                assert set(combinations(s, r)) <= present


def test_radius_bounds_points(rng):
    for _ in range(30):
        K = random_complex(rng, 2)
        norms = np.sqrt((K.used_points() ** 2).sum(axis=1))
        assert norms.max() <= K.radius


def test_adding_simplex_changes_chi_by_new_faces(rng):
    for _ in range(30):
        K = random_complex(rng, 3, max_points=8)
        n = K.points.shape[0]
        k = int(rng.integers(1, min(n, 4) + 1))
        new = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
        before = K.simplex_set()
        if new in before:
            continue
        K2 = build_complex(K.points, sorted(before | {new}, key=lambda s: (len(s), s)))
        added = K2.simplex_set() - before
        assert euler_characteristic(K2) - euler_characteristic(K) == sum((-1) ** (len(s) - 1) for s in added)
        assert euler_characteristic(K2) == brute_chi(list(K2))
