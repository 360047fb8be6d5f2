import math

import numpy as np
import pytest

from ectkit.directions import (
    Direction,
    direction_budget,
    explicit,
    fibonacci_sphere,
    parse_angle,
    read_directions_csv,
    uniform_circle,
    write_directions_csv,
)


def test_uniform_circle_four():
    np.testing.assert_allclose(uniform_circle(4).as_array(), [(1, 0), (0, 1), (-1, 0), (0, -1)], atol=1e-15)


def test_uniform_circle_one():
    assert uniform_circle(1).samples[0].vector == (1.0, 0.0)


def test_uniform_circle_64_quarter():
    np.testing.assert_allclose(uniform_circle(64)[16].vector, (0, 1), atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 64, 100])
def test_uniform_circle_spacing(n):
    dirs = uniform_circle(n)
    angles = np.array([d.angle for d in dirs])
    assert len({d.vector for d in dirs}) == n
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))
    np.testing.assert_allclose(gaps, 2 * math.pi / n, atol=1e-12)
    assert np.all(np.abs(np.linalg.norm(dirs.as_array(), axis=1) - 1) <= 1e-9)


def test_bad_counts():
    with pytest.raises(ValueError):
        uniform_circle(0)
    with pytest.raises(ValueError):
        fibonacci_sphere(0)


def test_fibonacci_small():
    assert fibonacci_sphere(1)[0].vector[2] == 0.0
    z = sorted(d.vector[2] for d in fibonacci_sphere(2))
    assert z == pytest.approx([-0.5, 0.5], abs=1e-15)


@pytest.mark.parametrize("n", [100, 257, 1000])
def test_fibonacci_balance(n):
    arr = fibonacci_sphere(n).as_array()
    assert np.all(np.abs(np.linalg.norm(arr, axis=1) - 1) <= 1e-12)
    assert np.linalg.norm(arr.mean(axis=0)) <= 0.1


def test_fibonacci_azimuth():
    golden = (1 + math.sqrt(5)) / 2
    d = fibonacci_sphere(10)[3].vector
    assert math.isclose(math.atan2(d[1], d[0]) % (2 * math.pi), (2 * math.pi * 3 * (1 - 1 / golden)) % (2 * math.pi))


def test_directions_csv_round_trip():
    dirs = fibonacci_sphere(5)
    back = read_directions_csv(write_directions_csv(dirs))
    np.testing.assert_array_equal(back.as_array(), dirs.as_array())
    assert back.scheme == "explicit"


def test_explicit_normalizes():
    assert explicit([(3, 4)])[0].vector == (0.6, 0.8)


@pytest.mark.parametrize(
    "text,value",
    [("0.5", 0.5), ("pi", math.pi), ("3/4pi", 0.75 * math.pi), ("3/4 pi", 0.75 * math.pi),
     ("pi/2", math.pi / 2), ("-1/2pi", -math.pi / 2), ("2pi", 2 * math.pi), ("11/8*pi", 11 / 8 * math.pi)],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("text", ["", "abc", "3/0pi", "1/2pi/3", "inf"])
def test_parse_angle_errors(text):
    with pytest.raises(ValueError):
        parse_angle(text)


@pytest.mark.parametrize("delta,b,expected", [(3, 1, 12), (1, 1, 48), (0.5, 2, 245), (0.1, 1, 2883)])
def test_budget_values(delta, b, expected):
    budget = direction_budget(delta, b)
    assert budget.leading_term == expected
    assert budget.remainder_dropped


def test_budget_rejects_bad_input():
    for args in [(0, 1), (-1, 1), (1, 0), (1, 1.5)]:
        with pytest.raises(ValueError):
            direction_budget(*args)


def test_budget_monotone():
    deltas = [0.1, 0.25, 0.5, 0.75, 1, 1.5, 2, 3, 5, 10]
    bs = list(range(1, 11))
    grid = np.array([[direction_budget(d, b).leading_term for b in bs] for d in deltas])
    assert np.all(np.diff(grid, axis=0) <= 0)
    assert np.all(np.diff(grid, axis=1) >= 0)


def test_direction_from_angle():
    d = Direction.from_angle(math.pi / 2)
    assert d.angle == pytest.approx(math.pi / 2)
