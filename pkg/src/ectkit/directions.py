"""Direction samples on S^1 and S^2, and the direction-count estimate."""
from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Direction:
    """A unit vector in R^2 or R^3."""

    vector: tuple[float, ...]

    def __post_init__(self):
        v = tuple(float(x) for x in self.vector)
        if len(v) not in (2, 3):
            raise ValueError(f"direction must have 2 or 3 components, got {len(v)}")
        n = math.sqrt(sum(x * x for x in v))
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("direction vector must be nonzero and finite")
        if abs(n - 1.0) > UNIT_TOL:
            raise ValueError(f"direction {v} is not unit length (norm {n!r})")
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> "Direction":
        v = [float(x) for x in v]
        n = math.sqrt(sum(x * x for x in v))
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("direction vector must be nonzero and finite")
        return cls(tuple(x / n for x in v))

    @classmethod
    def from_angle(cls, theta: float) -> "Direction":
        return cls(_unit_circle_point(theta))

    @property
    def dim(self) -> int:
        return len(self.vector)

    @property
    def angle(self) -> float:
        """Polar angle in [0, 2pi) for planar directions."""
        if self.dim != 2:
            raise ValueError("angle is defined only for planar directions")
        a = math.atan2(self.vector[1], self.vector[0])
        return a + 2 * math.pi if a < 0 else a

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.vector, dtype=dtype)


@dataclass(frozen=True)
class DirectionSet:
    dim: int
    samples: tuple[Direction, ...]
    scheme: str  # "uniform_circle" | "fibonacci_sphere" | "explicit"

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    def as_array(self) -> np.ndarray:
        return np.array([d.vector for d in self.samples], dtype=float).reshape(-1, self.dim)

    def labels(self) -> list[str]:
        """Angles (radians) on the circle, otherwise sample indices."""
        if self.dim == 2:
            return [repr(d.angle) for d in self.samples]
        return [str(i) for i in range(len(self))]


def _unit_circle_point(theta: float) -> tuple[float, float]:
    # cos(pi/2) is 6e-17 in floating point; snap such residues so quarter
    # turns give exact axis directions and vertices tie as they should
    c, s = math.cos(theta), math.sin(theta)
    return (0.0 if abs(c) < 1e-15 else c, 0.0 if abs(s) < 1e-15 else s)


def uniform_circle(n: int) -> DirectionSet:
    """``n`` directions at angles 2*pi*k/n, counterclockwise from (1, 0)."""
    if n < 1:
        raise ValueError(f"need at least one direction, got {n}")
    samples = tuple(Direction(_unit_circle_point(2 * math.pi * k / n)) for k in range(n))
    return DirectionSet(2, samples, "uniform_circle")


GOLDEN_RATIO = (1 + math.sqrt(5)) / 2


def fibonacci_sphere(n: int) -> DirectionSet:
    """Golden-angle spiral lattice on S^2.

    z_k = 1 - 2(k + 0.5)/n, azimuth 2*pi*k*(1 - 1/phi).
    """
    if n < 1:
        raise ValueError(f"need at least one direction, got {n}")
    samples = []
    for k in range(n):
        z = 1 - 2 * (k + 0.5) / n
        r = math.sqrt(max(0.0, 1 - z * z))
        phi = 2 * math.pi * k * (1 - 1 / GOLDEN_RATIO)
        samples.append(Direction.from_vector((r * math.cos(phi), r * math.sin(phi), z)))
    return DirectionSet(3, tuple(samples), "fibonacci_sphere")


def explicit(vectors: Iterable[Sequence[float]], normalize: bool = True) -> DirectionSet:
    make = Direction.from_vector if normalize else Direction
    samples = tuple(make(v) for v in vectors)
    if not samples:
        raise ValueError("explicit direction set is empty")
    dims = {d.dim for d in samples}
    if len(dims) != 1:
        raise ValueError("directions have mixed dimensions")
    return DirectionSet(dims.pop(), samples, "explicit")


def as_direction_array(directions) -> np.ndarray:
    """Accept a DirectionSet, a list of Direction/vectors, or an (N, d) array."""
    if isinstance(directions, DirectionSet):
        return directions.as_array()
    if isinstance(directions, Direction):
        return np.asarray([directions.vector], dtype=float)
    arr = np.array([d.vector if isinstance(d, Direction) else d for d in directions], dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("need a nonempty list of directions")
    return arr


def write_directions_csv(directions: DirectionSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for d in directions:
        w.writerow([repr(x) for x in d.vector])
    return buf.getvalue()


def read_directions_csv(text: str) -> DirectionSet:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].lstrip().startswith("#")]
    return explicit([[float(x) for x in r] for r in rows])


_ANGLE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<num>\d+)?\s*(?:/\s*(?P<den>\d+))?\s*\*?\s*pi\s*(?:/\s*(?P<den2>\d+))?\s*$"
)


def parse_angle(text: str) -> float:
    """Radians from a decimal or from ``k/n pi`` style text (``3/4pi``, ``pi/2``)."""
    text = text.strip()
    try:
        value = float(text)
    except ValueError:
        pass
    else:
        if not math.isfinite(value):
            raise ValueError(f"angle must be finite: {text!r}")
        return value
    m = _ANGLE.match(text.lower().replace("π", "pi"))
    if not m or (m["den"] and m["den2"]):
        raise ValueError(f"cannot parse angle {text!r}")
    den = int(m["den"] or m["den2"] or 1)
    if den == 0:
        raise ValueError(f"zero denominator in angle {text!r}")
    frac = Fraction(int(m["num"] or 1), den)
    if m["sign"] == "-":
        frac = -frac
    return float(frac) * math.pi


# --------------------------------------------------------------------------
# direction-count estimate


@dataclass(frozen=True)
class DirectionBudget:
    """Leading term of the sufficient direction count.

    The higher-order remainder of the bound has no published constant, so
    it is not included; ``remainder_dropped`` is always True and the value
    should be read as a lower estimate of the bound, not a guarantee.
    """

    delta: float
    b_delta: int
    leading_term: int
    remainder_dropped: bool = True


def _exact(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def direction_budget(delta, b_delta: int) -> DirectionBudget:
    """ceil((2*b_delta + 1) * (1 + 3/delta)**2), computed in exact arithmetic.

    Floats are read through their shortest decimal repr, so ``delta=0.1``
    means one tenth.
    """
    if isinstance(b_delta, bool) or int(b_delta) != b_delta:
        raise ValueError(f"b_delta must be an integer, got {b_delta!r}")
    b = int(b_delta)
    d = _exact(delta)
    if d <= 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    if b < 1:
        raise ValueError(f"b_delta must be at least 1, got {b_delta!r}")
    value = (2 * b + 1) * (1 + Fraction(3) / d) ** 2
    return DirectionBudget(float(delta), b, math.ceil(value))
