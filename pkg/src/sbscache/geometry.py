"""Point configurations in a disk cell and Matern hard-core thinnings.

Everything here is a pure function of its inputs; randomness enters only
through explicit seeds, so any sample is bit-reproducible.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import NamedTuple, TextIO

import numpy as np

# Anything accepted by numpy's default_rng: an int seed, a SeedSequence,
# or an already-constructed Generator (used as-is).
RngSeed = int | np.random.SeedSequence | np.random.Generator


class Point(NamedTuple):
    x: float
    y: float


@dataclass
class PointSet:
    """Ordered points inside the disk of radius ``region_radius`` centred at the origin.

    Index i is the identity of station/user i; the ordering never changes
    after construction. Coordinates are meters.
    """

    xy: np.ndarray  # shape (n, 2) float64
    region_radius: float

    def __post_init__(self):
        self.xy = np.asarray(self.xy, dtype=float).reshape(-1, 2)
        if not self.region_radius > 0:
            raise ValueError("region_radius must be positive")
        if not np.all(np.isfinite(self.xy)):
            raise ValueError("coordinates must be finite")
        r2 = np.einsum("ij,ij->i", self.xy, self.xy)
        if np.any(r2 > self.region_radius**2 * (1.0 + 1e-12)):
            raise ValueError("all points must lie inside the region disk")

    def __len__(self) -> int:
        return self.xy.shape[0]

    @property
    def points(self) -> list[Point]:
        return [Point(float(x), float(y)) for x, y in self.xy]

    @classmethod
    def from_points(cls, points, region_radius: float) -> "PointSet":
        xy = np.array([(p[0], p[1]) for p in points], dtype=float).reshape(-1, 2)
        return cls(xy, region_radius)


@dataclass
class MarkedPointSet:
    """A PointSet with one uniform mark in [0, 1) per point."""

    base: PointSet
    marks: np.ndarray

    def __post_init__(self):
        self.marks = np.asarray(self.marks, dtype=float).reshape(-1)
        if self.marks.shape[0] != len(self.base):
            raise ValueError("marks length must equal point count")
        if self.marks.size and (self.marks.min() < 0.0 or self.marks.max() >= 1.0):
            raise ValueError("marks must lie in [0, 1)")


def sample_binomial_disk(n: int, region_radius: float, seed: RngSeed) -> PointSet:
    """Draw exactly ``n`` i.i.d. area-uniform points in the disk.

    The radius is drawn via the square-root transform (r = R * sqrt(u)) so
    the distribution is uniform in area, and the result is deterministic
    for a fixed seed.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not region_radius > 0:
        raise ValueError("region_radius must be positive")
    rng = np.random.default_rng(seed)
    return _fill_disk(rng, n, region_radius)


def sample_ppp_disk(intensity: float, region_radius: float, seed: RngSeed) -> PointSet:
    """Homogeneous Poisson sample on the disk: Poisson count, uniform positions."""
    if intensity < 0:
        raise ValueError("intensity must be non-negative")
    if not region_radius > 0:
        raise ValueError("region_radius must be positive")
    rng = np.random.default_rng(seed)
    n = int(rng.poisson(intensity * math.pi * region_radius**2))
    return _fill_disk(rng, n, region_radius)


def _fill_disk(rng: np.random.Generator, n: int, region_radius: float) -> PointSet:
    r = region_radius * np.sqrt(rng.random(n))
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    xy = np.column_stack((r * np.cos(theta), r * np.sin(theta)))
    return PointSet(xy, region_radius)


def distance_matrix(pts: PointSet) -> np.ndarray:
    """Pairwise Euclidean distances; exactly symmetric with a zero diagonal."""
    diff = pts.xy[:, None, :] - pts.xy[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def matern_type_i(pts: PointSet, hard_distance: float) -> np.ndarray:
    """Type-I thinning: keep the points with no other point within ``hard_distance``.

    The neighborhood test is inclusive (a competitor at exactly
    ``hard_distance`` eliminates both points). Returns sorted indices into
    ``pts``; deterministic given the point set.
    """
    if not hard_distance > 0:
        raise ValueError("hard_distance must be positive")
    n = len(pts)
    if n == 0:
        return np.empty(0, dtype=int)
    d = distance_matrix(pts)
    np.fill_diagonal(d, np.inf)
    return np.flatnonzero(d.min(axis=1) > hard_distance)


def matern_type_ii(marked: MarkedPointSet, hard_distance: float) -> np.ndarray:
    """Type-II thinning: keep the points whose mark is strictly smallest locally.

    A point survives iff its mark is strictly below the mark of every other
    point within ``hard_distance`` (inclusive). Marks must be pairwise
    distinct so the comparison is never ambiguous.
    """
    if not hard_distance > 0:
        raise ValueError("hard_distance must be positive")
    n = len(marked.base)
    if n == 0:
        return np.empty(0, dtype=int)
    if np.unique(marked.marks).size != n:
        raise ValueError("marks must be pairwise distinct")
    d = distance_matrix(marked.base)
    np.fill_diagonal(d, np.inf)
    neighbor_marks = np.where(d <= hard_distance, marked.marks[None, :], np.inf)
    return np.flatnonzero(marked.marks < neighbor_marks.min(axis=1))


def write_points_csv(pts: PointSet, out: TextIO, marks: np.ndarray | None = None) -> None:
    """CSV with header ``id,x,y`` and an optional trailing ``mark`` column."""
    if marks is not None and len(marks) != len(pts):
        raise ValueError("marks length must equal point count")
    out.write("id,x,y,mark\n" if marks is not None else "id,x,y\n")
    for i, (x, y) in enumerate(pts.xy):
        row = f"{i},{float(x)!r},{float(y)!r}"
        if marks is not None:
            row += f",{float(marks[i])!r}"
        out.write(row + "\n")


def points_to_csv(pts: PointSet, marks: np.ndarray | None = None) -> str:
    buf = io.StringIO()
    write_points_csv(pts, buf, marks)
    return buf.getvalue()


def read_points_csv(source: str | TextIO, region_radius: float):
    """Inverse of write_points_csv; returns (PointSet, marks-or-None)."""
    text = source if isinstance(source, str) else source.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty points CSV")
    header = lines[0].split(",")
    if header[:3] != ["id", "x", "y"]:
        raise ValueError("expected header id,x,y")
    with_marks = len(header) == 4 and header[3] == "mark"
    xy, marks = [], []
    for ln in lines[1:]:
        fields = ln.split(",")
        xy.append((float(fields[1]), float(fields[2])))
        if with_marks:
            marks.append(float(fields[3]))
    pts = PointSet(np.array(xy, dtype=float).reshape(-1, 2), region_radius)
    return pts, (np.asarray(marks) if with_marks else None)
