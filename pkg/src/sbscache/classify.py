"""Proximity classes and Matern-derived integer weights for SBSs.

Stations within ``r_class`` of each other share a class. Weights accumulate
over repeated type-I / type-II thinnings (hard-core distance 2 * r_class,
fresh uniform marks each round) until every station's weight is positive:
stations that keep surviving, or sit near survivors, end up heavier and are
colored (hence cache-filled) first.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .coloring import VertexWeights
from .geometry import MarkedPointSet, PointSet, distance_matrix, matern_type_i, matern_type_ii

SURVIVOR_COUNTINGS = ("double", "single")


class ConvergenceError(RuntimeError):
    """Some station still had zero weight when the iteration budget ran out."""

    def __init__(self, zero_weight_indices):
        self.zero_weight_indices = tuple(int(i) for i in zero_weight_indices)
        super().__init__(
            f"weights still zero after iteration budget: indices {self.zero_weight_indices}"
        )


@dataclass
class ClassWeights:
    """Per-SBS proximity class (self-inclusive) and positive integer weight."""

    classes: tuple[frozenset[int], ...]
    weights: np.ndarray
    iterations_used: int

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=int).reshape(-1)
        if len(self.classes) != self.weights.shape[0]:
            raise ValueError("classes and weights must have equal length")
        for i, members in enumerate(self.classes):
            if i not in members:
                raise ValueError("each class must contain its own station")


def _fresh_marks(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform marks in [0, 1); collisions are resampled so marks stay distinct."""
    marks = rng.random(n)
    while True:
        _, inverse, counts = np.unique(marks, return_inverse=True, return_counts=True)
        dup = counts[inverse] > 1
        if not dup.any():
            return marks
        marks[dup] = rng.random(int(dup.sum()))


def classify_and_weigh(
    sbs: PointSet,
    r_class: float,
    seed,
    max_iterations: int | None = None,
    survivor_counting: str = "double",
) -> ClassWeights:
    """Build classes by distance and accumulate weights until all are positive.

    Each iteration computes the type-I survivors (geometry only, so constant
    across iterations) and the type-II survivors under fresh marks, both at
    hard-core distance 2 * r_class. Every survivor then bumps the weight of
    every member of its class. With ``survivor_counting="double"`` (default) a
    station appearing in both survivor sets triggers one increment pass per
    set; ``"single"`` counts the union once, for sensitivity checks.

    Raises ConvergenceError, reporting the still-zero indices, if the budget
    (default 10 * station count) runs out first.
    """
    if not r_class > 0:
        raise ValueError("r_class must be positive")
    if survivor_counting not in SURVIVOR_COUNTINGS:
        raise ValueError(f"survivor_counting must be one of {SURVIVOR_COUNTINGS}")
    n = len(sbs)
    if max_iterations is None:
        max_iterations = 10 * max(n, 1)
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")

    d = distance_matrix(sbs)
    classes = tuple(frozenset(np.flatnonzero(d[i] <= r_class).tolist()) for i in range(n))
    weights = np.zeros(n, dtype=int)
    if n == 0:
        return ClassWeights(classes, weights, 0)

    rng = np.random.default_rng(seed)
    hard = 2.0 * r_class
    survivors_i = matern_type_i(sbs, hard)
    for iteration in range(1, max_iterations + 1):
        marks = _fresh_marks(rng, n)
        survivors_ii = matern_type_ii(MarkedPointSet(sbs, marks), hard)
        if survivor_counting == "double":
            passes = list(survivors_i) + list(survivors_ii)
        else:
            passes = sorted(set(survivors_i.tolist()) | set(survivors_ii.tolist()))
        for i in passes:
            for j in classes[i]:
                weights[j] += 1
        if np.all(weights > 0):
            return ClassWeights(classes, weights, iteration)
    raise ConvergenceError(np.flatnonzero(weights == 0))


def class_graph_input(cw: ClassWeights) -> tuple[tuple[frozenset[int], ...], VertexWeights]:
    """Adapt ClassWeights for the class-graph builder and weight-priority coloring."""
    return cw.classes, VertexWeights(cw.weights)


def classweights_to_csv(cw: ClassWeights) -> str:
    buf = io.StringIO()
    buf.write("sbs_id,weight,class_members\n")
    for i, members in enumerate(cw.classes):
        joined = ";".join(str(j) for j in sorted(members))
        buf.write(f"{i},{int(cw.weights[i])},{joined}\n")
    return buf.getvalue()
