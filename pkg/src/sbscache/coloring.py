"""Proper vertex coloring of conflict graphs.

Two greedy priority orders (static degree, vertex weight), an exact
minimum-coloring solver for small instances, and brute-force bound oracles
(max degree, clique number, independence number). Color indices start at 1
and are dense; they double as cache-fill priorities downstream.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .netgraph import SimpleGraph

# Minimum coloring is NP-hard; the exact solver refuses instances above this
# size unless the caller raises the limit explicitly.
EXACT_SOLVER_LIMIT = 25


class CapacityError(RuntimeError):
    """Instance too large for an exact combinatorial solver."""


@dataclass
class Coloring:
    """Per-vertex color in 1..k, every color used at least once."""

    colors: np.ndarray
    k: int

    def __post_init__(self):
        self.colors = np.asarray(self.colors, dtype=int).reshape(-1)
        n = self.colors.shape[0]
        if n == 0:
            if self.k != 0:
                raise ValueError("empty coloring must use zero colors")
            return
        if self.colors.min() < 1 or self.colors.max() != self.k:
            raise ValueError("colors must be dense in 1..k")
        if np.unique(self.colors).size != self.k:
            raise ValueError("every color in 1..k must be used")

    def __len__(self) -> int:
        return self.colors.shape[0]


@dataclass
class VertexWeights:
    """Non-negative integer priority weight per vertex."""

    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=int).reshape(-1)
        if self.weights.size and self.weights.min() < 0:
            raise ValueError("weights must be non-negative")

    def __len__(self) -> int:
        return self.weights.shape[0]


def is_proper(g: SimpleGraph, c: Coloring) -> bool:
    """True iff no edge joins two vertices of equal color."""
    if len(c) != g.n:
        raise ValueError("coloring must cover every vertex")
    same = c.colors[:, None] == c.colors[None, :]
    return not np.any(same & g.adjacency)


def _greedy_in_order(g: SimpleGraph, order) -> Coloring:
    """Smallest feasible color along the given vertex order."""
    colors = np.zeros(g.n, dtype=int)
    for v in order:
        banned = set(colors[u] for u in np.flatnonzero(g.adjacency[v]) if colors[u])
        c = 1
        while c in banned:
            c += 1
        colors[v] = c
    k = int(colors.max()) if g.n else 0
    return Coloring(colors, k)


def greedy_color_by_degree(g: SimpleGraph) -> Coloring:
    """Color in descending static-degree order, ties broken by vertex index."""
    deg = g.degrees()
    order = sorted(range(g.n), key=lambda v: (-int(deg[v]), v))
    return _greedy_in_order(g, order)


def greedy_color_by_weight(g: SimpleGraph, w: VertexWeights) -> Coloring:
    """Color in descending weight order, ties broken by vertex index."""
    if len(w) != g.n:
        raise ValueError("weights length must equal vertex count")
    order = sorted(range(g.n), key=lambda v: (-int(w.weights[v]), v))
    return _greedy_in_order(g, order)


def _adjacency_bits(g: SimpleGraph) -> list[int]:
    return [int.from_bytes(np.packbits(g.adjacency[v], bitorder="little").tobytes(), "little")
            for v in range(g.n)]


def _components(g: SimpleGraph) -> list[list[int]]:
    seen = np.zeros(g.n, dtype=bool)
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in np.flatnonzero(g.adjacency[v]):
                if not seen[u]:
                    seen[u] = True
                    stack.append(int(u))
        comps.append(sorted(comp))
    return comps


def _greedy_clique_size(adj: list[int], order: list[int]) -> int:
    """Cheap clique lower bound: extend greedily along the order."""
    best = 0
    for start in order:
        clique = 1
        cand = adj[start]
        while cand:
            v = (cand & -cand).bit_length() - 1
            clique += 1
            cand &= adj[v]
        best = max(best, clique)
    return best


def _k_colorable(adj: list[int], order: list[int], k: int) -> list[int] | None:
    """Backtracking k-colorability with symmetry breaking.

    The first vertex is fixed to color 1 and a new color may only be opened
    in index order, so each color class pattern is tried once. Returns the
    per-position color assignment, or None once the search space is exhausted.
    """
    n = len(order)
    assignment = [0] * n
    class_bits = [0] * k

    def solve(i: int, used: int) -> bool:
        if i == n:
            return True
        v = order[i]
        bit = 1 << v
        for c in range(min(used + 1, k)):
            if adj[v] & class_bits[c] == 0:
                class_bits[c] |= bit
                assignment[i] = c + 1
                if solve(i + 1, max(used, c + 1)):
                    return True
                class_bits[c] &= ~bit
        return False

    return assignment if solve(0, 0) else None


def exact_min_coloring(g: SimpleGraph, limit: int = EXACT_SOLVER_LIMIT) -> Coloring:
    """A proper coloring with the minimum possible number of colors.

    Branch-and-bound backtracking over color classes, run per connected
    component: k-colorability is searched upward from a greedy-clique lower
    bound, so the returned k is certified optimal by the exhausted search at
    k - 1 (or by the clique when it already meets k).
    """
    if g.n > limit:
        raise CapacityError(f"exact solver limited to {limit} vertices, got {g.n}")
    colors = np.zeros(g.n, dtype=int)
    adj = _adjacency_bits(g)
    deg = g.degrees()
    for comp in _components(g):
        order = sorted(comp, key=lambda v: (-int(deg[v]), v))
        lb = max(1, _greedy_clique_size(adj, order))
        for k in range(lb, len(comp) + 1):
            assignment = _k_colorable(adj, order, k)
            if assignment is not None:
                for pos, v in enumerate(order):
                    colors[v] = assignment[pos]
                break
    k = int(colors.max()) if g.n else 0
    return Coloring(colors, k)


def max_degree(g: SimpleGraph) -> int:
    return int(g.degrees().max()) if g.n else 0


def clique_number(g: SimpleGraph, limit: int = EXACT_SOLVER_LIMIT) -> int:
    """Exact omega(G) by pruned exhaustive subset search."""
    if g.n > limit:
        raise CapacityError(f"clique oracle limited to {limit} vertices, got {g.n}")
    if g.n == 0:
        return 0
    adj = _adjacency_bits(g)
    best = 0

    def extend(size: int, cand: int) -> None:
        nonlocal best
        if size > best:
            best = size
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            extend(size + 1, cand & adj[v])

    extend(0, (1 << g.n) - 1)
    return best


def independence_number(g: SimpleGraph, limit: int = EXACT_SOLVER_LIMIT) -> int:
    """Exact alpha(G): the clique number of the complement graph."""
    if g.n > limit:
        raise CapacityError(f"independence oracle limited to {limit} vertices, got {g.n}")
    comp = ~g.adjacency
    np.fill_diagonal(comp, False)
    return clique_number(SimpleGraph(g.n, comp), limit)


def coloring_to_csv(c: Coloring) -> str:
    buf = io.StringIO()
    buf.write("vertex_id,color\n")
    for v, col in enumerate(c.colors):
        buf.write(f"{v},{int(col)}\n")
    return buf.getvalue()
