"""Turn a coloring of the conflict graph into per-SBS cache contents.

The catalog is sorted by popularity, so color q maps to the q-th block of M
consecutive ranks: color 1 gets the most popular block, and two conflicting
SBSs (which always have different colors) cache disjoint blocks as long as no
wrap-around occurs. When q * M exceeds the catalog, the block wraps back to
rank 1 so no cache is left underfilled.
"""

from __future__ import annotations

from .coloring import Coloring
from .netgraph import PlacementMap
from .popularity import Catalog


def place_by_coloring(c: Coloring, catalog: Catalog, memory: int) -> PlacementMap:
    """SBS with color q caches ranks (q-1)*M+1 .. q*M, wrapped modulo the catalog."""
    if memory < 1:
        raise ValueError("memory must be at least 1")
    caches = []
    for q in c.colors:
        start = (int(q) - 1) * memory
        block = frozenset((start + t) % catalog.file_count + 1 for t in range(memory))
        caches.append(block)
    return PlacementMap(tuple(caches), memory)


def place_most_popular(n_sbs: int, catalog: Catalog, memory: int) -> PlacementMap:
    """Every SBS caches ranks 1..M: the conventional most-popular-everywhere policy."""
    if n_sbs < 0:
        raise ValueError("n_sbs must be non-negative")
    if memory > catalog.file_count:
        raise ValueError("memory cannot exceed the catalog size")
    block = frozenset(range(1, memory + 1))
    return PlacementMap(tuple(block for _ in range(n_sbs)), memory)
