"""Residual-graph discovery using only BIS-style queries: find one neighbor
by binary search, enumerate a neighborhood, and grow a layered BFS tree."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .oracle import CutCache, Flow, OracleView, QueryInputError, canon


@dataclass
class BfsTree:
    root: int
    parent: dict[int, Optional[int]] = field(default_factory=dict)
    dist: dict[int, int] = field(default_factory=dict)

    def reached(self) -> tuple[int, ...]:
        return canon(self.dist)

    def layers(self) -> list[list[int]]:
        if not self.dist:
            return []
        depth = max(self.dist.values())
        out: list[list[int]] = [[] for _ in range(depth + 1)]
        for v in sorted(self.dist):
            out[self.dist[v]].append(v)
        return out


def find_neighbor(
    cache: CutCache,
    view: OracleView,
    f: Optional[Flow],
    A: Iterable[int],
    B: Sequence[int],
) -> Optional[int]:
    """Lowest-id vertex of B with a residual edge from A, or None.

    Costs one BIS when there is no neighbor, and 1 + ceil(log2 |B|) BIS
    otherwise. The halving always splits at the sorted-id midpoint and keeps
    the residual total of the unexplored half by subtraction, so descending
    into the upper half costs nothing extra.
    """
    A = canon(A)
    B = sorted(B)
    if set(A) & set(B):
        raise QueryInputError("find_neighbor sets must be disjoint")
    if not B:
        return None
    total = cache.residual_between(view, f, A, B)
    if total <= 0:
        return None
    while len(B) > 1:
        mid = (len(B) + 1) // 2
        low = B[:mid]
        low_val = cache.residual_between(view, f, A, low)
        if low_val > 0:
            B, total = low, low_val
        else:
            B, total = B[mid:], total - low_val
    return B[0]


def neighborhood(
    cache: CutCache,
    view: OracleView,
    f: Optional[Flow],
    U: Iterable[int],
    candidates: Iterable[int],
) -> list[int]:
    """All residual neighbors of U among the candidates, in increasing id
    order, by repeated find_neighbor with found vertices removed."""
    U = canon(U)
    remaining = sorted(candidates)
    found: list[int] = []
    while True:
        v = find_neighbor(cache, view, f, U, remaining)
        if v is None:
            return found
        found.append(v)
        remaining.remove(v)


def bfs_tree(
    cache: CutCache,
    view: OracleView,
    f: Optional[Flow],
    root: int,
    within: Optional[Iterable[int]] = None,
) -> BfsTree:
    """Layered BFS over the residual graph. Frontier vertices expand in
    (distance, id) order; `within` restricts the search to a candidate set."""
    if root not in view.universe:
        raise QueryInputError(f"root {root} outside the view universe")
    if within is None:
        undiscovered = [v for v in view.vertices() if v != root]
    else:
        undiscovered = sorted(set(within) - {root})
    tree = BfsTree(root=root, parent={root: None}, dist={root: 0})
    frontier = [root]
    while frontier and undiscovered:
        next_frontier: list[int] = []
        for u in frontier:
            if not undiscovered:
                break
            for v in neighborhood(cache, view, f, (u,), undiscovered):
                tree.parent[v] = u
                tree.dist[v] = tree.dist[u] + 1
                undiscovered.remove(v)
                next_frontier.append(v)
        frontier = sorted(next_frontier)
    return tree
