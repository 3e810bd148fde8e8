"""Deterministic minimum isolating cuts under a size threshold tau.

Terminals are encoded with bit vectors; each bit gives one bipartition (A,B)
of the terminal set, and each bipartition is solved as a bounded-capacity
flow instance (terminal edges of capacity tau+1, realised as unit paths).
Deleting all the resulting closest-cut boundaries splits the graph into
signature classes; the region of a surviving terminal is its component
inside its own class, and the final per-terminal min-cut runs on a view
contracting everything outside the region into a single vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .config import DESK, Params
from .maxflow import dinitz_maxflow
from .oracle import (
    AugmentedView,
    ContractedView,
    CutCache,
    OracleView,
    QueryInputError,
    canon,
)
from .primitives import bfs_tree


def bit_partitions(R: Iterable[int]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """ceil(log2 |R|) bipartitions by bit position of each terminal's rank;
    every pair of terminals is separated by at least one of them."""
    R = canon(R)
    if len(R) < 2:
        raise QueryInputError("bit_partitions needs at least two terminals")
    bits = max(1, math.ceil(math.log2(len(R))))
    out = []
    for b in range(bits):
        A = tuple(r for i, r in enumerate(R) if not (i >> b) & 1)
        B = tuple(r for i, r in enumerate(R) if (i >> b) & 1)
        out.append((A, B))
    return out


@dataclass
class PartitionCut:
    source_side: tuple[int, ...]  # closest min-cut side restricted to the view
    saturated: tuple[int, ...]  # terminals whose whole bundle carries flow
    flow_value: int


def partition_mincut(
    view: OracleView,
    A: Iterable[int],
    B: Iterable[int],
    tau: int,
    cache: Optional[CutCache] = None,
    params: Params = DESK,
) -> PartitionCut:
    """Closest min-cut of the (A,B) flow instance with terminal capacity
    tau+1, plus the set of saturated terminals."""
    A, B = canon(A), canon(B)
    if cache is None:
        cache = CutCache(view.base_view)
    aug = AugmentedView(
        view,
        [(a, tau + 1) for a in A],
        [(b, tau + 1) for b in B],
        scale=1,
    )
    res = dinitz_maxflow(aug, aug.s_source, aug.s_sink, cache=cache, params=params)
    real = view.universe
    side = tuple(v for v in res.mincut_source_side if v in real)
    saturated = []
    for a in A:
        if aug.bundle_flow(res.flow, a) == tau + 1:
            saturated.append(a)
    for b in B:
        if aug.bundle_flow(res.flow, b) == tau + 1:
            saturated.append(b)
    return PartitionCut(side, tuple(sorted(saturated)), res.value)


@dataclass
class TerminalRecord:
    terminal: int
    value: float  # cut capacity, or math.inf for terminals outside the core set
    side: Optional[tuple[int, ...]]


@dataclass
class IsolatingResult:
    records: list[TerminalRecord]
    verdict: str  # "found" | "all_exceed_tau"
    best_terminal: Optional[int] = None
    cut_value: Optional[int] = None
    cut_side: Optional[tuple[int, ...]] = None
    regions: dict[int, tuple[int, ...]] = field(default_factory=dict)


def isolating_cuts(
    view: OracleView,
    R: Iterable[int],
    tau: int,
    cache: Optional[CutCache] = None,
    params: Params = DESK,
) -> IsolatingResult:
    """Minimum isolating cut of R when it has size at most tau, else the
    verdict that every isolating cut exceeds tau. Per-terminal records reuse
    the same computations at no extra query cost."""
    R = canon(R)
    if len(R) < 2:
        raise QueryInputError("isolating_cuts needs at least two terminals")
    if cache is None:
        cache = CutCache(view.base_view)

    partitions = bit_partitions(R)
    sides: list[frozenset] = []
    ever_saturated: set[int] = set()
    for A, B in partitions:
        pc = partition_mincut(view, A, B, tau, cache=cache, params=params)
        sides.append(frozenset(pc.source_side))
        ever_saturated.update(pc.saturated)

    def on_own_side(r: int) -> bool:
        for (A, _B), side in zip(partitions, sides):
            if r in A:
                if r not in side:
                    return False
            elif r in side:
                return False
        return True

    core_terminals = [
        r for r in R if r not in ever_saturated and on_own_side(r)
    ]

    def signature(v: int) -> tuple[bool, ...]:
        return tuple(v in side for side in sides)

    classes: dict[tuple[bool, ...], list[int]] = {}
    for v in view.vertices():
        classes.setdefault(signature(v), []).append(v)

    rset = set(R)
    records: list[TerminalRecord] = []
    regions: dict[int, tuple[int, ...]] = {}
    best: Optional[TerminalRecord] = None
    for r in R:
        if r not in core_terminals:
            records.append(TerminalRecord(r, math.inf, None))
            continue
        # region of r: its component inside its signature class; the deleted
        # cut boundaries are exactly the edges between distinct classes, so
        # a class-restricted BFS explores the surviving graph for free
        cls = classes[signature(r)]
        tree = bfs_tree(cache, view, None, r, within=cls)
        region = tree.reached()
        regions[r] = region
        keep = canon({r} | (set(region) - rset))
        base_cv = ContractedView(view, keep)
        direct = cache.pair_capacity(base_cv, (r,), (base_cv.s_r,))
        lam: float
        if len(keep) == 1:
            lam = direct
            side = (r,)
        else:
            cv = ContractedView(view, keep, drops={r: direct})
            local = dinitz_maxflow(cv, r, cv.s_r, cache=cache, params=params)
            lam = direct + local.value
            side = local.mincut_source_side
        rec = TerminalRecord(r, lam, side)
        records.append(rec)
        if rec.value <= tau and (best is None or rec.value < best.value):
            best = rec
    if best is None:
        return IsolatingResult(records, "all_exceed_tau", regions=regions)
    return IsolatingResult(
        records,
        "found",
        best_terminal=best.terminal,
        cut_value=int(best.value),
        cut_side=best.side,
        regions=regions,
    )
