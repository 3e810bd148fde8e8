"""Cut-matching-game expander decomposition in the cut-query model.

The cut player works on the explicit witness multigraph X and spends no
queries: exhaustive minimum-crossing bisection up to a size limit, then a
deterministic spectral bisection. The matching player embeds perfect
(tau+1)-matchings through bounded-capacity flow instances on the oracle;
short matchings are completed with fake edges that expander pruning charges
back later. One step either finds a balanced sparse cut or certifies a core
of terminals; the decomposition recurses on induced sub-views whose crossing
edges are learned once and subtracted at zero query cost thereafter.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .config import DESK, Params
from .maxflow import dinitz_maxflow, path_decomposition
from .oracle import (
    AugmentedView,
    ContractViolation,
    CutCache,
    InducedView,
    OracleView,
    QueryInputError,
    canon,
)
from .primitives import neighborhood


# ---------------------------------------------------------------------------
# witness graph


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _edge_arrays(edges: Counter, index: dict[int, int]):
    eu, ev, ew = [], [], []
    for (u, v), c in sorted(edges.items()):
        if u in index and v in index:
            eu.append(index[u])
            ev.append(index[v])
            ew.append(c)
    return (
        np.array(eu, dtype=np.int64),
        np.array(ev, dtype=np.int64),
        np.array(ew, dtype=np.int64),
    )


@dataclass
class WitnessGraph:
    """Union of the per-round matchings, with fake edges tracked separately.
    Every slot has degree exactly b per completed round, counting fakes."""

    slots: tuple[int, ...]
    b: int
    pad: Optional[int] = None
    edges: Counter = field(default_factory=Counter)
    fake: Counter = field(default_factory=Counter)
    rounds: int = 0

    def add_round(self, matching: Counter, fakes: Counter) -> None:
        deg: Counter = Counter()
        for (u, v), c in itertools.chain(matching.items(), fakes.items()):
            deg[u] += c
            deg[v] += c
        for s in self.slots:
            if deg[s] != self.b:
                raise QueryInputError(
                    f"round degree of slot {s} is {deg[s]}, expected {self.b}"
                )
        self.edges.update(matching)
        self.fake.update(fakes)
        self.rounds += 1

    def degree(self, v: int, include_fake: bool = True) -> int:
        total = 0
        for (a, b), c in self.edges.items():
            if v in (a, b):
                total += c
        if include_fake:
            for (a, b), c in self.fake.items():
                if v in (a, b):
                    total += c
        return total

    def fake_degree(self, v: int) -> int:
        return sum(c for (a, b), c in self.fake.items() if v in (a, b))

    def combined(self) -> Counter:
        out = Counter(self.edges)
        out.update(self.fake)
        return out

    def sparsity_at_least(self, threshold: int) -> bool:
        """Exhaustive check that every cut of X (fakes included) has at least
        threshold * min(|S|, |S̄|) crossing edges. Only for small X."""
        k = len(self.slots)
        if k < 2:
            return True
        index = {s: i for i, s in enumerate(self.slots)}
        eu, ev, ew = _edge_arrays(self.combined(), index)
        core_mask = (1 << k) - 1
        violation = _kernels.expansion_violation(
            k, eu, ev, ew, core_mask, threshold, 1
        )
        return violation == -1


# ---------------------------------------------------------------------------
# cut player


def cut_player(X: WitnessGraph, params: Params = DESK) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Bisection of the witness slots: the exact minimum-crossing bisection
    by exhaustive search up to the configured limit, else a deterministic
    spectral split. Costs zero queries (X is explicit)."""
    slots = X.slots
    k = len(slots)
    if k < 2 or k % 2:
        raise QueryInputError("cut player needs an even number of slots")
    index = {s: i for i, s in enumerate(slots)}
    W = np.zeros((k, k), dtype=np.int64)
    for (u, v), c in X.combined().items():
        W[index[u], index[v]] += c
        W[index[v], index[u]] += c
    deg = W.sum(axis=1)
    if k <= params.cut_player_exact_limit:
        combos = list(itertools.combinations(range(1, k), k // 2 - 1))
        M = np.zeros((len(combos), k), dtype=np.int64)
        M[:, 0] = 1
        for i, combo in enumerate(combos):
            M[i, list(combo)] = 1
        crossing = M @ deg - np.einsum("ij,jl,il->i", M, W, M)
        pick = M[int(np.argmin(crossing))]
    else:
        # power iteration for an approximate Fiedler direction, fixed seed
        d = np.maximum(deg, 1).astype(float)
        P = W.astype(float) / d[:, None]
        x = np.arange(k, dtype=float) - (k - 1) / 2.0
        x /= np.linalg.norm(x)
        for _ in range(120):
            x = x - x.mean()
            y = 0.5 * (x + P @ x)
            norm = np.linalg.norm(y)
            if norm < 1e-12:
                break
            x = y / norm
        # smallest k/2 by (value, slot id); complement of the dominant
        # mixing direction approximates the sparse direction
        order = sorted(range(k), key=lambda i: (x[i], slots[i]))
        pick = np.zeros(k, dtype=np.int64)
        pick[order[: k // 2]] = 1
    A = tuple(slots[i] for i in range(k) if pick[i])
    B = tuple(slots[i] for i in range(k) if not pick[i])
    return A, B


# ---------------------------------------------------------------------------
# matching player


@dataclass
class MatchOutcome:
    kind: str  # "matching" | "sparse_cut"
    matching: Counter = field(default_factory=Counter)
    embedding: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    cut: tuple[int, ...] = ()
    flow_value: int = 0
    demand: int = 0


def matching_player(
    view: OracleView,
    A: Iterable[int],
    B: Iterable[int],
    tau: int,
    phi: float,
    beta: float,
    cache: Optional[CutCache] = None,
    params: Params = DESK,
) -> MatchOutcome:
    """Route tau+1 units from every A-terminal to B-terminals through edges
    of capacity ceil(1/phi). A large enough flow yields an almost-perfect
    matching read off the path decomposition together with its embedding;
    otherwise the residual-reachable set is a sparse cut with unsaturated
    terminals on both sides."""
    A, B = canon(A), canon(B)
    if not A or not B:
        raise QueryInputError("matching player needs nonempty sides")
    if cache is None:
        cache = CutCache(view.base_view)
    cap_int = max(1, math.ceil(1.0 / phi))
    aug = AugmentedView(
        view,
        [(a, tau + 1) for a in A],
        [(b, tau + 1) for b in B],
        scale=cap_int,
    )
    res = dinitz_maxflow(aug, aug.s_source, aug.s_sink, cache=cache, params=params)
    demand = min(len(A), len(B)) * (tau + 1)
    threshold = (min(len(A), len(B)) - beta) * (tau + 1)
    if res.value >= threshold:
        matching: Counter = Counter()
        embedding = []
        for path, units in path_decomposition(res.flow):
            real = path[2:-2]
            matching[_pair(real[0], real[-1])] += units
            embedding.append((real, units))
        return MatchOutcome(
            "matching", matching=matching, embedding=embedding,
            flow_value=res.value, demand=demand,
        )
    side = tuple(v for v in res.mincut_source_side if v in view.universe)
    return MatchOutcome("sparse_cut", cut=side, flow_value=res.value, demand=demand)


# ---------------------------------------------------------------------------
# expander pruning


@dataclass
class PruneReport:
    pruned: tuple[int, ...]
    volume: int
    budget: float
    within_budget: bool


def prune(
    X: WitnessGraph,
    fake: Optional[Counter] = None,
    phi_x: Optional[float] = None,
    params: Params = DESK,
) -> PruneReport:
    """Iterative peeling realisation of expander pruning: while the fake-free
    witness has a cut of conductance below phi_x/6, move its smaller-volume
    side into the prune set. The volume bound vol(P) <= (8/phi_x)|F'| is
    reported as a diagnostic, not enforced."""
    fake = X.fake if fake is None else fake
    if phi_x is None:
        phi_x = params.phi_x_for(len(X.slots))
    target = phi_x / 6.0
    real_edges = Counter(X.edges)
    alive = list(X.slots)
    pruned: list[int] = []
    # volumes measured in the original fake-free witness
    orig_deg = {v: 0 for v in X.slots}
    for (u, v), c in real_edges.items():
        orig_deg[u] += c
        orig_deg[v] += c
    while len(alive) > 1:
        index = {v: i for i, v in enumerate(alive)}
        eu, ev, ew = _edge_arrays(real_edges, index)
        if eu.shape[0] == 0:
            break
        if len(alive) <= params.prune_exact_limit:
            cross, vol, mask = _kernels.best_conductance_cut(len(alive), eu, ev, ew)
        else:
            cross, vol, mask = _spectral_conductance_cut(len(alive), eu, ev, ew)
        if cross < 0 or cross >= target * vol:
            break
        inside = [alive[i] for i in range(len(alive)) if (mask >> i) & 1]
        outside = [v for v in alive if v not in set(inside)]
        deg_now: Counter = Counter()
        for (u, v), c in real_edges.items():
            deg_now[u] += c
            deg_now[v] += c
        vol_in = sum(deg_now[v] for v in inside)
        vol_out = sum(deg_now[v] for v in outside)
        side = inside if vol_in <= vol_out else outside
        pruned.extend(side)
        drop = set(side)
        alive = [v for v in alive if v not in drop]
        real_edges = Counter(
            {e: c for e, c in real_edges.items() if e[0] not in drop and e[1] not in drop}
        )
    volume = sum(orig_deg[v] for v in pruned)
    fake_count = sum(fake.values())
    budget = (8.0 / phi_x) * fake_count
    return PruneReport(
        pruned=canon(pruned),
        volume=volume,
        budget=budget,
        within_budget=volume <= budget,
    )


def _spectral_conductance_cut(k, eu, ev, ew):
    """Deterministic sweep cut by approximate Fiedler order."""
    W = np.zeros((k, k), dtype=float)
    for u, v, w in zip(eu, ev, ew):
        W[int(u), int(v)] += w
        W[int(v), int(u)] += w
    deg = W.sum(axis=1)
    d = np.maximum(deg, 1.0)
    P = W / d[:, None]
    x = np.arange(k, dtype=float) - (k - 1) / 2.0
    x /= np.linalg.norm(x)
    for _ in range(120):
        x = x - (x * deg).sum() / max(deg.sum(), 1.0)
        y = 0.5 * (x + P @ x)
        norm = np.linalg.norm(y)
        if norm < 1e-12:
            break
        x = y / norm
    order = np.argsort(x, kind="stable")
    total = deg.sum()
    best = (-1, 1, 0)
    inside: set[int] = set()
    mask = 0
    vol_in = 0.0
    cross = 0.0
    adj = {i: [] for i in range(k)}
    for u, v, w in zip(eu, ev, ew):
        adj[int(u)].append((int(v), int(w)))
        adj[int(v)].append((int(u), int(w)))
    for idx in order[:-1]:
        idx = int(idx)
        inside.add(idx)
        mask |= 1 << idx
        vol_in += deg[idx]
        for nbr, w in adj[idx]:
            cross += w if nbr not in inside else -w
        small = min(vol_in, total - vol_in)
        if small <= 0:
            continue
        if best[0] < 0 or cross * best[1] < best[0] * small:
            best = (int(cross), int(small), mask)
    return best


# ---------------------------------------------------------------------------
# one step and full decomposition


@dataclass
class OneStepResult:
    kind: str  # "cut" | "core"
    cut: tuple[int, ...] = ()
    core: tuple[int, ...] = ()
    witness: Optional[WitnessGraph] = None
    prune_report: Optional[PruneReport] = None
    rounds: int = 0


def one_step(
    view: OracleView,
    R: Iterable[int],
    tau: int,
    params: Params = DESK,
    cache: Optional[CutCache] = None,
    phi: Optional[float] = None,
) -> OneStepResult:
    """One round of the decomposition: either a balanced sparse cut, or a
    core R' of terminals certified by the witness graph after pruning."""
    R = canon(R)
    if len(R) < 2:
        raise QueryInputError("one_step needs at least two terminals")
    if cache is None:
        cache = CutCache(view.base_view)
    n = view.base_view.n
    if phi is None:
        phi = params.phi_for(n)
    beta = params.beta_for(len(R), n)
    pad = None
    slots = R
    if len(slots) % 2:
        pad = max(slots) + 1
        slots = slots + (pad,)
    X = WitnessGraph(slots=slots, b=tau + 1, pad=pad)
    r_max = params.rounds_for(len(slots))
    for _ in range(r_max):
        A, B = cut_player(X, params)
        A_real = tuple(a for a in A if a != pad)
        B_real = tuple(b for b in B if b != pad)
        out = matching_player(
            view, A_real, B_real, tau, phi, beta, cache=cache, params=params
        )
        if out.kind == "sparse_cut":
            inside = len(set(out.cut) & set(R))
            if not (0 < inside < len(R)):
                raise ContractViolation("matching player returned an unbalanced cut")
            return OneStepResult("cut", cut=out.cut, witness=X, rounds=X.rounds)
        deficit: Counter = Counter()
        for s in A + B:
            deficit[s] = tau + 1
        for (u, v), c in out.matching.items():
            deficit[u] -= c
            deficit[v] -= c
        fakes = _complete_with_fakes(A, B, deficit)
        X.add_round(out.matching, fakes)
        if len(slots) <= params.witness_check_limit and X.sparsity_at_least(tau + 1):
            break
    report = prune(X, params=params)
    pruned = set(report.pruned)
    budget = params.bad_budget(tau)
    core = []
    for v in R:
        if v in pruned:
            continue
        bad = X.fake_degree(v)
        for (a, b), c in X.edges.items():
            if v == a and b in pruned:
                bad += c
            elif v == b and a in pruned:
                bad += c
        if bad <= budget:
            core.append(v)
    return OneStepResult(
        "core", core=canon(core), witness=X, prune_report=report, rounds=X.rounds
    )


def _complete_with_fakes(A, B, deficit: Counter) -> Counter:
    """Pair leftover demand greedily in sorted-id order into fake edges."""
    fakes: Counter = Counter()
    a_list = [[s, deficit[s]] for s in sorted(A) if deficit[s] > 0]
    b_list = [[s, deficit[s]] for s in sorted(B) if deficit[s] > 0]
    i = j = 0
    while i < len(a_list) and j < len(b_list):
        take = min(a_list[i][1], b_list[j][1])
        fakes[_pair(a_list[i][0], b_list[j][0])] += take
        a_list[i][1] -= take
        b_list[j][1] -= take
        if a_list[i][1] == 0:
            i += 1
        if b_list[j][1] == 0:
            j += 1
    if i < len(a_list) or j < len(b_list):
        raise QueryInputError("unbalanced fake-edge completion")
    return fakes


@dataclass
class DecompositionPart:
    vertices: tuple[int, ...]
    terminals: tuple[int, ...]
    core: tuple[int, ...]
    classification: str  # "empty" | "small" | "large"


def classify_core(core_size: int, phi: float) -> str:
    if core_size == 0:
        return "empty"
    if core_size <= (1.0 / phi) ** 2:
        return "small"
    return "large"


def decompose(
    view: OracleView,
    R: Iterable[int],
    tau: int,
    params: Params = DESK,
    cache: Optional[CutCache] = None,
    phi: Optional[float] = None,
) -> list[DecompositionPart]:
    """Recursive one_step over induced sub-views. When a part is created its
    crossing edges are learned once via neighborhood(); induced cut answers
    subtract them afterwards at zero query cost."""
    R = canon(R)
    if cache is None:
        cache = CutCache(view.base_view)
    n = view.base_view.n
    if phi is None:
        phi = params.phi_for(n)
    parts: list[DecompositionPart] = []

    def emit(sub_view: OracleView, terms: tuple[int, ...], core: tuple[int, ...]):
        parts.append(
            DecompositionPart(
                vertices=sub_view.vertices(),
                terminals=terms,
                core=core,
                classification=classify_core(len(core), phi),
            )
        )

    def rec(sub_view: OracleView, terms: tuple[int, ...]):
        if len(terms) < 2:
            emit(sub_view, terms, terms)
            return
        res = one_step(sub_view, terms, tau, params=params, cache=cache, phi=phi)
        if res.kind == "core":
            emit(sub_view, terms, res.core)
            return
        side = canon(res.cut)
        rest = canon(set(sub_view.vertices()) - set(side))
        side_view = _induce(sub_view, side, rest, cache)
        rest_view = _induce(sub_view, rest, side, cache, reuse=side_view)
        children = [
            (side_view, canon(set(terms) & set(side))),
            (rest_view, canon(set(terms) - set(side))),
        ]
        children.sort(key=lambda child: child[0].vertices()[0])
        for child_view, child_terms in children:
            rec(child_view, child_terms)

    rec(view, R)
    parts.sort(key=lambda p: p.vertices[0] if p.vertices else -1)
    return parts


def _induce(
    parent: OracleView,
    part: tuple[int, ...],
    other: tuple[int, ...],
    cache: CutCache,
    reuse: Optional[InducedView] = None,
) -> InducedView:
    """Build the induced view for `part`, learning the crossing edges from
    the smaller side (or reusing the mirror view's discovery)."""
    if reuse is not None:
        w_out = dict(reuse.cross_mirror)  # type: ignore[attr-defined]
        iv = InducedView(parent, part, w_out)
        iv.cross_mirror = reuse.w_out  # type: ignore[attr-defined]
        return iv
    small, big = (part, other) if len(part) <= len(other) else (other, part)
    w_small = {v: 0 for v in small}
    w_big = {v: 0 for v in big}
    unit = parent.unit_real_capacities()
    for v in small:
        for u in neighborhood(cache, parent, None, (v,), big):
            c = 1 if unit else cache.capacity(parent, v, u)
            w_small[v] += c
            w_big[u] += c
    w_out = w_small if small is part else w_big
    mirror = w_big if small is part else w_small
    iv = InducedView(parent, part, w_out)
    iv.cross_mirror = mirror  # type: ignore[attr-defined]
    return iv
