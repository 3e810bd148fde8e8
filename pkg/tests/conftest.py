"""Shared fixtures and brute-force oracles.

The brute helpers read the hidden graph directly (adjacency scans, explicit
residual graphs, exhaustive cut enumeration); they are the independent side
of every dual-route check in the suite.
"""

from __future__ import annotations

import random

import pytest

from cutlab.harness import InstanceSpec, generate
from cutlab.oracle import BaseView, CutCache, Flow, GraphInstance, QueryLedger


def make_view(g: GraphInstance):
    ledger = QueryLedger()
    view = BaseView(g, ledger)
    return view, ledger, CutCache(view)


@pytest.fixture
def b6() -> GraphInstance:
    # two triangles {0,1,2},{3,4,5} plus the bridge (2,3)
    return generate(InstanceSpec("two_cliques_bridge", 6))


@pytest.fixture
def k4() -> GraphInstance:
    return generate(InstanceSpec("complete", 4))


@pytest.fixture
def k3() -> GraphInstance:
    return generate(InstanceSpec("complete", 3))


@pytest.fixture
def p4() -> GraphInstance:
    return generate(InstanceSpec("path", 4))


def random_graph(n: int, p: float, seed: int, W: int = 1) -> GraphInstance:
    params = (("W", W), ("p", p)) if W > 1 else (("p", p),)
    return generate(InstanceSpec("random_gnp", n, seed, params))


# ---------------------------------------------------------------------------
# explicit residual-graph oracles


def residual_capacity(g: GraphInstance, f: Flow | None, u: int, v: int) -> int:
    key = (u, v) if u < v else (v, u)
    c = g.edges.get(key, 0)
    return c - (f.get(u, v) if f is not None else 0)


def brute_residual_neighbors(g, f, A, B) -> list[int]:
    out = []
    for b in sorted(B):
        if any(residual_capacity(g, f, a, b) > 0 for a in A):
            out.append(b)
    return out


def brute_residual_dist(g: GraphInstance, f: Flow | None, root: int) -> dict[int, int]:
    dist = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for v in range(g.n):
                if v not in dist and residual_capacity(g, f, u, v) > 0:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = sorted(nxt)
    return dist


def random_valid_flow(g: GraphInstance, s: int, t: int, seed: int, tries: int = 6) -> Flow:
    """Valid integral s-t flow built by pushing random amounts along random
    residual augmenting paths."""
    rng = random.Random(seed)
    f = Flow.zero(s, t)
    for _ in range(tries):
        # random DFS for an augmenting path
        stack = [(s, [s])]
        seen = {s}
        path = None
        while stack:
            u, pth = stack.pop()
            if u == t:
                path = pth
                break
            nbrs = [v for v in range(g.n) if v not in seen and residual_capacity(g, f, u, v) > 0]
            rng.shuffle(nbrs)
            for v in nbrs:
                seen.add(v)
                stack.append((v, pth + [v]))
        if path is None:
            break
        bottleneck = min(residual_capacity(g, f, a, b) for a, b in zip(path, path[1:]))
        amt = rng.randint(1, bottleneck)
        for a, b in zip(path, path[1:]):
            f.push(a, b, amt)
        f.value += amt
    return f


def brute_cut(g: GraphInstance, side) -> int:
    return g.cut_of(side)


def small_corpus(max_n: int = 14, seeds: int = 2) -> list[GraphInstance]:
    """Deterministic mixed bag of small instances for exhaustive-mode tests."""
    out = []
    for fam, ps in [
        ("complete", ()),
        ("path", ()),
        ("star", ()),
        ("two_cliques_bridge", ()),
        ("expander_like", ()),
        ("random_gnp", (("p", 0.35),)),
        ("random_gnp", (("p", 0.6),)),
        ("planted_cut", (("k", 2),)),
    ]:
        for n in (6, 9, 12, max_n):
            if fam in ("two_cliques_bridge", "planted_cut") and n < 6:
                continue
            for seed in range(seeds):
                out.append(generate(InstanceSpec(fam, n, seed, ps)))
    return out
