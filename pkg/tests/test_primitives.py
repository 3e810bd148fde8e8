"""find_neighbor / neighborhood / bfs_tree against explicit residual-graph
oracles, plus the BIS budget guard for BFS."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutlab.config import PINNED
from cutlab.oracle import Flow, QueryInputError
from cutlab.primitives import bfs_tree, find_neighbor, neighborhood
from conftest import (
    brute_residual_dist,
    brute_residual_neighbors,
    make_view,
    random_graph,
    random_valid_flow,
)


def test_find_neighbor_examples(p4, b6):
    view, _, cache = make_view(p4)
    assert find_neighbor(cache, view, None, [1], [2, 3]) == 2
    assert find_neighbor(cache, view, None, [0], [2, 3]) is None
    view, _, cache = make_view(b6)
    f = Flow.zero(0, 5)
    for a, b in ((0, 2), (2, 3), (3, 5)):
        f.push(a, b, 1)
    f.value = 1
    # only the back edge 3->2 survives toward the first triangle
    assert find_neighbor(cache, view, f, [3], [0, 1, 2]) == 2


def test_find_neighbor_returns_lowest_id_and_counts_bis():
    for seed in range(5):
        g = random_graph(11, 0.4, seed)
        f = random_valid_flow(g, 0, 10, seed)
        view, _, cache = make_view(g)
        A = [0, 4]
        B = [v for v in range(1, 11) if v not in A]
        brute = brute_residual_neighbors(g, f, A, B)
        before = cache.logical_bis
        got = find_neighbor(cache, view, f, A, B)
        used = cache.logical_bis - before
        if brute:
            assert got == brute[0]
            assert used <= 1 + math.ceil(math.log2(len(B))) + 1
        else:
            assert got is None
            assert used == 1


def test_find_neighbor_disjointness_error(p4):
    view, _, cache = make_view(p4)
    with pytest.raises(QueryInputError):
        find_neighbor(cache, view, None, [1], [1, 2])


def test_neighborhood_examples(k4, b6):
    view, _, cache = make_view(k4)
    assert neighborhood(cache, view, None, [0], [1, 2, 3]) == [1, 2, 3]
    view, _, cache = make_view(b6)
    assert neighborhood(cache, view, None, [0, 1, 2], [3, 4, 5]) == [3]


def test_neighborhood_matches_brute_on_random_graphs():
    for seed in range(6):
        g = random_graph(10, 0.45, seed)
        f = random_valid_flow(g, 0, 9, seed)
        view, _, cache = make_view(g)
        U = [0, 3]
        cands = [v for v in range(10) if v not in U]
        assert neighborhood(cache, view, f, U, cands) == brute_residual_neighbors(
            g, f, U, cands
        )


def test_bfs_tree_examples(p4, k4, b6):
    view, _, cache = make_view(p4)
    tree = bfs_tree(cache, view, None, 0)
    assert tree.dist == {0: 0, 1: 1, 2: 2, 3: 3}
    view, _, cache = make_view(k4)
    tree = bfs_tree(cache, view, None, 2)
    assert max(tree.dist.values()) == 1
    view, _, cache = make_view(b6)
    f = Flow.zero(0, 5)
    for a, b in ((0, 2), (2, 3), (3, 5)):
        f.push(a, b, 1)
    f.value = 1
    tree = bfs_tree(cache, view, f, 0)
    assert set(tree.dist) == {0, 1, 2}  # the far triangle is unreachable


def test_bfs_tree_matches_brute_with_flows():
    for seed in range(8):
        g = random_graph(10, 0.4, seed)
        f = random_valid_flow(g, 0, 9, seed)
        view, _, cache = make_view(g)
        tree = bfs_tree(cache, view, f, 0)
        assert tree.dist == brute_residual_dist(g, f, 0)
        # parent edges must be residual edges
        for v, p in tree.parent.items():
            if p is not None:
                key = (min(p, v), max(p, v))
                assert g.edges.get(key, 0) - f.get(p, v) > 0


def test_bfs_tree_within_restriction(b6):
    view, _, cache = make_view(b6)
    tree = bfs_tree(cache, view, None, 0, within=[1, 2])
    assert set(tree.dist) == {0, 1, 2}
    tree = bfs_tree(cache, view, None, 0, within=[4, 5])
    assert set(tree.dist) == {0}


def test_bfs_bis_budget_pinned():
    worst = 0.0
    for seed in range(6):
        for n in (8, 16, 32):
            g = random_graph(n, 0.4, seed)
            view, _, cache = make_view(g)
            bfs_tree(cache, view, None, 0)
            ratio = cache.logical_bis / (n * math.log2(n))
            worst = max(worst, ratio)
    assert worst <= PINNED["C1_BFS"], f"bfs budget ratio {worst}"


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 10), st.integers(0, 10_000), st.floats(0.15, 0.8))
def test_find_neighbor_agrees_with_brute_hypothesis(n, seed, p):
    g = random_graph(n, p, seed % 97)
    view, _, cache = make_view(g)
    rng = random.Random(seed)
    A = sorted(rng.sample(range(n), rng.randint(1, n // 2)))
    B = sorted(set(range(n)) - set(A))
    brute = brute_residual_neighbors(g, None, A, B)
    got = find_neighbor(cache, view, None, A, B)
    assert got == (brute[0] if brute else None)
