import math

import pytest
from hypothesis import given, settings, strategies as st

from girthlab.graphs import Graph, INF
from girthlab.generators import (cycle_plus_chords, grid, planted_cycle,
                                 random_sparse, subdivision, uniform_random)
from girthlab.oracle import (all_paths_min_weight, exact_girth,
                             exact_girth_bruteforce, hop_diameter,
                             hop_limited_distances, single_source)


def petersen():
    edges = ([(i, (i + 1) % 5) for i in range(5)]
             + [(i + 5, ((i + 2) % 5) + 5) for i in range(5)]
             + [(i, i + 5) for i in range(5)])
    return Graph(10, edges=edges)


def test_exact_girth_fixtures():
    tri = Graph(3, edges=[(0, 1), (1, 2), (2, 0)])
    assert exact_girth(tri)[0] == 3
    path = Graph(3, directed=True, edges=[(0, 1), (1, 2)])
    assert exact_girth(path) == (INF, None)
    # brute-force DFS enumeration agrees on the Petersen graph
    assert exact_girth_bruteforce(petersen()) == 5
    assert exact_girth(petersen())[0] == 5


def test_girth_witness_verifies():
    g = uniform_random(40, 0.12, seed=4)
    val, wit = exact_girth(g)
    assert wit.hops == val == wit.weight


def test_hop_diameter_fixtures():
    k4 = Graph(4, edges=[(u, v) for u in range(4) for v in range(u + 1, 4)])
    assert hop_diameter(k4) == 1
    p5 = Graph(5, edges=[(i, i + 1) for i in range(4)])
    assert hop_diameter(p5) == 4
    two = Graph(2, edges=[])
    assert hop_diameter(two) == INF
    assert hop_diameter(Graph(1)) == 0


def test_hop_limited_fixtures():
    g = Graph(3, weighted=True, edges=[(0, 1, 2), (1, 2, 3)], W=3)
    d1 = hop_limited_distances(g, 0, 1)
    assert d1[1] == 2 and d1[2] == INF
    d2 = hop_limited_distances(g, 0, 2)
    assert d2[2] == 5
    # a 3-hop path of weight 4 beats a 1-hop edge of weight 10
    g2 = Graph(4, weighted=True,
               edges=[(0, 3, 10), (0, 1, 1), (1, 2, 1), (2, 3, 2)], W=10)
    assert hop_limited_distances(g2, 0, 1)[3] == 10
    assert hop_limited_distances(g2, 0, 3)[3] == 4


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_bfs_vs_dfs_enumeration(seed):
    g = uniform_random(14, 0.18, seed=seed)
    assert exact_girth(g)[0] == exact_girth_bruteforce(g)


@given(st.integers(0, 10 ** 6), st.booleans())
@settings(max_examples=30, deadline=None)
def test_weighted_oracles_agree(seed, directed):
    g = uniform_random(12, 0.2, seed=seed, directed=directed, weighted=True, W=7)
    assert exact_girth(g)[0] == exact_girth_bruteforce(g)


def test_uniform_50_oracle_cross_check():
    g = uniform_random(50, 0.2, seed=7)
    assert exact_girth(g)[0] == exact_girth_bruteforce(g)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_hop_limited_vs_exhaustive(seed):
    g = uniform_random(6, 0.5, seed=seed, directed=True, weighted=True, W=9)
    for h in (0, 1, 2, 4):
        d = hop_limited_distances(g, 0, h)
        for v in range(6):
            assert d[v] == all_paths_min_weight(g, 0, v, h)


def test_hop_limit_converges_to_sssp():
    g = uniform_random(30, 0.15, seed=3, weighted=True, W=9)
    full = hop_limited_distances(g, 2, g.n - 1)
    ref = single_source(g, 2)
    assert full == ref


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_subdivision_preserves_girth(seed):
    g, girth, _ = planted_cycle(16, 9, seed=seed, weighted=True, W=5,
                                cycle_hops=3, extra_edges=3)
    sub = subdivision(g)
    assert not sub.weighted
    assert exact_girth(sub)[0] == exact_girth(g)[0] == girth


def test_subdivision_of_single_directed_edge():
    g = Graph(2, directed=True, weighted=True, edges=[(0, 1, 4)], W=4)
    sub = subdivision(g)
    assert sub.n == 5 and sub.m == 4 and sub.directed
    d = single_source(sub, 0)
    assert d[1] == 4


def test_generators_certify_girth():
    for seed in range(6):
        for kw in ({}, {"directed": True}, {"weighted": True, "W": 9}):
            girth = 5 + seed % 4 if not kw.get("weighted") else 17 + seed
            g, planted, cyc = planted_cycle(50, girth, seed=seed, **kw)
            assert exact_girth(g)[0] == planted
    c10 = cycle_plus_chords(10, 0, seed=1)
    assert exact_girth(c10)[0] == 10
    g44 = grid(4, 4)
    assert exact_girth(g44)[0] == 4


def test_hop_diameter_bounds_on_connected():
    for seed in range(4):
        g = random_sparse(40, 3.0, seed=seed)
        d = hop_diameter(g)
        assert 1 <= d <= g.n - 1
