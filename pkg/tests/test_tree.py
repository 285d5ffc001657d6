from girthlab.graphs import Graph
from girthlab.generators import random_sparse
from girthlab.engine import Simulation
from girthlab.oracle import hop_diameter
from girthlab.tree import broadcast, convergecast, ensure_tree, gather_broadcast


def star(n):
    return Graph(n, edges=[(0, i, 1) for i in range(1, n)])


def test_tree_build_rooted_at_zero():
    g = random_sparse(30, 3.0, seed=2)
    sim = Simulation(g, seed=0)
    t = ensure_tree(sim)
    assert t.parent[0] == 0 and t.depth[0] == 0
    for v in range(1, 30):
        assert t.depth[v] == t.depth[t.parent[v]] + 1
        assert v in t.children[t.parent[v]]
    assert ensure_tree(sim) is t  # built once


def test_convergecast_min_on_triangle():
    g = Graph(3, edges=[(0, 1), (1, 2), (2, 0)])
    sim = Simulation(g, seed=0)
    res = convergecast(sim, [7, 3, 9], "min")
    assert res == [3, 3, 3]


def test_convergecast_count_and_all():
    g = random_sparse(25, 3.0, seed=4)
    sim = Simulation(g, seed=0)
    ones = [1 if v % 3 == 0 else 0 for v in range(25)]
    res = convergecast(sim, ones, "count")
    assert all(r == sum(ones) for r in res)
    res = convergecast(sim, [True] * 25, "all")
    assert res[0] is True
    res = convergecast(sim, [v != 7 for v in range(25)], "all")
    assert res[0] is False


def test_broadcast_on_star_is_fast():
    sim = Simulation(star(12), seed=0)
    before = sim.report.rounds
    got = broadcast(sim, [(42,)], entry_bits=9)
    assert all(g == [(42,)] for g in got)
    assert sim.report.rounds - before <= 2


def test_broadcast_pipelines_within_depth_plus_payload():
    g = random_sparse(40, 3.0, seed=6)
    sim = Simulation(g, seed=0)
    ensure_tree(sim)
    items = [(i,) for i in range(30)]
    before = sim.report.rounds
    got = broadcast(sim, items, entry_bits=sim.cost.id_bits)
    pack = max(1, sim.bandwidth.bits // sim.cost.id_bits)
    chunks = -(-len(items) // pack)
    assert sim.report.rounds - before <= sim.tree.height + chunks + 1
    assert got[17] == items


def test_gather_broadcast_collects_everything():
    g = random_sparse(30, 3.0, seed=8)
    sim = Simulation(g, seed=0)
    items = [[(v, v * v)] if v % 2 == 0 else [] for v in range(30)]
    got = gather_broadcast(sim, items, entry_bits=20)
    want = sorted(x for lst in items for x in lst)
    for v in range(30):
        assert sorted(got[v]) == want


def test_gather_broadcast_empty():
    g = star(5)
    sim = Simulation(g, seed=0)
    got = gather_broadcast(sim, [[] for _ in range(5)], entry_bits=8)
    assert got[0] == [] and got[3] == []


def test_broadcast_round_bound_property():
    # theta(log n)-bit payload broadcast completes within D + O(1)
    for seed in range(3):
        g = random_sparse(60, 3.5, seed=seed)
        sim = Simulation(g, seed=0)
        ensure_tree(sim)
        before = sim.report.rounds
        broadcast(sim, [(1, 2)], entry_bits=2 * sim.cost.id_bits)
        used = sim.report.rounds - before
        assert used <= hop_diameter(g) + 1
