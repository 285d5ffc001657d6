import random
from fractions import Fraction

from girthlab.graphs import Graph, INF
from girthlab.generators import planted_cycle, random_sparse, random_tree
from girthlab.engine import Simulation
from girthlab.oracle import dijkstra, exact_girth, hop_limited_distances
from girthlab.primitives import scaled_wadj
from girthlab.weighted import (WeightedSchedule, approx_girth_weighted,
                               bounded_girth_2approx, dis_approx, scale_weights)


def test_scale_weights_formula_examples():
    g1 = Graph(2, weighted=True, edges=[(0, 1, 5)], W=5)
    assert scale_weights(g1, 4, 1, 2).edges[0][2] == 10
    g2 = Graph(2, weighted=True, edges=[(0, 1, 1)], W=1)
    assert scale_weights(g2, 1, 2, 1).edges[0][2] == 1


def test_scaled_cycle_weight_lower_bound():
    # ceil monotonicity: w_{G_i}(C) >= (2h/eps2^i) * w(C) for any edge set
    rng = random.Random(0)
    h, eps = 9, Fraction(1, 2)
    for i in (1, 3, 5):
        weights = [rng.randint(1, 30) for _ in range(8)]
        scaled = scale_weights(
            Graph(9, weighted=True,
                  edges=[(j, j + 1, w) for j, w in enumerate(weights)], W=30),
            h, eps, i)
        lhs = sum(w for _, _, w in scaled.edges)
        rhs = 2 * h * sum(weights) / float(eps * (1 << i))
        assert lhs >= rhs - 1e-9


def test_scaling_sandwich_on_planted_cycles():
    # bracketed scale keeps the cycle under (2/eps + 1) * h
    for seed in range(5):
        g, gw, cyc = planted_cycle(60, 40 + seed * 7, seed=seed, weighted=True,
                                   W=16, cycle_hops=6)
        sched = WeightedSchedule.paper(60, 16, 2, 0.25)
        assert len(cyc) < sched.h or sched.h <= 6
        i = max(1, (gw).bit_length())  # 2^(i-1) <= gw < 2^i
        if (1 << (i - 1)) > gw:
            i -= 1
        wadj = scaled_wadj(g, sched.h, sched.eps, i)
        scaled_cycle = sum(wadj[cyc[j]][cyc[(j + 1) % len(cyc)]]
                           for j in range(len(cyc)))
        assert scaled_cycle <= (2 / 0.25 + 1) * sched.h


def test_bounded_girth_2approx_contracts():
    # unit-weight C8 at full depth: M in [8, 16]
    c8 = Graph(8, weighted=True, edges=[(i, (i + 1) % 8, 1) for i in range(8)], W=1)
    sim = Simulation(c8, seed=0)
    sched = WeightedSchedule.paper(8, 1, 2, 0.5)
    wadj = [{u: w for u, w in adj} for adj in c8.und_adj]
    m = bounded_girth_2approx(sim, wadj, 40, sched)
    assert 8 <= m <= 16
    # heavy triangle with cap below the girth: only the lower bound holds
    tri = Graph(3, weighted=True, edges=[(0, 1, 5), (1, 2, 5), (2, 0, 5)], W=5)
    sim = Simulation(tri, seed=0)
    wadj = [{u: w for u, w in adj} for adj in tri.und_adj]
    m = bounded_girth_2approx(sim, wadj, 7, WeightedSchedule.paper(3, 5, 2, 0.5))
    assert m >= 15 or m == INF


def test_dis_approx_all_sources_k1():
    g = random_sparse(30, 3.0, seed=3, weighted=True, W=9)
    sim = Simulation(g, seed=1)
    S = list(range(30))
    d_out, parents = dis_approx(sim, S, h=30, k=1, eps=0.5)
    for s in (0, 7, 29):
        ref = dijkstra(g.und_adj, 30, s)
        assert d_out[s][s] == 0
        for v in range(30):
            assert d_out[v][s] >= ref[v] - 1e-9
            assert d_out[v][s] <= 1.5 * ref[v] + 1e-9


def canonical_windows_hit(graph, sources, h):
    """Central check: every full middle h-vertex block of every canonical
    shortest path from a source contains a source (the partition event the
    long-branch quality bound conditions on)."""
    sset = set(sources)
    n = graph.n
    for s in sources:
        par = [-1] * n
        par[s] = s
        dist = dijkstra(graph.und_adj, n, s, parents=par)
        for v in range(n):
            if dist[v] == INF or v == s:
                continue
            path = [v]
            while path[-1] != s:
                path.append(par[path[-1]])
            path.reverse()
            blocks = len(path) // h
            for b in range(1, blocks):
                if not any(u in sset for u in path[b * h:(b + 1) * h]):
                    return False
    return True


def test_dis_approx_sampled_quality_conditional():
    checked = 0
    for seed in range(4):
        g = random_sparse(120, 3.0, seed=seed, weighted=True, W=20)
        rng = random.Random(seed)
        S = sorted(v for v in range(120) if rng.random() < 0.35)
        sim = Simulation(g, seed=seed)
        d_out, parents = dis_approx(sim, S, h=8, k=2, eps=0.25)
        for s in S[:5]:
            ref = dijkstra(g.und_adj, 120, s)
            for v in range(120):
                assert d_out[v].get(s, INF) >= ref[v] - 1e-9
        if canonical_windows_hit(g, S, 8):
            checked += 1
            for s in S[:5]:
                ref = dijkstra(g.und_adj, 120, s)
                for v in range(120):
                    if ref[v] != INF:
                        assert d_out[v][s] <= 3 * 1.25 * ref[v] + 1e-9
    assert checked >= 2


def test_unit_weights_behave_like_unweighted():
    for seed in range(4):
        g, girth, _ = planted_cycle(60, 6 + seed, seed=seed)
        gw = Graph(60, weighted=True, edges=g.edges, W=1)
        M, _ = approx_girth_weighted(gw, k=2, eps=0.5, seed=seed)
        assert girth <= M <= 3 * 1.5 * girth


def test_short_branch_bound_on_light_cycles():
    for seed in range(4):
        g, gw, _ = planted_cycle(80, 24 + seed, seed=seed, weighted=True, W=12,
                                 cycle_hops=5)
        col = {}
        M, _ = approx_girth_weighted(g, k=2, eps=0.25, seed=seed, collect=col)
        assert gw <= M
        assert col["m_short"] <= 2 * 1.25 * gw + 1e-9


def test_weighted_tree_stays_infinite():
    # regression: composite estimate paths must never certify a cycle
    for seed in range(6):
        t = random_tree(40, seed=seed)
        tw = Graph(40, weighted=True,
                   edges=[(u, v, (u * 13 + v + seed) % 50 + 1) for u, v, _ in t.edges],
                   W=50)
        M, _ = approx_girth_weighted(tw, k=2, eps=0.25, seed=seed)
        assert M == INF


def test_weighted_safety_fuzz():
    rng = random.Random(1)
    for trial in range(12):
        n = rng.randint(10, 36)
        g = random_sparse(n, rng.uniform(2.2, 3.6), seed=trial, weighted=True,
                          W=rng.choice([4, 16, 60]))
        girth, _ = exact_girth(g)
        k = rng.choice([2, 3])
        eps = rng.choice([0.25, 0.5, 1.0])
        M, _ = approx_girth_weighted(g, k=k, eps=eps, seed=trial)
        if girth == INF:
            assert M == INF
        else:
            assert M >= girth - 1e-9


def test_heavy_cycle_quality():
    # hops in [h, 3h]: covered by the chain rule at (1+eps)
    for seed in range(3):
        n = 100
        sched = WeightedSchedule.paper(n, 4, 2, 0.25)
        hops = sched.h + 3 * seed
        g, gw, _ = planted_cycle(n, 2 * hops, seed=seed, weighted=True, W=4,
                                 cycle_hops=hops)
        M, _ = approx_girth_weighted(g, k=2, eps=0.25, seed=seed)
        assert gw <= M <= 3 * 1.25 * gw + 1e-9
