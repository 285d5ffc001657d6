"""Deterministic seeded graph generators, including planted-girth families.

The planted-cycle generator certifies the girth of its output: every edge
added after the base cycle is rejected unless every cycle it closes is at
least as heavy as the planted one, so the planted value *is* the girth.
"""
from __future__ import annotations

import random

from .graphs import INF, Graph, GraphError
from .oracle import bfs_dist, dijkstra


def _rng(seed):
    return random.Random(f"gen|{seed}")


def uniform_random(n, p, seed, directed=False, weighted=False, W=1):
    rng = _rng(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if directed:
                if rng.random() < p:
                    edges.append((u, v, rng.randint(1, W) if weighted else 1))
                if rng.random() < p:
                    edges.append((v, u, rng.randint(1, W) if weighted else 1))
            elif rng.random() < p:
                edges.append((u, v, rng.randint(1, W) if weighted else 1))
    return Graph(n, directed=directed, weighted=weighted, edges=edges, W=W)


def random_sparse(n, avg_deg, seed, directed=False, weighted=False, W=1, connect=True):
    """Sparse random graph with ~avg_deg*n/2 edges; optionally force connectivity.

    With constant avg_deg >= 3 the hop-diameter is O(log n) in practice, which
    is what the round-growth experiments need.
    """
    rng = _rng(seed)
    target = max(n - 1, int(avg_deg * n / 2))
    seen = set()
    edges = []

    def add(u, v):
        key = (u, v) if directed else (min(u, v), max(u, v))
        if u == v or key in seen:
            return False
        seen.add(key)
        edges.append((u, v, rng.randint(1, W) if weighted else 1))
        return True

    if connect:
        order = list(range(n))
        rng.shuffle(order)
        for i in range(1, n):
            add(order[rng.randrange(i)], order[i])
    guard = 0
    while len(edges) < target and guard < 50 * target:
        guard += 1
        add(rng.randrange(n), rng.randrange(n))
    return Graph(n, directed=directed, weighted=weighted, edges=edges, W=W)


def cycle_plus_chords(n, chords, seed, directed=False):
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    rng = _rng(seed)
    edges = [(i, (i + 1) % n, 1) for i in range(n)]
    seen = {(min(u, v), max(u, v)) for u, v, _ in edges}
    added, guard = 0, 0
    while added < chords and guard < 100 * (chords + 1):
        guard += 1
        u, v = rng.randrange(n), rng.randrange(n)
        key = (min(u, v), max(u, v))
        if u != v and key not in seen:
            seen.add(key)
            edges.append((u, v, 1))
            added += 1
    return Graph(n, directed=directed, weighted=False, edges=edges, W=1)


def grid(rows, cols):
    n = rows * cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, 1))
            if r + 1 < rows:
                edges.append((v, v + cols, 1))
    return Graph(n, edges=edges)


def random_dag(n, p, seed, weighted=False, W=1, connect=True):
    rng = _rng(seed)
    seen = set()
    edges = []
    if connect:
        # a low-to-high spine keeps acyclicity and underlying connectivity
        for v in range(1, n):
            u = rng.randrange(v)
            seen.add((u, v))
            edges.append((u, v, rng.randint(1, W) if weighted else 1))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in seen and rng.random() < p:
                edges.append((u, v, rng.randint(1, W) if weighted else 1))
    return Graph(n, directed=True, weighted=weighted, edges=edges, W=W)


def random_tree(n, seed):
    rng = _rng(seed)
    edges = [(rng.randrange(i), i, 1) for i in range(1, n)]
    return Graph(n, edges=edges)


def _dist_in_partial(n, adj, src, dst, weighted, bound):
    """Shortest src->dst distance in the partial adjacency, cut off at bound."""
    if weighted:
        dist = dijkstra(adj, n, src, cutoff=bound)
    else:
        dist = bfs_dist(adj, n, src)
    return dist[dst]


def planted_cycle(n, girth, seed, directed=False, weighted=False, W=1,
                  cycle_hops=None, extra_edges=None):
    """Random connected graph whose exact girth equals `girth` by construction.

    For weighted graphs `girth` is the planted cycle's total weight and
    `cycle_hops` its edge count (default: random in a sensible range).
    Returns (graph, girth, cycle_nodes).
    """
    rng = _rng(seed)
    if weighted:
        hops = cycle_hops or rng.randint(3, max(3, min(n, girth, 12)))
        if hops < (2 if directed else 3):
            raise GraphError(f"cycle_hops={hops} too small")
        if hops > n or girth < hops:
            raise GraphError(f"cannot plant weight {girth} on {hops} hops with n={n}")
        cuts = sorted(rng.sample(range(1, girth), hops - 1)) if hops > 1 else []
        weights = [b - a for a, b in zip([0] + cuts, cuts + [girth])]
        if max(weights) > W:
            # rebalance oversized parts by even split
            weights = [girth // hops + (1 if i < girth % hops else 0) for i in range(hops)]
            if max(weights) > W:
                raise GraphError(f"planted weight {girth} needs weights > W={W}")
    else:
        hops = girth
        if hops > n or hops < (2 if directed else 3):
            raise GraphError(f"cannot plant girth {girth} with n={n}")
        weights = [1] * hops

    perm = list(range(n))
    rng.shuffle(perm)
    cyc = perm[:hops]
    edges = []
    seen = set()
    adj = [[] for _ in range(n)]

    def add(u, v, w):
        key = (u, v) if directed else (min(u, v), max(u, v))
        seen.add(key)
        edges.append((u, v, w))
        adj[u].append((v, w))
        if not directed:
            adj[v].append((u, w))

    for i in range(hops):
        add(cyc[i], cyc[(i + 1) % hops], weights[i])

    # attach the remaining vertices as a tree: no new cycles
    for idx in range(hops, n):
        anchor = perm[rng.randrange(idx)]
        v = perm[idx]
        w = rng.randint(1, W) if weighted else 1
        if directed and rng.random() < 0.5:
            add(v, anchor, w)
        else:
            add(anchor, v, w)

    if extra_edges is None:
        extra_edges = max(0, int(0.25 * n))
    added, attempts = 0, 0
    while added < extra_edges and attempts < 60 * (extra_edges + 1):
        attempts += 1
        u, v = rng.randrange(n), rng.randrange(n)
        key = (u, v) if directed else (min(u, v), max(u, v))
        if u == v or key in seen:
            continue
        w = rng.randint(1, W) if weighted else 1
        # a new edge (u,v) closes cycles of weight d(v,u)+w; keep them >= girth
        back = _dist_in_partial(n, adj, v, u, weighted, girth)
        if back != INF and back + w < girth:
            continue
        if not directed:
            fwd = _dist_in_partial(n, adj, u, v, weighted, girth)
            if fwd != INF and fwd + w < girth:
                continue
        add(u, v, w)
        added += 1
    graph = Graph(n, directed=directed, weighted=weighted, edges=edges, W=W)
    return graph, girth, cyc


def subdivision(graph: Graph) -> Graph:
    """Replace every weight-w edge by a path of w unit edges (directed stays directed)."""
    edges = []
    nxt = graph.n
    for u, v, w in graph.edges:
        if w == 1:
            edges.append((u, v, 1))
            continue
        prev = u
        for _ in range(w - 1):
            edges.append((prev, nxt, 1))
            prev = nxt
            nxt += 1
        edges.append((prev, v, 1))
    return Graph(nxt, directed=graph.directed, weighted=False, edges=edges, W=1)


GENERATORS = {
    "uniform": lambda seed, **kw: (uniform_random(seed=seed, **kw), {}),
    "sparse": lambda seed, **kw: (random_sparse(seed=seed, **kw), {}),
    "cycle-chords": lambda seed, **kw: (cycle_plus_chords(seed=seed, **kw), {}),
    "grid": lambda seed, **kw: (grid(**kw), {}),
    "dag": lambda seed, **kw: (random_dag(seed=seed, **kw), {}),
    "tree": lambda seed, **kw: (random_tree(seed=seed, **kw), {}),
}


def generate(kind, seed=0, **params):
    """Dispatch by kind; returns (graph, meta). Planted kinds set meta['girth']."""
    if kind == "planted":
        graph, g, cyc = planted_cycle(seed=seed, **params)
        return graph, {"girth": g, "cycle": cyc}
    if kind in GENERATORS:
        return GENERATORS[kind](seed, **params)
    raise GraphError(f"unknown generator kind {kind!r}")
