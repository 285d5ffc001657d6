"""Exact distance and girth oracles used as ground truth by tests and the harness.

Everything here is centralized and pure; the distributed algorithms never call
into this module.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

from .graphs import INF, Graph


@dataclass
class CycleWitness:
    nodes: list
    weight: int
    hops: int


def bfs_dist(adj, n, src, parents=None, depth_cap=None):
    """Unit-weight BFS over an adjacency list of (nbr, w) pairs."""
    dist = [INF] * n
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        du = dist[u]
        if depth_cap is not None and du >= depth_cap:
            continue
        for v, _ in adj[u]:
            if dist[v] == INF:
                dist[v] = du + 1
                if parents is not None:
                    parents[v] = u
                q.append(v)
    return dist


def dijkstra(adj, n, src, parents=None, skip_edge=None, cutoff=None):
    """Dijkstra over (nbr, w) adjacency; `skip_edge` drops one (u, v) slot pair."""
    dist = [INF] * n
    dist[src] = 0
    pq = [(0, src)]
    while pq:
        du, u = heapq.heappop(pq)
        if du > dist[u]:
            continue
        if cutoff is not None and du > cutoff:
            break
        for v, w in adj[u]:
            if skip_edge is not None and (u, v) in skip_edge:
                continue
            nd = du + w
            if nd < dist[v]:
                dist[v] = nd
                if parents is not None:
                    parents[v] = u
                heapq.heappush(pq, (nd, v))
    return dist


def single_source(graph: Graph, src, reverse=False):
    """Distances from src respecting direction and weights (to src if reverse)."""
    adj = graph.in_adj if (graph.directed and reverse) else graph.out_adj
    if graph.weighted:
        return dijkstra(adj, graph.n, src)
    return bfs_dist(adj, graph.n, src)


def hop_limited_distances(graph: Graph, src, h, with_parents=False):
    """dist[v] = min weight over paths from src to v with at most h edges."""
    n = graph.n
    dist = [INF] * n
    par = [-1] * n
    dist[src] = 0
    par[src] = src
    frontier = {src}
    adj = graph.out_adj
    for _ in range(h):
        if not frontier:
            break
        nxt = set()
        updates = {}
        for u in frontier:
            du = dist[u]
            for v, w in adj[u]:
                nd = du + w
                if nd < dist[v] and nd < updates.get(v, (INF,))[0]:
                    updates[v] = (nd, u)
        for v, (nd, u) in updates.items():
            if nd < dist[v]:
                dist[v] = nd
                par[v] = u
                nxt.add(v)
        frontier = nxt
    if with_parents:
        return dist, par
    return dist


def hop_diameter(graph: Graph):
    """Max unweighted distance in the underlying undirected graph; INF if disconnected."""
    if graph.n <= 1:
        return 0
    adj = graph.und_adj
    best = 0
    for s in range(graph.n):
        dist = bfs_dist(adj, graph.n, s)
        ecc = max(dist)
        if ecc == INF:
            return INF
        if ecc > best:
            best = ecc
    return best


def is_connected(graph: Graph) -> bool:
    if graph.n == 0:
        return True
    dist = bfs_dist(graph.und_adj, graph.n, 0)
    return all(d != INF for d in dist)


def _trace(parents, v):
    path = [v]
    while parents[path[-1]] != path[-1] and parents[path[-1]] != -1:
        path.append(parents[path[-1]])
    return path


def _cross_cycle(parents, x, y):
    """Cycle through edge {x, y} from the BFS parent forest: join at first common vertex."""
    px = _trace(parents, x)
    sx = {v: i for i, v in enumerate(px)}
    py = _trace(parents, y)
    for j, v in enumerate(py):
        if v in sx:
            return px[: sx[v] + 1] + py[:j][::-1]
    return None


def _girth_undirected_unweighted(graph: Graph):
    n = graph.n
    adj = graph.und_adj
    best, witness = INF, None
    for r in range(n):
        dist = [INF] * n
        par = [-1] * n
        dist[r] = 0
        par[r] = r
        q = deque([r])
        while q:
            u = q.popleft()
            du = dist[u]
            if 2 * du >= best:
                continue
            for v, _ in adj[u]:
                if dist[v] == INF:
                    dist[v] = du + 1
                    par[v] = u
                    q.append(v)
                elif par[u] != v and par[v] != u:
                    cyc = _cross_cycle(par, u, v)
                    if cyc is not None and len(cyc) >= 3 and len(cyc) < best:
                        best = len(cyc)
                        witness = cyc
    return best, witness


def _girth_directed_unweighted(graph: Graph):
    n = graph.n
    adj = graph.out_adj
    ins = graph.in_adj
    best, witness = INF, None
    for r in range(n):
        closing = {u: True for u, _ in ins[r]}
        if not closing:
            continue
        dist = [INF] * n
        par = [-1] * n
        dist[r] = 0
        par[r] = r
        q = deque([r])
        while q:
            u = q.popleft()
            du = dist[u]
            if du + 1 >= best:
                continue
            if u != r and u in closing and du + 1 < best:
                best = du + 1
                witness = _trace(par, u)[::-1]
            for v, _ in adj[u]:
                if dist[v] == INF:
                    dist[v] = du + 1
                    par[v] = u
                    q.append(v)
        # re-scan: closure might exist at nodes popped before a better path arrived
        for u, _ in ins[r]:
            if u != r and dist[u] != INF and dist[u] + 1 < best:
                best = dist[u] + 1
                witness = _trace(par, u)[::-1]
    return best, witness


def _girth_directed_weighted(graph: Graph):
    n = graph.n
    best, witness = INF, None
    win = {}
    for u, v, w in graph.edges:
        win.setdefault(v, []).append((u, w))
    for r in range(n):
        if r not in win:
            continue
        cutoff = None if best == INF else best
        par = [-1] * n
        par[r] = r
        dist = dijkstra(graph.out_adj, n, r, parents=par, cutoff=cutoff)
        for u, w in win[r]:
            if u != r and dist[u] != INF and dist[u] + w < best:
                best = dist[u] + w
                witness = _trace(par, u)[::-1]
    return best, witness


def _girth_undirected_weighted(graph: Graph):
    n = graph.n
    best, witness = INF, None
    for u, v, w in graph.edges:
        cutoff = None if best == INF else best - w
        par = [-1] * n
        par[u] = u
        skip = {(u, v), (v, u)}
        dist = dijkstra(graph.und_adj, n, u, parents=par, skip_edge=skip, cutoff=cutoff)
        if dist[v] != INF and dist[v] + w < best:
            best = dist[v] + w
            witness = _trace(par, v)[::-1]
    return best, witness


def exact_girth(graph: Graph):
    """Exact girth with a verifying CycleWitness, or (INF, None) if acyclic.

    Unweighted graphs use per-root BFS; weighted undirected uses per-edge
    removal Dijkstra; weighted directed uses per-vertex Dijkstra.
    """
    if graph.weighted:
        val, cyc = (_girth_directed_weighted(graph) if graph.directed
                    else _girth_undirected_weighted(graph))
    else:
        val, cyc = (_girth_directed_unweighted(graph) if graph.directed
                    else _girth_undirected_unweighted(graph))
    if cyc is None:
        return INF, None
    from .graphs import validate_cycle

    weight, hops = validate_cycle(graph, cyc)
    assert weight == val, f"witness weight {weight} != girth {val}"
    return val, CycleWitness(cyc, weight, hops)


def exact_girth_bruteforce(graph: Graph):
    """Independent DFS-enumeration girth oracle for small graphs (n <= ~60)."""
    n = graph.n
    adj = graph.out_adj
    best = [INF]

    def dfs(root, u, wsum, on_path):
        for v, w in adj[u]:
            nw = wsum + w
            if nw >= best[0]:
                continue
            if v == root:
                # cycle length = |on_path|; undirected closures at 2 would reuse the edge
                if graph.directed or len(on_path) >= 3:
                    best[0] = nw
                continue
            if v > root and v not in on_path:
                on_path.add(v)
                dfs(root, v, nw, on_path)
                on_path.remove(v)

    for r in range(n):
        dfs(r, r, 0, {r})
    return best[0]


def closest_vertices(graph: Graph, v, count):
    """The `count` closest vertices to v by (undirected hop distance, then ID)."""
    dist = bfs_dist(graph.und_adj, graph.n, v)
    order = sorted((d, u) for u, d in enumerate(dist) if d != INF)
    return [u for _, u in order[:count]]


def k_closest_sources(graph: Graph, sources, k):
    """Per-node k closest sources under (distance, then smaller ID) ordering.

    Returns (tables, dist_by_source): tables[v] is a sorted list of (d, s),
    truncated to min(k, |S|); dist_by_source[s] is the full BFS array.
    """
    n = graph.n
    dist_by_source = {}
    for s in sources:
        dist_by_source[s] = bfs_dist(graph.und_adj, n, s)
    cap = min(k, len(sources))
    tables = []
    for v in range(n):
        pairs = sorted((dist_by_source[s][v], s) for s in sources
                       if dist_by_source[s][v] != INF)
        tables.append(pairs[:cap])
    return tables, dist_by_source


def all_paths_min_weight(graph: Graph, src, dst, max_hops):
    """Exhaustive min weight over simple paths src->dst with <= max_hops edges.

    Exponential; only for tiny fixtures in tests.
    """
    adj = graph.out_adj
    best = [INF]

    def dfs(u, wsum, hops, seen):
        if u == dst:
            if wsum < best[0]:
                best[0] = wsum
            return
        if hops == max_hops:
            return
        for v, w in adj[u]:
            if v not in seen and wsum + w < best[0]:
                seen.add(v)
                dfs(v, wsum + w, hops + 1, seen)
                seen.remove(v)

    dfs(src, 0, 0, {src})
    return best[0]
