"""Set-Disjointness lower-bound instances: extremal bipartite hosts, layered
pipes, input-dependent edges, and a one-way shortcut tree that forces small
undirected diameter without touching any directed cycle. The verifier
certifies the girth gaps with the exact oracle.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import INF, Graph, GraphError, write_graph, read_graph
from .oracle import bfs_dist, exact_girth, hop_diameter


class UnsupportedParameters(ValueError):
    pass


class GapViolation(AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class HostBipartite:
    a: int
    k: int
    edges: list      # (l, r) with l, r in 0..a-1, fixed lexicographic order
    m: int = field(init=False)

    def __post_init__(self):
        self.m = len(self.edges)

    def incidence_graph(self) -> Graph:
        return Graph(2 * self.a, edges=[(l, self.a + r, 1) for l, r in self.edges])


def _projective_plane_edges(p):
    """Point-line incidences of PG(2, p) for prime p; a = p^2 + p + 1."""
    pts = []
    for x in range(p):
        for y in range(p):
            pts.append((1, x, y))
    for y in range(p):
        pts.append((0, 1, y))
    pts.append((0, 0, 1))
    idx = {pt: i for i, pt in enumerate(pts)}
    edges = []
    for li, line in enumerate(pts):
        for pi, pt in enumerate(pts):
            if sum(a * b for a, b in zip(line, pt)) % p == 0:
                edges.append((pi, li))
    return sorted(edges)


def _is_prime(p):
    if p < 2:
        return False
    for d in range(2, int(p ** 0.5) + 1):
        if p % d == 0:
            return False
    return True


def _bipartite_girth_ok(a, edges, min_girth):
    g = Graph(2 * a, edges=[(l, a + r, 1) for l, r in edges])
    val, _ = exact_girth(g)
    return val >= min_girth


def _greedy_host(a, k, budget=40, seed=0):
    """Randomized greedy maximal C_{<2k}-free bipartite graph on a+a vertices."""
    best = []
    for attempt in range(budget):
        rng = random.Random(f"host|{seed}|{attempt}")
        cand = [(l, r) for l in range(a) for r in range(a)]
        rng.shuffle(cand)
        adj = [[] for _ in range(2 * a)]
        edges = []
        for l, r in cand:
            u, v = l, a + r
            # the new edge closes cycles of length d(u,v) + 1
            dist = bfs_dist(adj, 2 * a, u)
            if dist[v] != INF and dist[v] + 1 < 2 * k:
                continue
            adj[u].append((v, 1))
            adj[v].append((u, 1))
            edges.append((l, r))
        if len(edges) > len(best):
            best = edges
    return sorted(best)


def host_bipartite(a, k=3, seed=0) -> HostBipartite:
    """Extremal-style bipartite host with girth >= 2k and |L| = |R| = a.

    k=3 is constructive: C6 at a=3 and projective-plane incidence graphs at
    a = p^2 + p + 1 for prime p. Everything else falls back to a randomized
    greedy search (a <= 60), always oracle-certified.
    """
    if a < 2:
        raise UnsupportedParameters(f"a={a} too small")
    edges = None
    if k == 3:
        if a == 3:
            edges = sorted([(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)])
        else:
            # a = p^2 + p + 1 for prime p
            p = int(round((math.sqrt(4 * a - 3) - 1) / 2))
            if p >= 2 and p * p + p + 1 == a and _is_prime(p):
                edges = _projective_plane_edges(p)
    if edges is None:
        if a > 60:
            raise UnsupportedParameters(
                f"no construction for a={a}, k={k}; search capped at a=60")
        edges = _greedy_host(a, k, seed=seed)
    host = HostBipartite(a, k, edges)
    if not _bipartite_girth_ok(a, edges, 2 * k):
        raise UnsupportedParameters(f"host search produced girth < {2 * k}")
    return host


@dataclass
class LowerBoundInstance:
    host: HostBipartite
    q: int
    e_a: list
    e_b: list
    mode: str
    eps: Fraction
    graph: Graph
    tree_first: int
    leaf_of_layer: list

    @property
    def intersecting(self):
        return any(a and b for a, b in zip(self.e_a, self.e_b))

    def expected(self):
        """Certified gap plus the two bookkeeping formulas for weighted mode."""
        q, k = self.q, self.host.k
        out = {"mode": self.mode, "intersecting": self.intersecting}
        if self.mode == "directed-unweighted":
            if self.intersecting:
                out["girth"] = 2 * q
            else:
                out["girth_at_least"] = 2 * k * q
        else:
            unit = int(q / self.eps)
            if self.intersecting:
                out["girth"] = 2 * (q - 1) + 2 * unit
                out["formula_paper"] = float(Fraction(2 * q) / self.eps * (1 + self.eps))
                out["formula_pipes_exact"] = 2 * (q - 1) + 2 * unit
            else:
                out["girth_at_least"] = 6 * unit
        return out


def build_instance(host: HostBipartite, q, e_a, e_b, mode="directed-unweighted",
                   eps=1) -> LowerBoundInstance:
    """Assemble the layered instance.

    Layer i holds copies R_i then L_i; R-pipes run r_1 -> ... -> r_q and
    L-pipes run l_q -> ... -> l_1, so every side switch costs a full pipe and
    the two-pipe cycle has exactly 2q edges. A balanced binary shortcut tree
    (edges toward the leaves, one in-edge from every layer vertex) keeps the
    undirected diameter logarithmic while staying out of every directed cycle.
    """
    a, m = host.a, host.m
    if len(e_a) != m or len(e_b) != m:
        raise GraphError(f"input vectors must have length m={m}")
    if q < 1:
        raise GraphError("q must be >= 1")
    eps = Fraction(eps)
    weighted = mode == "undirected-weighted"
    if mode not in ("directed-unweighted", "undirected-weighted"):
        raise GraphError(f"unknown mode {mode!r}")
    if weighted and (q * eps.denominator) % eps.numerator != 0:
        raise GraphError(f"q/eps = {q}/{eps} must be an integer")
    unit = int(q * eps.denominator // eps.numerator) if weighted else 1
    w_pipe = 1
    w_input = unit if weighted else 1
    w_tree = 6 * unit if weighted else 1

    def rid(x, i):
        return (i - 1) * 2 * a + x

    def lid(x, i):
        return (i - 1) * 2 * a + a + x

    edges = []
    for x in range(a):
        for i in range(1, q):
            edges.append((rid(x, i), rid(x, i + 1), w_pipe))
            edges.append((lid(x, i + 1), lid(x, i), w_pipe))
    for j, (l, r) in enumerate(host.edges):
        if e_a[j]:
            edges.append((lid(l, 1), rid(r, 1), w_input))
        if e_b[j]:
            edges.append((rid(r, q), lid(l, q), w_input))

    # balanced shortcut tree over q leaves, edges oriented toward the leaves
    tree_first = 2 * a * q
    nxt = [tree_first]
    tree_edges = []

    def build(lo, hi):
        node = nxt[0]
        nxt[0] += 1
        if hi - lo == 1:
            return node, {lo: node}
        mid = (lo + hi) // 2
        left, lmap = build(lo, mid)
        right, rmap = build(mid, hi)
        tree_edges.append((node, left, w_tree))
        tree_edges.append((node, right, w_tree))
        lmap.update(rmap)
        return node, lmap

    _, leafmap = build(1, q + 1)
    leaf_of_layer = [leafmap[i] for i in range(1, q + 1)]
    edges.extend(tree_edges)
    for i in range(1, q + 1):
        t = leafmap[i]
        for x in range(a):
            edges.append((rid(x, i), t, w_tree))
            edges.append((lid(x, i), t, w_tree))

    n = nxt[0]
    graph = Graph(n, directed=not weighted, weighted=weighted, edges=edges,
                  W=max(w_pipe, w_input, w_tree))
    graph.validate()
    return LowerBoundInstance(host, q, list(e_a), list(e_b), mode, eps, graph,
                              tree_first, leaf_of_layer)


def input_vectors(host: HostBipartite, pattern, seed=0):
    """shared-single | disjoint-full | empty | random:<seed>."""
    m = host.m
    if pattern == "shared-single":
        e = [0] * m
        e[0] = 1
        return e, list(e)
    if pattern == "disjoint-full":
        e_a = [1 if j % 2 == 0 else 0 for j in range(m)]
        e_b = [0 if j % 2 == 0 else 1 for j in range(m)]
        return e_a, e_b
    if pattern == "empty":
        return [0] * m, [0] * m
    if pattern.startswith("random"):
        _, _, s = pattern.partition(":")
        rng = random.Random(f"lbinput|{s or seed}")
        return ([rng.randint(0, 1) for _ in range(m)],
                [rng.randint(0, 1) for _ in range(m)])
    raise GraphError(f"unknown input pattern {pattern!r}")


def _strip_tree(inst: LowerBoundInstance) -> Graph:
    n = inst.tree_first
    g = inst.graph
    edges = [(u, v, w) for u, v, w in g.edges if u < n and v < n]
    return Graph(n, directed=g.directed, weighted=g.weighted, edges=edges, W=g.W)


def project_to_host(inst: LowerBoundInstance, cycle_nodes):
    """Contract pipes: the input-dependent edges used by a cycle, as host edges."""
    a, q = inst.host.a, inst.q
    used = []
    L = len(cycle_nodes)
    for i in range(L):
        u, v = cycle_nodes[i], cycle_nodes[(i + 1) % L]
        if u >= inst.tree_first or v >= inst.tree_first:
            continue
        lu, xu = divmod(u, 2 * a)
        lv, xv = divmod(v, 2 * a)
        if lu == lv and ((xu >= a) != (xv >= a)):
            if xu >= a:
                used.append((xu - a, xv))
            else:
                used.append((xv - a, xu))
    return used


def verify_gap(inst: LowerBoundInstance, oracle_budget=5000):
    """Certify the construction against the exact oracle.

    Raises GapViolation with the witness cycle on any mismatch; returns a
    report dict otherwise.
    """
    g = inst.graph
    if g.n > oracle_budget:
        raise UnsupportedParameters(f"n={g.n} exceeds oracle budget")
    girth, witness = exact_girth(g)
    exp = inst.expected()
    report = {"n": g.n, "m": g.m, "girth": girth, **exp}

    if "girth" in exp:
        if girth != exp["girth"]:
            raise GapViolation(f"girth {girth} != expected {exp['girth']}",
                               witness)
    else:
        if girth < exp["girth_at_least"]:
            raise GapViolation(
                f"girth {girth} below bound {exp['girth_at_least']}", witness)

    stripped, _ = exact_girth(_strip_tree(inst))
    if stripped != girth:
        raise GapViolation(f"shortcut tree changes girth: {girth} vs {stripped}",
                           witness)
    if witness is not None and any(v >= inst.tree_first for v in witness.nodes):
        raise GapViolation("witness cycle passes through the shortcut tree",
                           witness)

    d = hop_diameter(g)
    bound = 4 * math.ceil(math.log2(max(2, g.n))) + 4
    report["hop_diameter"] = d
    report["hop_diameter_bound"] = bound
    if d > bound:
        raise GapViolation(f"hop diameter {d} > {bound}")

    if witness is not None and not inst.intersecting:
        used = project_to_host(inst, witness.nodes)
        report["witness_host_edges"] = len(used)
        if len(used) < 2 * inst.host.k:
            raise GapViolation(
                f"witness projects to {len(used)} host edges < {2 * inst.host.k}",
                witness)
    return report


def suggest_parameters(n_target, k=3):
    """Analysis-style (a, q) suggestion for a target instance size."""
    a = max(2, round(n_target ** ((k - 1) / (2 * k - 1))))
    q = max(1, round(n_target / (2 * a)))
    return a, q


def save_instance(inst: LowerBoundInstance, path_prefix):
    write_graph(inst.graph, f"{path_prefix}.graph")
    meta = {
        "a": inst.host.a,
        "k": inst.host.k,
        "m": inst.host.m,
        "host_edges": inst.host.edges,
        "q": inst.q,
        "mode": inst.mode,
        "eps": str(inst.eps),
        "e_a": inst.e_a,
        "e_b": inst.e_b,
        "tree_first": inst.tree_first,
        "expected": inst.expected(),
    }
    with open(f"{path_prefix}.json", "w") as f:
        json.dump(meta, f, indent=1)
    return f"{path_prefix}.graph", f"{path_prefix}.json"


def load_instance(path_prefix) -> LowerBoundInstance:
    with open(f"{path_prefix}.json") as f:
        meta = json.load(f)
    host = HostBipartite(meta["a"], meta["k"],
                         [tuple(e) for e in meta["host_edges"]])
    return build_instance(host, meta["q"], meta["e_a"], meta["e_b"],
                          meta["mode"], Fraction(meta["eps"]))
