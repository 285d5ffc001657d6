"""Graph representation, validation, and the plain-text graph format."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

INF = math.inf


class GraphError(ValueError):
    pass


class GraphFormatError(GraphError):
    """Malformed graph file; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class Graph:
    """A simple graph with nodes 0..n-1, optionally directed and/or weighted.

    Edges are (u, v, w) triples; for undirected graphs the pair {u, v} is
    unordered and stored once. Weights are positive integers bounded by W.
    """

    n: int
    directed: bool = False
    weighted: bool = False
    edges: list = field(default_factory=list)
    W: int = 1

    def __post_init__(self):
        self.edges = [(e[0], e[1], e[2] if len(e) > 2 else 1) for e in self.edges]
        self._out = None
        self._in = None
        self._und = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def validate(self, weight_cap_c: float = 4.0, weight_cap_k: float = 3.0):
        """Check simplicity, ID range, and the weight bound W <= c * n**k."""
        seen = set()
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) out of node range 0..{self.n - 1}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge ({u},{v})")
            seen.add(key)
            if not isinstance(w, int) or not (1 <= w <= self.W):
                raise GraphError(f"edge ({u},{v}) weight {w} outside 1..{self.W}")
            if not self.weighted and w != 1:
                raise GraphError(f"unweighted graph has edge weight {w}")
        if self.n >= 2 and self.W > weight_cap_c * self.n ** weight_cap_k:
            raise GraphError(f"W={self.W} exceeds {weight_cap_c}*n^{weight_cap_k}")
        return self

    def _build_adj(self):
        out = [[] for _ in range(self.n)]
        inn = [[] for _ in range(self.n)]
        und = [dict() for _ in range(self.n)]
        for u, v, w in self.edges:
            out[u].append((v, w))
            inn[v].append((u, w))
            if not self.directed:
                out[v].append((u, w))
                inn[u].append((v, w))
            # underlying undirected link; keep the lightest parallel weight
            if v not in und[u] or w < und[u][v]:
                und[u][v] = w
                und[v][u] = w
        self._out = [sorted(a) for a in out]
        self._in = [sorted(a) for a in inn]
        self._und = [sorted(d.items()) for d in und]

    @property
    def out_adj(self):
        """out_adj[v] = sorted list of (neighbor, weight) along edge direction."""
        if self._out is None:
            self._build_adj()
        return self._out

    @property
    def in_adj(self):
        if self._in is None:
            self._build_adj()
        return self._in

    @property
    def und_adj(self):
        """Underlying undirected adjacency (communication topology)."""
        if self._und is None:
            self._build_adj()
        return self._und

    def und_neighbors(self, v):
        return [u for u, _ in self.und_adj[v]]

    def max_weight(self) -> int:
        return max((w for _, _, w in self.edges), default=1)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m} {int(self.directed)} {int(self.weighted)}"]
        for u, v, w in self.edges:
            lines.append(f"{u} {v} {w}" if self.weighted else f"{u} {v}")
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the text format: header "n m directed weighted", then edge lines."""
    lines = text.splitlines()
    if not lines:
        raise GraphFormatError(1, "empty input")
    head = lines[0].split()
    if len(head) != 4:
        raise GraphFormatError(1, "header must be 'n m directed weighted'")
    try:
        n, m, directed, weighted = (int(x) for x in head)
    except ValueError:
        raise GraphFormatError(1, "non-integer header field") from None
    if n < 0 or m < 0 or directed not in (0, 1) or weighted not in (0, 1):
        raise GraphFormatError(1, "bad header values")
    edges = []
    want = 3 if weighted else 2
    lineno = 1
    for raw in lines[1:]:
        lineno += 1
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != want:
            raise GraphFormatError(lineno, f"expected {want} fields, got {len(parts)}")
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise GraphFormatError(lineno, "non-integer field") from None
        u, v = nums[0], nums[1]
        w = nums[2] if weighted else 1
        if w < 1:
            raise GraphFormatError(lineno, f"non-positive weight {w}")
        edges.append((u, v, w))
    if len(edges) != m:
        raise GraphFormatError(lineno, f"header says {m} edges, found {len(edges)}")
    W = max((w for _, _, w in edges), default=1)
    g = Graph(n, directed=bool(directed), weighted=bool(weighted), edges=edges, W=W)
    try:
        g.validate()
    except GraphError as e:
        raise GraphFormatError(lineno, str(e)) from None
    return g


def read_graph(path) -> Graph:
    with open(path) as f:
        return parse_graph(f.read())


def write_graph(graph: Graph, path):
    with open(path, "w") as f:
        f.write(graph.to_text())


def validate_cycle(graph: Graph, nodes) -> tuple:
    """Check that `nodes` is a simple cycle of the graph; return (weight, hops).

    Respects edge direction on directed graphs. Raises GraphError otherwise.
    """
    L = len(nodes)
    if L < 2 or (not graph.directed and L < 3):
        raise GraphError(f"cycle too short: {nodes}")
    if len(set(nodes)) != L:
        raise GraphError(f"repeated vertex in cycle: {nodes}")
    lookup = {}
    for u, v, w in graph.edges:
        lookup[(u, v)] = min(w, lookup.get((u, v), w))
        if not graph.directed:
            lookup[(v, u)] = min(w, lookup.get((v, u), w))
    total = 0
    for i in range(L):
        u, v = nodes[i], nodes[(i + 1) % L]
        if (u, v) not in lookup:
            raise GraphError(f"missing edge ({u},{v}) in claimed cycle")
        total += lookup[(u, v)]
    return total, L
