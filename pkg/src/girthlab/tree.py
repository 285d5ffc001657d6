"""Global BFS-tree operations: build, broadcast, convergecast, gather.

The tree is built once per simulation (root = node 0, the minimum ID) and
reused; its construction rounds are charged to the phase that first needs it.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graphs import INF


@dataclass
class Tree:
    parent: list
    children: list
    depth: list
    height: int


class TreeBuildProgram:
    def __init__(self, sim):
        self.sim = sim
        n = sim.n
        self.parent = [-1] * n
        self.depth = [INF] * n
        self.children = [[] for _ in range(n)]

    def init(self):
        self.parent[0] = 0
        self.depth[0] = 0
        bits = self.sim.cost.counter_bits
        for u in self.sim.nbrs[0]:
            self.sim.emit(0, u, 0, bits)

    def step(self, rnd, inbox):
        sim = self.sim
        bits = sim.cost.counter_bits
        for v, msgs in inbox.items():
            if self.parent[v] != -1:
                continue
            src, d = min((u, d) for u, d in msgs)
            self.parent[v] = src
            self.depth[v] = d + 1
            self.children[src].append(v)
            for u in sim.nbrs[v]:
                if u != src:
                    sim.emit(v, u, d + 1, bits)

    def next_wake(self, rnd):
        return None


def ensure_tree(sim) -> Tree:
    if sim.tree is None:
        prog = sim.run(TreeBuildProgram(sim), phase="tree")
        # children were appended at the parent's slot during the child's step;
        # that is bookkeeping for the driver, the child also notifies in-band
        height = max((d for d in prog.depth if d != INF), default=0)
        sim.tree = Tree(prog.parent, prog.children, prog.depth, height)
        sim.diameter_est = 2 * max(1, height)
    return sim.tree


class BroadcastProgram:
    """Pipelined streaming of a list of items from the root to every node."""

    def __init__(self, sim, items, entry_bits, pack=None):
        self.sim = sim
        self.tree = ensure_tree(sim)
        if pack is None:
            pack = max(1, sim.bandwidth.bits // max(1, entry_bits))
        self.chunks = [tuple(items[i:i + pack]) for i in range(0, len(items), pack)] or []
        self.entry_bits = entry_bits
        self.received = [[] for _ in range(sim.n)]
        self.received[0] = list(items)

    def init(self):
        emit = self.sim.emit
        for i, ch in enumerate(self.chunks):
            bits = len(ch) * self.entry_bits
            for c in self.tree.children[0]:
                emit(0, c, ch, bits, delay=i + 1)

    def step(self, rnd, inbox):
        emit = self.sim.emit
        for v, msgs in inbox.items():
            kids = self.tree.children[v]
            rec = self.received[v]
            for _, ch in msgs:
                rec.extend(ch)
                bits = len(ch) * self.entry_bits
                for c in kids:
                    emit(v, c, ch, bits)

    def next_wake(self, rnd):
        return None


class ConvergecastProgram:
    """Aggregate per-node values at the root, then broadcast the result down.

    op is one of min, sum, count, all; `min` may carry (value, id) pairs for
    argmin so witnesses survive aggregation.
    """

    OPS = {
        "min": min,
        "sum": lambda a, b: a + b,
        "count": lambda a, b: a + b,
        "all": lambda a, b: a and b,
    }

    def __init__(self, sim, values, op, entry_bits, broadcast_result=True):
        self.sim = sim
        self.tree = ensure_tree(sim)
        self.op = self.OPS[op]
        self.agg = list(values)
        self.need = [len(c) for c in self.tree.children]
        self.entry_bits = entry_bits
        self.broadcast_result = broadcast_result
        self.result = [None] * sim.n

    def _publish(self):
        self.result[0] = self.agg[0]
        if self.broadcast_result:
            for c in self.tree.children[0]:
                self.sim.emit(0, c, ("r", self.agg[0]), self.entry_bits)

    def init(self):
        emit = self.sim.emit
        for v in range(self.sim.n):
            if self.need[v] == 0 and v != 0 and self.tree.parent[v] != -1:
                emit(v, self.tree.parent[v], ("u", self.agg[v]), self.entry_bits)
        if self.sim.n == 1 or self.need[0] == 0:
            self._publish()

    def step(self, rnd, inbox):
        emit = self.sim.emit
        for v, msgs in inbox.items():
            for _, (tag, val) in msgs:
                if tag == "u":
                    self.agg[v] = self.op(self.agg[v], val)
                    self.need[v] -= 1
                    if self.need[v] == 0:
                        if v == 0:
                            self._publish()
                        else:
                            emit(v, self.tree.parent[v], ("u", self.agg[v]), self.entry_bits)
                else:
                    self.result[v] = val
                    for c in self.tree.children[v]:
                        emit(v, c, ("r", val), self.entry_bits)

    def next_wake(self, rnd):
        return None


class GatherBroadcastProgram:
    """Every node contributes items; afterwards every node knows the full list.

    Items stream up the tree (packed into bandwidth-sized chunks, FIFO), the
    root concatenates in arrival order, then streams the result down.
    """

    def __init__(self, sim, items_per_node, entry_bits, pack=None):
        self.sim = sim
        self.tree = ensure_tree(sim)
        self.entry_bits = max(1, entry_bits)
        spare = sim.bandwidth.bits - sim.cost.flag_bits
        self.pack = pack or max(1, spare // self.entry_bits)
        self.queue = [list(items) for items in items_per_node]
        self.collected = list(self.queue[0])
        self.queue[0] = []
        self.kids_open = [len(c) for c in self.tree.children]
        self.ended = [False] * sim.n
        self.ended[0] = True
        # nodes outside the root's component cannot contribute
        for v in range(1, sim.n):
            if self.tree.parent[v] == -1:
                self.ended[v] = True
        self.down_started = False
        self.received = [None] * sim.n

    def _pump_all(self):
        emit = self.sim.emit
        parent = self.tree.parent
        flag = self.sim.cost.flag_bits
        for v in range(1, self.sim.n):
            if self.ended[v]:
                continue
            q = self.queue[v]
            if q:
                take = tuple(q[: self.pack])
                del q[: self.pack]
                emit(v, parent[v], ("i", take), len(take) * self.entry_bits + flag)
            elif self.kids_open[v] == 0:
                emit(v, parent[v], ("e", ()), flag)
                self.ended[v] = True

    def _maybe_down(self):
        if self.down_started or self.kids_open[0] != 0 or self.queue[0]:
            return
        self.down_started = True
        self.received[0] = list(self.collected)
        chunks = [tuple(self.collected[i:i + self.pack])
                  for i in range(0, len(self.collected), self.pack)] or [()]
        emit = self.sim.emit
        for i, ch in enumerate(chunks):
            bits = max(1, len(ch) * self.entry_bits)
            for c in self.tree.children[0]:
                emit(0, c, ("d", ch), bits, delay=i + 1)

    def init(self):
        self._pump_all()
        self._maybe_down()

    def step(self, rnd, inbox):
        emit = self.sim.emit
        for v, msgs in inbox.items():
            for _, payload in msgs:
                tag = payload[0]
                if tag == "i":
                    if v == 0:
                        self.collected.extend(payload[1])
                    else:
                        self.queue[v].extend(payload[1])
                elif tag == "e":
                    self.kids_open[v] -= 1
                else:
                    ch = payload[1]
                    if self.received[v] is None:
                        self.received[v] = []
                    self.received[v].extend(ch)
                    bits = max(1, len(ch) * self.entry_bits)
                    for c in self.tree.children[v]:
                        emit(v, c, payload, bits)
        if not self.down_started:
            self._pump_all()
            self._maybe_down()

    def next_wake(self, rnd):
        if not self.down_started:
            return rnd + 1
        return None


def broadcast(sim, items, entry_bits, pack=None, phase="broadcast"):
    prog = sim.run(BroadcastProgram(sim, items, entry_bits, pack), phase=phase)
    return prog.received


def convergecast(sim, values, op, entry_bits=None, phase="convergecast"):
    if entry_bits is None:
        entry_bits = sim.cost.dist_bits + sim.cost.id_bits
    prog = sim.run(ConvergecastProgram(sim, values, op, entry_bits), phase=phase)
    return prog.result


def gather_broadcast(sim, items_per_node, entry_bits, pack=None, phase="gather"):
    prog = sim.run(GatherBroadcastProgram(sim, items_per_node, entry_bits, pack), phase=phase)
    return prog.received
