"""Round-synchronous message-passing simulator with per-edge bandwidth accounting.

One Simulation wraps one network. Programs run in sequence on it (state kept
in `sim.store`), accumulating rounds into a single RoundReport. Messages
travel along underlying undirected edges; directions and weights are data.

A program is an object driving all nodes of one logical phase. The engine
owns transport: sends are staged via `sim.emit(...)`, delivered the following
round (or later for virtual-path delays), and bit-checked against the per
edge budget. Programs must keep per-node logic local to that node's state
plus its inbox; the engine enforces transport, ordering, and accounting.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .graphs import Graph


class EngineError(Exception):
    pass


class BandwidthExceeded(EngineError):
    def __init__(self, edge, round_no, bits, budget):
        super().__init__(f"edge {edge} carries {bits} bits in round {round_no} (budget {budget})")
        self.edge = edge
        self.round_no = round_no
        self.bits = bits


class RoundCapExceeded(EngineError):
    pass


def _log2ceil(x):
    return max(1, math.ceil(math.log2(max(2, x))))


@dataclass(frozen=True)
class Bandwidth:
    """Per-edge per-round bit budget; at least one ID plus a tag must fit."""

    bits: int

    @staticmethod
    def for_graph(n, c_b=32.0) -> "Bandwidth":
        b = math.ceil(c_b * math.log2(max(2, n)))
        return Bandwidth(max(b, _log2ceil(n) + 1))


@dataclass(frozen=True)
class MessageCost:
    """Additive bit costs for payload fields."""

    id_bits: int
    dist_bits: int
    flag_bits: int = 1

    @property
    def counter_bits(self):
        return self.id_bits

    @staticmethod
    def for_graph(n, W=1) -> "MessageCost":
        return MessageCost(id_bits=_log2ceil(n), dist_bits=_log2ceil(n * max(1, W)) + 1)


@dataclass
class RoundReport:
    rounds: int = 0
    messages: int = 0
    bits: int = 0
    max_edge_bits: int = 0
    overflow_events: int = 0
    phase_rounds: dict = field(default_factory=dict)
    events: dict = field(default_factory=dict)

    def as_dict(self):
        return {"rounds": self.rounds, "messages": self.messages, "bits": self.bits,
                "max_edge_bits": self.max_edge_bits, "overflow_events": self.overflow_events,
                "phase_rounds": dict(self.phase_rounds)}


class Simulation:
    """One network plus accumulated execution state across program phases."""

    def __init__(self, graph: Graph, seed=0, bandwidth=None, mode="strict",
                 round_cap=5_000_000, c_b=32.0):
        graph.validate()
        self.graph = graph
        self.n = graph.n
        self.seed = seed
        self.mode = mode
        self.round_cap = round_cap
        self.bandwidth = bandwidth or Bandwidth.for_graph(graph.n, c_b)
        W = graph.max_weight() if graph.weighted else 1
        self.cost = MessageCost.for_graph(graph.n, W)
        self.nbrs = [tuple(u for u, _ in a) for a in graph.und_adj]
        self.out_adj = graph.out_adj
        self.in_adj = graph.in_adj
        self.store = [dict() for _ in range(graph.n)]
        self.report = RoundReport()
        self.tree = None
        self._pending = {}
        self._round = 0
        self._rng_cache = {}

    def node_rng(self, v, tag) -> random.Random:
        key = (v, tag)
        r = self._rng_cache.get(key)
        if r is None:
            r = random.Random(f"{self.seed}|{v}|{tag}")
            self._rng_cache[key] = r
        return r

    def emit(self, u, v, payload, bits, delay=1):
        """Stage a message from u to its underlying neighbor v, delivered after `delay` rounds."""
        r = self._round + delay
        lst = self._pending.get(r)
        if lst is None:
            self._pending[r] = [(u, (v,), payload, bits)]
        else:
            lst.append((u, (v,), payload, bits))

    def emit_all(self, u, dests, payload, bits, delay=1):
        """Stage the same payload from u to each destination in `dests` (one message each)."""
        if not dests:
            return
        r = self._round + delay
        lst = self._pending.get(r)
        if lst is None:
            self._pending[r] = [(u, tuple(dests), payload, bits)]
        else:
            lst.append((u, tuple(dests), payload, bits))

    def run(self, program, phase=None, round_cap=None):
        """Execute `program` until completion or quiescence; accumulate the report."""
        cap = round_cap or self.round_cap
        pending = self._pending
        report = self.report
        budget = self.bandwidth.bits
        strict = self.mode == "strict"
        self._round = 0
        program.init()
        rnd = 0
        last_active = 0
        while True:
            wake = program.next_wake(rnd)
            if pending:
                nxt = min(pending)
                if wake is not None and wake < nxt:
                    nxt = wake
            elif wake is not None:
                nxt = wake
            else:
                break
            if nxt <= rnd:
                raise EngineError(f"wake request {nxt} not in the future of {rnd}")
            rnd = nxt
            if rnd > cap:
                raise RoundCapExceeded(f"phase exceeded {cap} rounds")
            self._round = rnd
            inbox = {}
            queued = pending.pop(rnd, None)
            if queued:
                total = 0
                nmsg = 0
                mx = 0
                # senders emitting more than one group this round need per-edge
                # accounting; the common single-group case checks once per group
                multi = None
                seen_u = set()
                for rec in queued:
                    u = rec[0]
                    if u in seen_u:
                        if multi is None:
                            multi = set()
                        multi.add(u)
                    else:
                        seen_u.add(u)
                iget = inbox.get
                slow = None
                for rec in queued:
                    u, dests, payload, bits = rec
                    if multi is not None and u in multi:
                        if slow is None:
                            slow = []
                        slow.append(rec)
                        continue
                    if bits > budget:
                        if strict:
                            raise BandwidthExceeded((u, dests[0]), rnd, bits, budget)
                        report.overflow_events += 1
                    if bits > mx:
                        mx = bits
                    item = (u, payload)
                    k = len(dests)
                    nmsg += k
                    total += bits * k
                    for v in dests:
                        lst = iget(v)
                        if lst is None:
                            inbox[v] = [item]
                        else:
                            lst.append(item)
                if slow is not None:
                    # exact per-edge accumulation; max-bits records load as
                    # scheduled so it exceeds B exactly when strict would abort
                    used = {}
                    carried = {}
                    deferred = None
                    nn = self.n
                    for u, dests, payload, bits in slow:
                        item = (u, payload)
                        base = u * nn
                        for v in dests:
                            e = base + v
                            nb = used.get(e, 0) + bits
                            used[e] = nb
                            if nb > budget and strict:
                                raise BandwidthExceeded((u, v), rnd, nb, budget)
                            c = carried.get(e, 0)
                            if c + bits > budget and c > 0:
                                if deferred is None:
                                    deferred = []
                                deferred.append((u, (v,), payload, bits))
                                continue
                            carried[e] = c + bits
                            nmsg += 1
                            total += bits
                            lst = inbox.get(v)
                            if lst is None:
                                inbox[v] = [item]
                            else:
                                lst.append(item)
                    if deferred:
                        nxt_list = pending.setdefault(rnd + 1, [])
                        nxt_list[:0] = deferred
                    umx = max(used.values())
                    if umx > mx:
                        mx = umx
                    if umx > budget:
                        report.overflow_events += 1
                report.messages += nmsg
                report.bits += total
                if mx > report.max_edge_bits:
                    report.max_edge_bits = mx
            program.step(rnd, inbox)
            last_active = rnd
        self.report.rounds += last_active
        if phase:
            self.report.phase_rounds[phase] = self.report.phase_rounds.get(phase, 0) + last_active
        self._pending = {}
        return program


class NodeContext:
    """Per-node view handed to spec-shaped per-node handlers."""

    __slots__ = ("v", "neighbors", "sim", "out_edges", "in_edges", "sends", "done")

    def __init__(self, sim, v):
        self.v = v
        self.sim = sim
        self.neighbors = sim.nbrs[v]
        self.out_edges = sim.out_adj[v]
        self.in_edges = sim.in_adj[v]
        self.sends = []
        self.done = False

    def rng(self, tag):
        return self.sim.node_rng(self.v, tag)

    def send(self, dst, payload, bits):
        self.sends.append((dst, payload, bits))

    def send_all(self, payload, bits):
        for u in self.neighbors:
            self.sends.append((u, payload, bits))

    def terminate(self):
        self.done = True


class PerNodeProgram:
    """Adapter running one handler object per node.

    `factory(ctx)` builds a handler with methods `init(ctx)` and
    `step(ctx, rnd, inbox)`; handlers communicate only via ctx.send and
    terminate via ctx.terminate().
    """

    def __init__(self, sim, factory):
        self.sim = sim
        self.ctxs = [NodeContext(sim, v) for v in range(sim.n)]
        self.nodes = [factory(c) for c in self.ctxs]
        self._clock = any(getattr(nd, "needs_clock", False) for nd in self.nodes)

    def _flush(self, ctx):
        if ctx.sends:
            emit = self.sim.emit
            v = ctx.v
            for dst, payload, bits in ctx.sends:
                emit(v, dst, payload, bits)
            ctx.sends.clear()

    def init(self):
        for ctx, nd in zip(self.ctxs, self.nodes):
            nd.init(ctx)
            self._flush(ctx)

    def step(self, rnd, inbox):
        if self._clock:
            for ctx, nd in zip(self.ctxs, self.nodes):
                if not ctx.done:
                    nd.step(ctx, rnd, inbox.get(ctx.v, ()))
                    self._flush(ctx)
        else:
            for v, msgs in inbox.items():
                ctx = self.ctxs[v]
                if not ctx.done:
                    self.nodes[v].step(ctx, rnd, msgs)
                    self._flush(ctx)

    def next_wake(self, rnd):
        if self._clock and not all(c.done for c in self.ctxs):
            return rnd + 1
        return None
