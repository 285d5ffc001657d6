"""Distributed building blocks: source detection, bounded-hop multi-source
distances, overlay spanners, and delay-scheduled restricted BFS.

All programs here self-throttle to the per-edge bit budget, so strict
bandwidth mode never aborts on well-formed inputs.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from fractions import Fraction

from .graphs import INF
from .tree import gather_broadcast


def ceil_root_pow(n, i, f):
    """Exact ceil(n**(i/f)) in integer arithmetic."""
    if i == 0 or n <= 1:
        return 1
    target = n ** i
    t = max(1, int(round(n ** (i / f))))
    while t ** f < target:
        t += 1
    while t > 1 and (t - 1) ** f >= target:
        t -= 1
    return t


def log2n(n):
    return math.log2(max(2, n))


def out_dests(sim):
    return [tuple(u for u, _ in a) for a in sim.out_adj]


def in_dests(sim):
    return [tuple(u for u, _ in a) for a in sim.in_adj]


def _dest_lists(sim, direction):
    if direction == "und":
        return sim.nbrs
    return out_dests(sim) if direction == "out" else in_dests(sim)


def receiver_wadj(graph, direction="und"):
    """wadj[v][u] = weight of the edge carrying tokens from u to v.

    For direction="out" tokens ride (u -> v) edges, so v reads its in-edges;
    for "in" the reverse. Senders read their own delay toward u as wadj[u][v],
    which is still the sender's incident-edge weight.
    """
    n = graph.n
    wadj = [dict() for _ in range(n)]
    if direction == "und":
        src = graph.und_adj
    else:
        src = graph.in_adj if direction == "out" else graph.out_adj
    for v in range(n):
        for u, w in src[v]:
            wadj[v][u] = w
    return wadj


class SourceDetectProgram:
    """Priority-forwarded partial BFS trees from a source set.

    Every node keeps its best <= k (distance, source, parent) entries under
    the (distance, then smaller ID) order and announces one new entry per
    round per edge, in that order. With `wadj` set, an edge of weight w acts
    as a path of w unit hops: announcements crossing it arrive w rounds later
    and deepen by w. `depth_cap` bounds the explored (virtual) depth.
    """

    def __init__(self, sim, sources, k=None, wadj=None, depth_cap=None,
                 direction="und"):
        self.sim = sim
        n = sim.n
        nsrc = len(sources)
        self.k = nsrc if k is None else min(k, nsrc)
        self.cap = depth_cap
        self.win = wadj
        dests = _dest_lists(sim, direction)
        if wadj is None:
            self.groups = [((1, d),) if d else () for d in dests]
        else:
            groups = []
            for v in range(n):
                by_w = {}
                for u in dests[v]:
                    # sender-side delay toward u equals the receiver-keyed weight
                    by_w.setdefault(wadj[u][v], []).append(u)
                groups.append(tuple((w, tuple(us)) for w, us in sorted(by_w.items())))
            self.groups = groups
        self.best = [dict() for _ in range(n)]
        self.announce = [[] for _ in range(n)]
        self.evict = [[] for _ in range(n)] if self.k < nsrc else None
        self.active = {}
        self.bits = sim.cost.id_bits + sim.cost.dist_bits
        for s in sorted(sources):
            self.best[s][s] = (0, s)
            self.announce[s].append((0, s))
            self.active[s] = True
            if self.evict is not None:
                self.evict[s].append((0, -s))

    def init(self):
        pass

    def _insert(self, v, s, nd, parent):
        best = self.best[v]
        cur = best.get(s)
        if cur is not None:
            if nd >= cur[0]:
                return
            best[s] = (nd, parent)
            heapq.heappush(self.announce[v], (nd, s))
            if self.evict is not None:
                heapq.heappush(self.evict[v], (-nd, -s))
            return
        ev = self.evict[v] if self.evict is not None else None
        if ev is None or len(best) < self.k:
            best[s] = (nd, parent)
            heapq.heappush(self.announce[v], (nd, s))
            if ev is not None:
                heapq.heappush(ev, (-nd, -s))
            return
        # lazily find the current worst (max (d, s)) table entry
        while ev:
            wd, ws = ev[0]
            cur2 = best.get(-ws)
            if cur2 is None or cur2[0] != -wd:
                heapq.heappop(ev)
            else:
                break
        if ev:
            wd, ws = ev[0]
            if (nd, s) < (-wd, -ws):
                heapq.heappop(ev)
                del best[-ws]
            else:
                return
        best[s] = (nd, parent)
        heapq.heappush(self.announce[v], (nd, s))
        heapq.heappush(ev, (-nd, -s))

    def step(self, rnd, inbox):
        active = self.active
        cap = self.cap
        win = self.win
        insert = self._insert
        announce = self.announce
        for v, msgs in inbox.items():
            if win is None:
                for u, pl in msgs:
                    nd = pl[1] + 1
                    if cap is None or nd <= cap:
                        insert(v, pl[0], nd, u)
            else:
                wv = win[v]
                for u, pl in msgs:
                    nd = pl[1] + wv[u]
                    if cap is None or nd <= cap:
                        insert(v, pl[0], nd, u)
            if v not in active and announce[v]:
                active[v] = True
        emit_all = self.sim.emit_all
        bits = self.bits
        drained = []
        for v in active:
            ann = announce[v]
            best = self.best[v]
            while ann:
                d, s = heapq.heappop(ann)
                cur = best.get(s)
                if cur is None or cur[0] != d:
                    continue
                for w, ds in self.groups[v]:
                    emit_all(v, ds, (s, d), bits, delay=w)
                break
            if not ann:
                drained.append(v)
        for v in drained:
            del active[v]

    def next_wake(self, rnd):
        return rnd + 1 if self.active else None

    def tables(self):
        """Per-node sorted [(d, s, parent)] under the closer order."""
        return [sorted((d, s, p) for s, (d, p) in bv.items()) for bv in self.best]


def source_detection(sim, sources, k, phase="source-detection", **kw):
    """Run source detection; returns per-node tables [(d, s, parent)]."""
    prog = sim.run(SourceDetectProgram(sim, sources, k, **kw), phase=phase)
    return prog.tables()


class BoundedHopBFProgram:
    """Hop-exact multi-source Bellman-Ford.

    Entries carry (value, hops) packed into one integer key so that ties on
    value prefer fewer hops, and bandwidth-induced queueing delays never
    distort the h-hop semantics. Improvements are forwarded packed, several
    per message within the bit budget.
    """

    def __init__(self, sim, sources, h, wadj=None, value_cap=None, direction="und"):
        self.sim = sim
        n = sim.n
        self.h = h
        self.hmod = h + 1
        self.cap = value_cap
        self.wadj = wadj
        self.dests = _dest_lists(sim, direction)
        self.key = [dict() for _ in range(n)]
        self.par = [dict() for _ in range(n)]
        self.queue = [deque() for _ in range(n)]
        self.active = {}
        c = sim.cost
        self.entry_bits = c.id_bits + c.dist_bits + c.counter_bits
        self.pack = max(1, sim.bandwidth.bits // self.entry_bits)
        for s in sorted(sources):
            self.key[s][s] = 0
            self.par[s][s] = s
            if self.dests[s]:
                self.queue[s].append((s, 0, 0))
                self.active[s] = True

    def init(self):
        pass

    def step(self, rnd, inbox):
        h = self.h
        hmod = self.hmod
        cap = self.cap
        active = self.active
        for v, msgs in inbox.items():
            kv = self.key[v]
            pv = self.par[v]
            qv = self.queue[v]
            wv = self.wadj[v] if self.wadj is not None else None
            for u, entries in msgs:
                w = 1 if wv is None else wv[u]
                for s, d, hops in entries:
                    nd = d + w
                    if cap is not None and nd > cap:
                        continue
                    nh = hops + 1
                    nk = nd * hmod + nh
                    cur = kv.get(s)
                    if cur is None or nk < cur:
                        kv[s] = nk
                        pv[s] = u
                        if nh < h:
                            qv.append((s, nd, nh))
            if qv and v not in active:
                active[v] = True
        emit_all = self.sim.emit_all
        pack = self.pack
        eb = self.entry_bits
        drained = []
        for v in active:
            qv = self.queue[v]
            k = min(pack, len(qv))
            take = tuple(qv.popleft() for _ in range(k))
            emit_all(v, self.dests[v], take, k * eb)
            if not qv:
                drained.append(v)
        for v in drained:
            del active[v]

    def next_wake(self, rnd):
        return rnd + 1 if self.active else None

    def dist(self, v):
        hmod = self.hmod
        return {s: k // hmod for s, k in self.key[v].items()}


def scale_edge_weight(w, h, eps: Fraction, i):
    """ceil(2*h*w / (eps * 2**i)) in exact integer arithmetic."""
    num = 2 * h * w * eps.denominator
    den = eps.numerator * (1 << i)
    return -(-num // den)


def scaled_wadj(graph, h, eps: Fraction, i, direction="und"):
    """Receiver-keyed adjacency with every weight scaled for grid index i."""
    base = receiver_wadj(graph, direction)
    return [{u: scale_edge_weight(w, h, eps, i) for u, w in adj.items()}
            for adj in base]


def bounded_hop_multisource(sim, sources, h, eps, phase="bounded-hop",
                            direction="und", value_bound=None):
    """(1+eps)-approximate h-hop multi-source distances via a weight-scaling grid.

    Returns (est, par): est[v] = {s: float estimate}, par[v] = {s: neighbor of
    v on the estimated path}. Deterministically, d(s,v) <= est[v][s] and
    est[v][s] <= (1+eps) * d^h(s,v) whenever the latter is finite. An unscaled
    pass (value-capped like the grid) refines small distances, which makes
    unit-weight inputs come out exact.

    `value_bound` skips grid scales whose bracketed range starts at or above
    the bound; estimates at or above the bound then lose their accuracy
    guarantee (callers use this when larger values cannot matter).
    """
    graph = sim.graph
    eps = Fraction(eps).limit_denominator(10 ** 6)
    W = graph.max_weight()
    imax = math.ceil(math.log2(max(2, h * W))) + 1
    # scaled values above this cannot belong to a scale's bracketed range
    cap = -(-2 * h * eps.denominator // eps.numerator) + h
    est = [dict() for _ in range(sim.n)]
    par = [dict() for _ in range(sim.n)]
    sources = sorted(sources)
    raw = receiver_wadj(graph, direction) if graph.weighted else None
    raw_cap = cap if value_bound is None else min(cap, math.ceil(value_bound))
    passes = [(raw, 1.0, raw_cap)]
    for i in range(0, imax + 1):
        if value_bound is not None and i > 0 and float(1 << (i - 1)) >= value_bound:
            continue
        factor = float(eps * (1 << i)) / (2 * h)
        passes.append((scaled_wadj(graph, h, eps, i, direction), factor, cap))
    for wadj, factor, vcap in passes:
        prog = sim.run(
            BoundedHopBFProgram(sim, sources, h, wadj, value_cap=vcap,
                                direction=direction),
            phase=phase)
        for v in range(sim.n):
            ev = est[v]
            pv = par[v]
            parv = prog.par[v]
            hmod = prog.hmod
            for s, key in prog.key[v].items():
                val = (key // hmod) * factor
                if s not in ev or val < ev[s]:
                    ev[s] = val
                    pv[s] = parv[s]
    return est, par


def overlay_spanner(sim, overlay_edges, k, phase="spanner", rng_tag="spanner"):
    """Clustering-based (2k-1)-spanner of an overlay network.

    Per-phase announcements (sampled centers, membership moves) ride the BFS
    tree, and the final edge list is gathered from its adders and broadcast,
    so every node ends up knowing the spanner. Returns the sorted edge list.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    members = sorted({u for u, _, _ in overlay_edges} | {v for _, v, _ in overlay_edges})
    if k == 1 or len(members) <= 1:
        return sorted(overlay_edges)
    nH = len(members)
    p_sample = nH ** (-1.0 / k)
    inc = {v: {} for v in members}
    for u, v, w in overlay_edges:
        cur = inc[u].get(v)
        if cur is None or w < cur:
            inc[u][v] = w
            inc[v][u] = w
    cluster = {v: v for v in members}
    alive = {v: True for v in members}
    additions = [[] for _ in range(sim.n)]
    id_bits = sim.cost.id_bits
    w_bits = sim.cost.dist_bits

    def lightest_per_cluster(v):
        out = {}
        for u, w in sorted(inc[v].items()):
            if not alive.get(u, False) or cluster.get(u) == cluster.get(v):
                continue
            c = cluster[u]
            cur = out.get(c)
            if cur is None or (w, u) < cur:
                out[c] = (w, u)
        return out

    for i in range(1, k):
        centers = sorted({cluster[v] for v in members if alive[v]})
        flags = [[] for _ in range(sim.n)]
        for c in centers:
            bit = 1 if sim.node_rng(c, f"{rng_tag}-{i}").random() < p_sample else 0
            flags[c].append((c, bit))
        got = gather_broadcast(sim, flags, entry_bits=id_bits + 1, phase=phase)
        sampled = {c for c, bit in got[0] if bit}
        moves = [[] for _ in range(sim.n)]
        deaths = []
        for v in members:
            if not alive[v]:
                continue
            if cluster[v] in sampled:
                moves[v].append((v, cluster[v]))
                continue
            lightest = lightest_per_cluster(v)
            samp = sorted((wu, c) for c, wu in lightest.items() if c in sampled)
            if not samp:
                for c, (w, u) in sorted(lightest.items()):
                    additions[v].append((v, u, w))
                deaths.append(v)
            else:
                (w0, u0), c0 = samp[0]
                additions[v].append((v, u0, w0))
                moves[v].append((v, c0))
                for c, (w, u) in sorted(lightest.items()):
                    if (w, u) < (w0, u0):
                        additions[v].append((v, u, w))
        got_moves = gather_broadcast(sim, moves, entry_bits=2 * id_bits, phase=phase)
        new_cluster = dict(got_moves[0])
        for v in members:
            if v in new_cluster:
                cluster[v] = new_cluster[v]
            elif alive[v]:
                alive[v] = False
    for v in members:
        if not alive[v]:
            continue
        for c, (w, u) in sorted(lightest_per_cluster(v).items()):
            additions[v].append((v, u, w))
    got_edges = gather_broadcast(sim, additions, entry_bits=2 * id_bits + w_bits,
                                 phase=phase)
    spanner = {}
    for u, v, w in got_edges[0]:
        key = (min(u, v), max(u, v))
        if key not in spanner or w < spanner[key]:
            spanner[key] = w
    return sorted((u, v, w) for (u, v), w in spanner.items())


class RestrictedBfsSpec:
    """Per-source restricted BFS description: elimination data plus start delay."""

    __slots__ = ("source", "rset", "delay")

    def __init__(self, source, rset=(), delay=0):
        self.source = source
        self.rset = tuple(rset)
        self.delay = int(delay)


class SchedRBFSProgram:
    """Many restricted BFS explorations with staggered start delays.

    Tokens are (source, depth); a caller-supplied predicate decides whether a
    node at its discovered depth joins a source's exploration. Each source's
    elimination data crosses every edge once, chunked to the bit budget,
    ahead of its first token there. Queued items flush FIFO per edge within
    the budget each round. With `wadj`, edges act as weight-long unit paths.
    """

    def __init__(self, sim, specs, h, membership, wadj=None, direction="und",
                 closing_adj=None, blocked=None):
        self.sim = sim
        n = sim.n
        self.h = h
        self.membership = membership
        self.wadj = wadj
        self.dests = _dest_lists(sim, direction)
        self.closing = closing_adj
        self.blocked = blocked
        self.known = [dict() for _ in range(n)]
        self.reached = [dict() for _ in range(n)]
        self.queues = [dict() for _ in range(n)]
        self.spec_sent = [set() for _ in range(n)]
        self.mu = [INF] * n
        self.active = {}
        c = sim.cost
        self.tok_bits = c.id_bits + c.counter_bits
        self.spec_entry_bits = c.id_bits + c.dist_bits
        self.budget = sim.bandwidth.bits
        self.spec_chunk = max(1, (self.budget - c.id_bits) // self.spec_entry_bits)
        self.starts = {}
        for sp in specs:
            self.starts.setdefault(sp.delay + 1, []).append(sp)

    def init(self):
        pass

    def _accept(self, v, src, depth):
        self.reached[v][src] = depth
        if self.closing is not None:
            cv = self.closing[v]
            if src in cv:
                cand = depth + cv[src]
                if cand < self.mu[v]:
                    self.mu[v] = cand
        if depth >= self.h:
            return
        qs = self.queues[v]
        sent = self.spec_sent[v]
        blocked = self.blocked
        for u in self.dests[v]:
            if blocked is not None and blocked[u]:
                continue
            q = qs.get(u)
            if q is None:
                q = qs[u] = deque()
            if (u, src) not in sent:
                sent.add((u, src))
                rset = self.known[v][src]
                for j in range(0, max(1, len(rset)), self.spec_chunk):
                    q.append(("s", src, rset[j:j + self.spec_chunk]))
            q.append(("t", src, depth))
        if qs and v not in self.active:
            self.active[v] = True

    def step(self, rnd, inbox):
        membership = self.membership
        starts = self.starts.pop(rnd, None)
        if starts is not None:
            for sp in starts:
                s = sp.source
                self.known[s][s] = sp.rset
                if self.blocked is None or not self.blocked[s]:
                    self._accept(s, s, 0)
        for v, msgs in inbox.items():
            kv = self.known[v]
            rv = self.reached[v]
            wv = self.wadj[v] if self.wadj is not None else None
            for u, batch in msgs:
                w = 1 if wv is None else wv[u]
                for item in batch:
                    if item[0] == "s":
                        src = item[1]
                        kv[src] = kv.get(src, ()) + item[2]
                        continue
                    src, depth = item[1], item[2]
                    nd = depth + w
                    if nd > self.h:
                        continue
                    cur = rv.get(src)
                    if cur is not None and cur <= nd:
                        continue
                    if membership(v, src, kv.get(src, ()), nd):
                        self._accept(v, src, nd)
        emit = self.sim.emit
        tb = self.tok_bits
        seb = self.spec_entry_bits
        budget = self.budget
        id_bits = self.sim.cost.id_bits
        wv_all = self.wadj
        drained = []
        for v in self.active:
            qs = self.queues[v]
            empty = []
            for u, q in qs.items():
                used = 0
                out = []
                while q:
                    item = q[0]
                    cost = tb if item[0] == "t" else (id_bits + len(item[2]) * seb)
                    if used + cost > budget and used > 0:
                        break
                    used += cost
                    out.append(item)
                    q.popleft()
                if out:
                    w = 1 if wv_all is None else wv_all[u][v]
                    emit(v, u, tuple(out), used, delay=w)
                if not q:
                    empty.append(u)
            for u in empty:
                del qs[u]
            if not qs:
                drained.append(v)
        for v in drained:
            del self.active[v]

    def next_wake(self, rnd):
        if self.active:
            return rnd + 1
        if self.starts:
            return min(self.starts)
        return None

    def visit_counts(self):
        return [len(r) for r in self.reached]


def sched_rbfs(sim, specs, h, membership, phase="sched-rbfs", **kw):
    """Run scheduled restricted BFS; returns the program (reached/counts/mu)."""
    return sim.run(SchedRBFSProgram(sim, specs, h, membership, **kw), phase=phase)


def plain_membership(v, src, rset, depth):
    return True


def delay_range(max_visit_bound, n):
    """Delay window: the visit bound rounded up to a multiple of ceil(log2 n)."""
    lg = max(1, math.ceil(log2n(n)))
    return max(1, -(-int(max_visit_bound) // lg) * lg)
