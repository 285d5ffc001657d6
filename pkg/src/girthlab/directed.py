"""Minimum weight cycle approximation for directed networks.

Phase 1 samples sources, runs exact multi-source directed BFS both ways, and
closes every cycle through a sampled vertex. Phase 2 handles the remaining
short cycles with restricted BFS explorations whose neighborhoods are pruned
by per-node elimination sets; congested vertices are peeled into layers
first so the explorations stay cheap. Every reported value is witnessed by a
closed directed walk, so the girth lower bound holds unconditionally.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .graphs import INF, Graph
from .engine import Simulation
from .primitives import (RestrictedBfsSpec, SourceDetectProgram,
                         bounded_hop_multisource, ceil_root_pow, delay_range,
                         log2n, receiver_wadj, scale_edge_weight, scaled_wadj,
                         sched_rbfs)
from .tree import convergecast, gather_broadcast
from .unweighted import sample_level


class LayerBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class DirectedSchedule:
    h: int
    sample_prob: float
    beta: int
    layer_c: float
    layer_prob: float
    layer_thresh: float
    layer_budget: int

    @classmethod
    def paper(cls, n, c=4.0, sample_mul=1.0):
        h = ceil_root_pow(n, 2, 3)
        lg = log2n(n)
        return cls(
            h=h,
            sample_prob=min(sample_mul * lg / h, 1.0),
            beta=max(1, math.ceil(lg)),
            layer_c=c,
            layer_prob=min(c * lg / h, 1.0),
            layer_thresh=3 * c * lg,
            layer_budget=math.ceil(lg) + 1,
        )

    @classmethod
    def lean(cls, n, c=2.0, sample_mul=1.0):
        return cls.paper(n, c=c, sample_mul=sample_mul)


@dataclass
class DirectedState:
    sources: list
    dist_from: list   # dist_from[v][s] = d(s, v)
    dist_to: list     # dist_to[v][s]   = d(v, s)
    matrix: dict      # (s, t) -> d(s, t) for s, t in sources
    mu: list
    rsets: list = None
    layers: list = None
    layer_samples: list = None
    layer_counts: list = None
    budget_exhausted: bool = False


def eliminates(d_v_t, d_t_y, d_v_y, d_y_t):
    """Sampled vertex t stands in for y around v: 2d(v,t)+d(t,y) <= 2d(v,y)+d(y,t).

    INF obeys: INF <= INF is true, finite < INF is true (math.inf arithmetic).
    """
    return 2 * d_v_t + d_t_y <= 2 * d_v_y + d_y_t


def eliminates_guarded(d_v_t, d_t_y, d_v_y, d_y_t):
    """The elimination rule with its applicability guards.

    Dropping y is only certified when v reaches t and t reaches y: the
    replacement cycle through t is v -> t -> y -> v, and both legs must
    exist. An unreachable t would otherwise eliminate everything whose
    right-hand side is also infinite, which is exactly the wrong direction.
    """
    if d_v_t == INF or d_t_y == INF:
        return d_v_y == INF
    return 2 * d_v_t + d_t_y <= 2 * d_v_y + d_y_t


def phase1_long_cycles(sim, sched, wadj_out=None, wadj_in=None, depth_cap=None,
                       closing=None, phase="phase1"):
    """Sample S, learn d(s,v) and d(v,s) exactly for all s in S, update mu
    along edges into sampled vertices, and broadcast the S x S matrix."""
    n = sim.n
    sources = sample_level(sim, sched.sample_prob, "dir-sample")
    mu = [INF] * n
    if not sources:
        return DirectedState(sources, [dict() for _ in range(n)],
                             [dict() for _ in range(n)], {}, mu)
    fwd = sim.run(SourceDetectProgram(sim, sources, None, wadj=wadj_out,
                                      depth_cap=depth_cap, direction="out"),
                  phase=phase)
    bwd = sim.run(SourceDetectProgram(sim, sources, None, wadj=wadj_in,
                                      depth_cap=depth_cap, direction="in"),
                  phase=phase)
    dist_from = [{s: d for s, (d, _) in fwd.best[v].items()} for v in range(n)]
    dist_to = [{s: d for s, (d, _) in bwd.best[v].items()} for v in range(n)]
    sset = set(sources)
    closing = closing or [{t: w for t, w in sim.out_adj[v]} for v in range(n)]
    for v in range(n):
        dfv = dist_from[v]
        for t, w in closing[v].items():
            if t in sset and t != v:
                d = dfv.get(t)
                if d is not None and d + w < mu[v]:
                    mu[v] = d + w
    rows = [[] for _ in range(n)]
    for s in sources:
        dfs = dist_from[s]
        rows[s] = [(t, s, dfs[t]) for t in sources if t in dfs]
    c = sim.cost
    got = gather_broadcast(sim, rows, entry_bits=2 * c.id_bits + c.dist_bits,
                           phase=phase)
    matrix = {(t, s): d for t, s, d in got[0]}
    return DirectedState(sources, dist_from, dist_to, matrix, mu)


def build_elimination_sets(sim, state, sched, tag="rpick"):
    """Per node, pick at most one non-eliminated sampled vertex per hash group."""
    n = sim.n
    S = state.sources
    if not S:
        state.rsets = [() for _ in range(n)]
        return state.rsets
    beta = sched.beta
    groups = [[] for _ in range(beta)]
    for t in S:
        # shared hash: any node can compute t's group from the public seed
        g = random.Random(f"{sim.seed}|rgroup|{t}").randrange(beta)
        groups[g].append(t)
    matrix = state.matrix
    rsets = []
    for v in range(n):
        dtv = state.dist_to[v]
        rng = sim.node_rng(v, tag)
        chosen = []
        for gi in range(beta):
            survivors = []
            for t in groups[gi]:
                d_v_t = dtv.get(t, INF)
                if d_v_t == INF:
                    # unreachable representatives certify nothing
                    continue
                dead = False
                for (tp, d_v_tp) in chosen:
                    d_tp_t = matrix.get((tp, t), INF)
                    d_t_tp = matrix.get((t, tp), INF)
                    if eliminates_guarded(d_v_tp, d_tp_t, d_v_t, d_t_tp):
                        dead = True
                        break
                if not dead:
                    survivors.append(t)
            if survivors:
                t = survivors[rng.randrange(len(survivors))]
                chosen.append((t, dtv.get(t, INF)))
        rsets.append(tuple(chosen))
    state.rsets = rsets
    return rsets


def make_membership(state, processed=None):
    """Eq-style neighborhood test evaluated with the BFS-discovered depth."""
    dist_to = state.dist_to
    dist_from = state.dist_from

    def membership(y, src, rset, depth):
        if processed is not None and processed[y]:
            return False
        dty = dist_to[y]
        dfy = dist_from[y]
        d2 = 2 * depth
        for t, d_v_t in rset:
            d_t_y = dfy.get(t, INF)
            if d_t_y == INF:
                # t cannot certify a replacement cycle for y
                continue
            if not d2 + dty.get(t, INF) < 2 * d_v_t + d_t_y:
                return False
        return True

    return membership


def second_phase(sim, state, sched, wadj=None, depth_cap=None, closing=None,
                 strict_layers=False, phase="phase2"):
    """Build approximate congestion layers, then process them in reverse,
    updating mu with every restricted exploration that closes a cycle."""
    n = sim.n
    h = depth_cap if depth_cap is not None else sched.h
    closing = closing or [{t: w for t, w in sim.out_adj[v]} for v in range(n)]
    processed = [False] * n
    membership = make_membership(state, processed)
    rsets = state.rsets
    cnt_bits = sim.cost.counter_bits

    layer_members = [list(range(n))]
    samples = []
    counts_log = []
    state.budget_exhausted = False
    while True:
        cur = layer_members[-1]
        flags = [0] * n
        for v in cur:
            flags[v] = 1
        size = convergecast(sim, flags, "count", entry_bits=cnt_bits,
                            phase=phase)[0]
        if size == 0:
            break
        if len(layer_members) - 1 >= sched.layer_budget:
            state.budget_exhausted = True
            if strict_layers:
                raise LayerBudgetExceeded(
                    f"layers not empty after {len(layer_members) - 1} iterations")
            break
        i = len(layer_members) - 1
        p = sched.layer_prob
        picked = [v for v in cur
                  if sim.node_rng(v, f"layer-sample-{i}").random() < p]
        samples.append(picked)
        bound = max(1, len(picked))
        specs = []
        for v in picked:
            d = sim.node_rng(v, f"layer-delay-{i}").randrange(delay_range(bound, n))
            specs.append(RestrictedBfsSpec(v, rsets[v], d))
        prog = sched_rbfs(sim, specs, h, membership, wadj=wadj,
                          direction="out", phase=phase)
        counts = [len(r) for r in prog.reached]
        counts_log.append(counts)
        thr = sched.layer_thresh
        layer_members.append([v for v in cur if counts[v] > thr])

    # stage 2: process U_i = B_i \ B_{i+1}, innermost first
    for i in range(len(layer_members) - 1, -1, -1):
        above = set(layer_members[i + 1]) if i + 1 < len(layer_members) else set()
        todo = [v for v in layer_members[i] if v not in above]
        if not todo:
            continue
        bound = 4 * h
        specs = []
        for v in todo:
            d = sim.node_rng(v, f"stage2-delay-{i}").randrange(delay_range(bound, n))
            specs.append(RestrictedBfsSpec(v, rsets[v], d))
        prog = sched_rbfs(sim, specs, h, membership, wadj=wadj,
                          direction="out", closing_adj=closing, phase=phase)
        mu = state.mu
        for v in range(n):
            if prog.mu[v] < mu[v]:
                mu[v] = prog.mu[v]
        for v in todo:
            processed[v] = True
    state.layers = [len(x) for x in layer_members]
    state.layer_samples = samples
    state.layer_counts = counts_log
    return state


def approx_girth_directed(graph, c=4.0, seed=0, mode="strict", schedule=None,
                          c_b=32.0, collect=None, sim=None, wadj_out=None,
                          wadj_in=None, depth_cap=None, closing=None,
                          strict_layers=False):
    """2-approximation of the directed unweighted girth: g <= mu always,
    mu <= 2g w.h.p. Returns (mu, report)."""
    own_sim = sim is None
    if own_sim:
        sim = Simulation(graph, seed=seed, mode=mode, c_b=c_b)
    sched = schedule or DirectedSchedule.paper(sim.n, c=c)
    state = phase1_long_cycles(sim, sched, wadj_out=wadj_out, wadj_in=wadj_in,
                               depth_cap=depth_cap, closing=closing)
    build_elimination_sets(sim, state, sched)
    second_phase(sim, state, sched, wadj=wadj_out, depth_cap=depth_cap,
                 closing=closing, strict_layers=strict_layers)
    got = convergecast(sim, state.mu, "min", phase="mu")
    mu = got[0]
    if collect is not None:
        collect["state"] = state
        collect["schedule"] = sched
    return mu, sim.report


def approx_girth_directed_weighted(graph, eps, c=4.0, seed=0, mode="strict",
                                   c_b=32.0, collect=None, sample_mul=1.0):
    """(2+eps)-approximation of the directed weighted girth.

    Short branch: the unweighted pipeline on virtual subdivisions of the
    scaled graphs, depth-capped. Long branch: (1+eps) directed distance
    estimates from a sparse sample, closed over edges into the sample.
    w(C) <= mu unconditionally (all candidates are closed directed walks).
    """
    eps_f = Fraction(eps).limit_denominator(10 ** 6)
    sim = Simulation(graph, seed=seed, mode=mode, c_b=c_b)
    n = sim.n
    W = graph.max_weight()
    hb = ceil_root_pow(n, 2, 3)
    h_star = math.ceil((1 + Fraction(2) / eps_f) * hb)
    scales = math.ceil(math.log2(max(2, hb * W)))
    mu_best = INF
    per_scale = []
    for i in range(1, scales + 1):
        if mu_best <= float(1 << (i - 1)):
            per_scale.append((i, None, None))
            continue
        w_out = scaled_wadj(graph, hb, eps_f, i, direction="out")
        w_in = scaled_wadj(graph, hb, eps_f, i, direction="in")
        closing = [dict() for _ in range(n)]
        for v in range(n):
            for t, w in sim.out_adj[v]:
                closing[v][t] = scale_edge_weight(w, hb, eps_f, i)
        sched = DirectedSchedule.paper(n, c=c, sample_mul=sample_mul)
        state = phase1_long_cycles(sim, sched, wadj_out=w_out, wadj_in=w_in,
                                   depth_cap=h_star, closing=closing,
                                   phase=f"dw-{i}")
        build_elimination_sets(sim, state, sched, tag=f"rpick-{i}")
        second_phase(sim, state, sched, wadj=w_out, depth_cap=h_star,
                     closing=closing, phase=f"dw-{i}")
        mi = min(state.mu)
        unscaled = float(eps_f * (1 << i)) * mi / (2 * hb) if mi != INF else INF
        per_scale.append((i, mi, unscaled))
        if unscaled < mu_best:
            mu_best = unscaled

    # long branch: cycles with many hops hit the sample w.h.p.
    lg = log2n(n)
    prob = min(sample_mul * lg / hb, 1.0)
    sources = sample_level(sim, prob, "dwl-sample")
    mu_long = INF
    if sources:
        est, _ = bounded_hop_multisource(
            sim, sources, n, eps_f, phase="dw-long", direction="out",
            value_bound=mu_best if mu_best != INF else None)
        sset = set(sources)
        best = [INF] * n
        for v in range(n):
            ev = est[v]
            for t, w in sim.out_adj[v]:
                if t in sset and t != v:
                    d = ev.get(t)
                    if d is not None and d + w < best[v]:
                        best[v] = d + w
        mu_long = convergecast(sim, best, "min", phase="dw-long")[0]
    mu = min(mu_best, mu_long)
    if collect is not None:
        collect["per_scale"] = per_scale
        collect["mu_long"] = mu_long
    return mu, sim.report
