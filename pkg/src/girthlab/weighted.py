"""Girth approximation for weighted undirected networks.

Three cooperating branches, every one of which only ever reports values
backed by a real cycle:

- short: a weight-scaling grid turns each scale into a bounded-depth
  unweighted problem on the virtual subdivision, solved by a two-level
  estimator (covers cycles with few edges);
- long: bounded-hop distance chains from a sampled source set, exchanged
  with neighbors and closed over crossing edges (covers cycles whose hop
  count is within a constant of the sampling scale h);
- catch-all: an exact depth-doubling sweep that runs only while the best
  value so far is not yet certified against deeper cycles.

The sampled sources also feed the spanner-based multi-source distance
approximation (dis_approx); its composite distances satisfy a distance
contract but are deliberately kept out of the cycle rule, because a
composite estimate path may retrace edges and certify no cycle at all.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import INF, Graph
from .engine import Simulation
from .primitives import (SourceDetectProgram, bounded_hop_multisource, ceil_root_pow,
                         log2n, overlay_spanner, receiver_wadj, scale_edge_weight,
                         scaled_wadj)
from .tree import convergecast
from .unweighted import CrossingBroadcastProgram, sample_level


@dataclass(frozen=True)
class WeightedSchedule:
    k: int
    eps: Fraction
    h: int
    h_star: int
    sample_prob: float
    scales: int
    inner_k: int
    inner_prob: float

    @classmethod
    def paper(cls, n, W, k, eps, c=1.0):
        eps = Fraction(eps).limit_denominator(10 ** 6)
        h = ceil_root_pow(n, k + 1, 2 * k + 1)
        h_star = math.ceil((1 + Fraction(2) / eps) * h)
        prob = min((c + 2) * log2n(n) / h, 1.0)
        scales = math.ceil(math.log2(max(2, h * W)))
        inner_k = math.ceil(12 * (c + 3) * math.sqrt(n) * log2n(n))
        inner_prob = min((c + 3) * log2n(n) / math.sqrt(n), 1.0)
        return cls(k, eps, h, h_star, prob, scales, inner_k, inner_prob)

    @classmethod
    def lean(cls, n, W, k, eps, c=1.0, mul=2.0):
        """Down-scaled constants for round-growth experiments."""
        eps = Fraction(eps).limit_denominator(10 ** 6)
        h = ceil_root_pow(n, k + 1, 2 * k + 1)
        h_star = math.ceil((1 + Fraction(2) / eps) * h)
        prob = min(log2n(n) / h, 1.0)
        scales = math.ceil(math.log2(max(2, h * W)))
        inner_k = max(2, math.ceil(mul * math.sqrt(n)))
        inner_prob = min(mul * log2n(n) / math.sqrt(n), 1.0)
        return cls(k, eps, h, h_star, prob, scales, inner_k, inner_prob)

    @property
    def ratio(self):
        return (2 * self.k - 1) * (1 + float(self.eps))


def scale_weights(graph: Graph, h, eps, i) -> Graph:
    """The i-th scaled graph: every weight w becomes ceil(2*h*w / (eps*2^i))."""
    eps = Fraction(eps).limit_denominator(10 ** 6)
    edges = [(u, v, scale_edge_weight(w, h, eps, i)) for u, v, w in graph.edges]
    W = max((w for _, _, w in edges), default=1)
    return Graph(graph.n, directed=graph.directed, weighted=True, edges=edges, W=W)


def _estimate_virtual(sim, sources, k, wadj, depth_cap, phase):
    """Estimate on the virtual subdivision given by receiver-keyed weights:
    detection tokens crawl edges one virtual hop per round and the crossing
    rule charges the full edge weight."""
    sources = sorted(sources)
    if not sources:
        return INF
    det = sim.run(SourceDetectProgram(sim, sources, k, wadj=wadj,
                                      depth_cap=depth_cap), phase=phase)
    tables = det.tables()
    cross = sim.run(CrossingBroadcastProgram(sim, tables, wcross=wadj), phase=phase)
    got = convergecast(sim, cross.M, "min", phase=phase)
    return got[0]


def bounded_girth_2approx(sim, wadj, h_cap, sched: WeightedSchedule, phase="short"):
    """Depth-capped estimate of the scaled girth: a full-scan level plus one
    sampled level, both as virtual-subdivision estimates.

    Returns M >= girth(G_i); M <= 2*girth(G_i) w.h.p. whenever the scaled
    girth fits inside the depth cap.
    """
    n = sim.n
    m0 = _estimate_virtual(sim, list(range(n)), sched.inner_k, wadj, h_cap,
                           phase=phase)
    if sched.inner_prob >= 1.0:
        # the sampled level equals the full level deterministically
        return m0
    level1 = sample_level(sim, sched.inner_prob, f"{phase}-sample")
    m1 = _estimate_virtual(sim, level1, sched.inner_k, wadj, h_cap, phase=phase)
    return min(m0, m1)


def dis_approx(sim, sources, h, k, eps, phase="dis-approx", est_par=None):
    """Approximate distances from every source to every node.

    Bounded-hop estimates feed a source overlay; a (2k-1)-spanner of it is
    broadcast, and every node splices overlay distances with its own
    estimates. Returns (d_out, parents) with d(s,v) <= d_out[v][s] for all
    pairs, and d_out <= (2k-1)(1+eps)*d(s,v) w.h.p. (when the sample hits
    the canonical h-node shortest-path family).
    """
    if est_par is None:
        est_par = bounded_hop_multisource(sim, sources, 2 * h, eps, phase=phase)
    est, par = est_par
    S = sorted(sources)
    idx = {s: i for i, s in enumerate(S)}
    edges = []
    for a, s in enumerate(S):
        ea = est[s]
        for t in S[a + 1:]:
            d = ea.get(t)
            if d is not None:
                edges.append((s, t, d))
    spanner = overlay_spanner(sim, edges, k, phase=phase)
    nS = len(S)
    D = np.full((nS, nS), np.inf)
    np.fill_diagonal(D, 0.0)
    for u, v, w in spanner:
        iu, iv = idx[u], idx[v]
        if w < D[iu, iv]:
            D[iu, iv] = D[iv, iu] = w
    for j in range(nS):
        np.minimum(D, D[:, j, None] + D[None, j, :], out=D)
    EST = np.full((nS, sim.n), np.inf)
    for v in range(sim.n):
        for s, d in est[v].items():
            EST[idx[s], v] = d
    d_out = [dict() for _ in range(sim.n)]
    parents = [dict() for _ in range(sim.n)]
    for a, s in enumerate(S):
        tot = D[a][:, None] + EST
        amin = np.argmin(tot, axis=0)
        vals = tot[amin, np.arange(sim.n)]
        for v in range(sim.n):
            val = vals[v]
            if val < np.inf:
                d_out[v][s] = float(val)
                parents[v][s] = par[v][S[amin[v]]]
    return d_out, parents


def _chain_crossing(sim, est, par, graph, phase):
    """Crossing-edge rule over per-source estimate chains.

    Sound unconditionally: both chains are simple paths not containing the
    crossing edge, so the closed walk they certify uses it exactly once and
    therefore contains a real cycle of at most the admitted weight.
    """
    tables = []
    for v in range(sim.n):
        rows = sorted((d, s, par[v][s]) for s, d in est[v].items())
        tables.append(rows)
    wc = receiver_wadj(graph, "und")
    cross = sim.run(CrossingBroadcastProgram(sim, tables, wcross=wc), phase=phase)
    got = convergecast(sim, cross.M, "min", phase=phase)
    return got[0]


def adaptive_exact_sweep(sim, sched, m_best, phase="sweep"):
    """Depth-doubling exact estimates on the raw weights.

    A cycle not found at depth cap d has weight > d, so once
    m_best <= ratio * d no deeper cycle can spoil the approximation factor.
    Runs zero passes in the common case where the other branches already
    certified their value.
    """
    graph = sim.graph
    ratio = sched.ratio
    bound = graph.n * graph.max_weight()
    raw = receiver_wadj(graph, "und")
    depth = sched.h_star
    while m_best > ratio * depth and depth <= bound:
        depth *= 2
        m = _estimate_virtual(sim, list(range(sim.n)), sched.inner_k, raw,
                              depth, phase=phase)
        if m < m_best:
            m_best = m
    return m_best


def approx_girth_weighted(graph, k, eps, c=1.0, seed=0, mode="strict",
                          schedule=None, c_b=32.0, collect=None):
    """(2k-1)(1+eps)-approximation of the weighted girth; returns (M, report).

    w(C) <= M holds in every run; the upper bound holds w.h.p. for k >= 2.
    """
    sim = Simulation(graph, seed=seed, mode=mode, c_b=c_b)
    n = sim.n
    W = graph.max_weight()
    sched = schedule or WeightedSchedule.paper(n, W, k, eps, c)
    eps_f = sched.eps

    m_short = INF
    per_scale = []
    for i in range(1, sched.scales + 1):
        # cycles bracketed at scale i weigh >= 2^(i-1); once the running
        # minimum is below that, deeper scales cannot improve it and the
        # bracket scales of lighter cycles have already run
        if m_short <= float(1 << (i - 1)):
            per_scale.append((i, None, None))
            continue
        wadj = scaled_wadj(graph, sched.h, eps_f, i)
        cap_i = sched.h_star
        if m_short != INF:
            # scaled values past this cannot yield anything below m_short
            bound = int(m_short * 2 * sched.h / float(eps_f * (1 << i))) + 1
            cap_i = min(cap_i, bound)
        mi = bounded_girth_2approx(sim, wadj, cap_i, sched,
                                   phase=f"short-{i}")
        unscaled = float(eps_f * (1 << i)) * mi / (2 * sched.h) if mi != INF else INF
        per_scale.append((i, mi, unscaled))
        if unscaled < m_short:
            m_short = unscaled

    sources = sample_level(sim, sched.sample_prob, "wlong-sample")
    m_long = INF
    if sources:
        est_par = bounded_hop_multisource(sim, sources, 2 * sched.h, eps_f,
                                          phase="long",
                                          value_bound=m_short if m_short != INF else None)
        dis_approx(sim, sources, sched.h, k, eps_f, phase="long",
                   est_par=est_par)
        m_long = _chain_crossing(sim, est_par[0], est_par[1], graph, phase="long")

    m = min(m_long, m_short)
    m = adaptive_exact_sweep(sim, sched, m, phase="sweep")
    if collect is not None:
        collect["schedule"] = sched
        collect["sources"] = sources
        collect["m_long"] = m_long
        collect["m_short"] = m_short
        collect["per_scale"] = per_scale
    return m, sim.report
