"""Experiment runner: seeded trials, oracle comparison, CSV rows, summaries,
and doubling fits. Trials are independent simulations and may run in a
process pool; rows are emitted in seed order either way.
"""
from __future__ import annotations

import math
import multiprocessing as mp
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .graphs import INF, Graph, read_graph
from .engine import BandwidthExceeded, Simulation
from . import generators
from .oracle import exact_girth, hop_diameter
from .unweighted import ScaleSchedule, approx_girth_unweighted
from .weighted import WeightedSchedule, approx_girth_weighted
from .directed import (DirectedSchedule, approx_girth_directed,
                       approx_girth_directed_weighted)

CSV_SCHEMA = "1"
CSV_HEADER = ("schema,instance,n,m,D,algorithm,params,seed,M,g,ratio,"
              "rounds,max_bits,wall_ms")

ALGORITHMS = ("unweighted", "weighted", "directed", "directed-weighted")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    algo: str
    gen: str = None
    input_file: str = None
    trials: int = 1
    seed: int = 0
    f: int = 2
    k: int = 2
    eps: float = 0.5
    c: float = None
    mode: str = "strict"
    c_b: float = 32.0
    round_cap: int = 5_000_000
    oracle_budget: int = 5000
    lean: bool = False
    jobs: int = 1

    def validate(self):
        if self.algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algo!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.gen is None and self.input_file is None:
            raise ConfigError("need --gen or --input")
        if self.algo == "unweighted" and self.f < 1:
            raise ConfigError("f must be >= 1")
        if self.algo == "weighted" and self.k < 2:
            raise ConfigError("k must be >= 2 for the weighted algorithm")
        if "weighted" in self.algo and not self.eps > 0:
            raise ConfigError("eps must be > 0")
        if self.mode not in ("strict", "accounting"):
            raise ConfigError(f"bad mode {self.mode!r}")
        return self

    def resolved(self):
        c = self.c if self.c is not None else (4.0 if self.algo.startswith("directed") else 1.0)
        return {**self.__dict__, "c": c}


def parse_gen_spec(spec):
    """'kind:key=val,key=val' with ints/floats/flags auto-coerced."""
    kind, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            if not item:
                continue
            key, _, val = item.partition("=")
            if val == "":
                raise ConfigError(f"bad generator item {item!r} in {spec!r}")
            try:
                params[key] = int(val)
            except ValueError:
                try:
                    params[key] = float(val)
                except ValueError:
                    params[key] = val
    return kind, params


def make_instance(gen_spec, seed, input_file=None):
    """Returns (graph, meta); meta carries the certified girth when known."""
    if input_file is not None:
        return read_graph(input_file), {}
    kind, params = parse_gen_spec(gen_spec)
    if kind == "planted":
        p = dict(params)
        rng = random.Random(f"harness|{seed}")
        gmin = p.pop("gmin", None)
        gmax = p.pop("gmax", None)
        if gmin is not None:
            p["girth"] = rng.randint(gmin, gmax if gmax is not None else gmin)
        hmin = p.pop("hmin", None)
        hmax = p.pop("hmax", None)
        if hmin is not None:
            p["cycle_hops"] = rng.randint(hmin, hmax if hmax is not None else hmin)
            p.setdefault("girth", rng.randint(p["cycle_hops"],
                                              3 * p["cycle_hops"]))
        extra = p.pop("extra", None)
        if extra is not None:
            p["extra_edges"] = int(extra * p["n"]) if extra < 1 else int(extra)
        p["directed"] = bool(p.pop("directed", 0))
        p["weighted"] = bool(p.pop("weighted", 0))
        graph, girth, cyc = generators.planted_cycle(seed=seed, **p)
        return graph, {"girth": girth, "cycle": cyc}
    if kind == "sparse":
        p = dict(params)
        p["directed"] = bool(p.pop("directed", 0))
        p["weighted"] = bool(p.pop("weighted", 0))
        return generators.random_sparse(p.pop("n"), p.pop("deg", 3.0),
                                        seed=seed, **p), {}
    if kind == "uniform":
        p = dict(params)
        p["directed"] = bool(p.pop("directed", 0))
        p["weighted"] = bool(p.pop("weighted", 0))
        return generators.uniform_random(p.pop("n"), p.pop("p"), seed=seed, **p), {}
    if kind == "dag":
        return generators.random_dag(params["n"], params.get("p", 0.05),
                                     seed=seed), {}
    if kind == "tree":
        return generators.random_tree(params["n"], seed=seed), {}
    if kind == "grid":
        return generators.grid(params["rows"], params["cols"]), {}
    if kind == "cycle-chords":
        return generators.cycle_plus_chords(params["n"], params.get("chords", 0),
                                            seed=seed,
                                            directed=bool(params.get("directed", 0))), {}
    raise ConfigError(f"unknown generator kind {kind!r}")


def _lean_schedule(cfg, graph):
    n = graph.n
    if cfg["algo"] == "unweighted":
        return ScaleSchedule.lean(n, cfg["f"], cfg["c"])
    if cfg["algo"] == "weighted":
        return WeightedSchedule.lean(n, graph.max_weight(), cfg["k"], cfg["eps"],
                                     cfg["c"])
    return DirectedSchedule.lean(n)


def run_trial(payload):
    """One seeded trial: build instance, run algorithm, compare to oracle."""
    cfg, trial = payload
    seed = cfg["seed"] + trial
    graph, meta = make_instance(cfg["gen"], seed, cfg["input_file"])
    algo = cfg["algo"]
    sched = _lean_schedule(cfg, graph) if cfg["lean"] else None
    t0 = time.perf_counter()
    aborted = False
    try:
        if algo == "unweighted":
            M, report = approx_girth_unweighted(
                graph, cfg["f"], cfg["c"], seed=seed, mode=cfg["mode"],
                schedule=sched, c_b=cfg["c_b"])
        elif algo == "weighted":
            M, report = approx_girth_weighted(
                graph, cfg["k"], cfg["eps"], cfg["c"], seed=seed,
                mode=cfg["mode"], schedule=sched, c_b=cfg["c_b"])
        elif algo == "directed":
            M, report = approx_girth_directed(
                graph, cfg["c"], seed=seed, mode=cfg["mode"], schedule=sched,
                c_b=cfg["c_b"])
        else:
            M, report = approx_girth_directed_weighted(
                graph, cfg["eps"], cfg["c"], seed=seed, mode=cfg["mode"],
                c_b=cfg["c_b"])
    except BandwidthExceeded as e:
        return {"aborted": True, "error": str(e), "seed": seed, "trial": trial}
    wall_ms = (time.perf_counter() - t0) * 1000
    g = meta.get("girth")
    if g is None and graph.n <= cfg["oracle_budget"]:
        g, _ = exact_girth(graph)
    D = hop_diameter(graph) if graph.n <= 2000 else ""
    ratio = ""
    violation = False
    if g is not None and g != INF:
        if M == INF:
            ratio = "inf"
        else:
            ratio = f"{M / g:.4f}"
            if M < g - 1e-9:
                violation = True
    params = _param_str(cfg)
    row = {
        "schema": CSV_SCHEMA,
        "instance": f"{cfg['gen'] or cfg['input_file']}#{trial}",
        "n": graph.n, "m": graph.m, "D": D,
        "algorithm": algo, "params": params, "seed": seed,
        "M": _fmt(M), "g": _fmt(g) if g is not None else "",
        "ratio": ratio, "rounds": report.rounds,
        "max_bits": report.max_edge_bits, "wall_ms": f"{wall_ms:.1f}",
        "violation": violation, "aborted": False,
    }
    return row


def _fmt(x):
    if x == INF:
        return "inf"
    if isinstance(x, float):
        return f"{x:.4f}".rstrip("0").rstrip(".")
    return str(x)


def _param_str(cfg):
    algo = cfg["algo"]
    if algo == "unweighted":
        return f"f={cfg['f']};c={_fmt(cfg['c'])}"
    if algo == "weighted":
        return f"k={cfg['k']};eps={_fmt(cfg['eps'])};c={_fmt(cfg['c'])}"
    if algo == "directed":
        return f"c={_fmt(cfg['c'])}"
    return f"eps={_fmt(cfg['eps'])};c={_fmt(cfg['c'])}"


def run_experiment(config: ExperimentConfig, out_path=None, jobs=None):
    """Run all trials; returns (rows, summary). Nonzero-exit conditions are
    summarized under 'violations' and 'aborts'."""
    config.validate()
    cfg = config.resolved()
    jobs = jobs or config.jobs
    payloads = [(cfg, t) for t in range(config.trials)]
    if jobs > 1 and config.trials > 1:
        with mp.Pool(jobs) as pool:
            rows = list(pool.imap(run_trial, payloads, chunksize=1))
    else:
        rows = [run_trial(p) for p in payloads]
    summary = summarize(rows)
    if out_path:
        write_rows(rows, out_path)
    return rows, summary


def write_rows(rows, path):
    with open(path, "w") as f:
        f.write(CSV_HEADER + "\n")
        for r in rows:
            if r.get("aborted"):
                f.write(f"{CSV_SCHEMA},ABORTED,,,,,,{r['seed']},,,,,,\n")
                continue
            f.write(",".join(str(r[c]) for c in
                             ("schema", "instance", "n", "m", "D", "algorithm",
                              "params", "seed", "M", "g", "ratio", "rounds",
                              "max_bits", "wall_ms")) + "\n")


def strip_wall_time(csv_text):
    return "\n".join(line.rsplit(",", 1)[0] for line in csv_text.splitlines())


def summarize(rows):
    ok = [r for r in rows if not r.get("aborted")]
    ratios = [float(r["ratio"]) for r in ok
              if r["ratio"] not in ("", "inf")]
    rounds = [r["rounds"] for r in ok]
    out = {
        "trials": len(rows),
        "aborts": sum(1 for r in rows if r.get("aborted")),
        "violations": sum(1 for r in ok if r["violation"]),
        "finite_ratios": len(ratios),
    }
    if ratios:
        qs = np.quantile(ratios, [0.5, 0.9, 1.0])
        out.update(ratio_p50=round(float(qs[0]), 4),
                   ratio_p90=round(float(qs[1]), 4),
                   ratio_max=round(float(qs[2]), 4))
    if rounds:
        qs = np.quantile(rounds, [0.5, 0.9, 1.0])
        out.update(rounds_p50=int(qs[0]), rounds_p90=int(qs[1]),
                   rounds_max=int(qs[2]))
    return out


def fit_round_exponent(samples, bootstrap=200, seed=0):
    """Least-squares slope of log2(rounds) vs log2(n) with a bootstrap CI.

    samples: iterable of (n, rounds). Returns (slope, lo, hi).
    """
    pts = [(math.log2(n), math.log2(max(1, r))) for n, r in samples]
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    slope = float(np.polyfit(xs, ys, 1)[0])
    rng = np.random.default_rng(seed)
    boots = []
    for _ in range(bootstrap):
        idx = rng.integers(0, len(pts), len(pts))
        if len(set(xs[idx])) < 2:
            continue
        boots.append(float(np.polyfit(xs[idx], ys[idx], 1)[0]))
    if boots:
        lo, hi = np.quantile(boots, [0.05, 0.95])
    else:
        lo = hi = slope
    return slope, float(lo), float(hi)


def doubling_experiment(algo, sizes, seeds, gen_template, lean=True, **params):
    """Measure rounds across sizes (lean constants profile) and fit the slope."""
    samples = []
    for n in sizes:
        for s in seeds:
            cfg = ExperimentConfig(algo=algo, gen=gen_template.format(n=n),
                                   trials=1, seed=s, lean=lean, **params)
            rows, _ = run_experiment(cfg)
            r = rows[0]
            if r.get("aborted"):
                raise BandwidthExceeded((0, 0), 0, 0, 0)
            samples.append((n, r["rounds"]))
    slope, lo, hi = fit_round_exponent(samples)
    return {"samples": samples, "slope": slope, "ci": (lo, hi)}
