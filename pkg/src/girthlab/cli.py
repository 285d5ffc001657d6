"""Command-line interface: exact girth, experiment runs, lower-bound
instances, and round-constant calibration."""
from __future__ import annotations

import argparse
import configparser
import json
import random
import sys
from fractions import Fraction

from .graphs import INF, read_graph
from .engine import Simulation
from .oracle import exact_girth, hop_diameter
from .harness import (ConfigError, ExperimentConfig, fit_round_exponent,
                      run_experiment)
from . import lowerbound as lb
from .generators import random_sparse
from .primitives import source_detection, overlay_spanner


def _apply_config_file(args):
    """Fill unset CLI options from a sectioned key = value file."""
    if not getattr(args, "config", None):
        return args
    cp = configparser.ConfigParser()
    cp.read(args.config)
    types = {"trials": int, "seed": int, "f": int, "k": int, "jobs": int,
             "round_cap": int, "eps": float, "c": float, "c_b": float}
    for section in cp.sections():
        for key, val in cp.items(section):
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                continue
            if getattr(args, attr) is None:
                setattr(args, attr, types.get(attr, str)(val))
            elif attr == "lean" and getattr(args, attr) is False:
                setattr(args, attr, val.lower() in ("1", "true", "yes"))
    return args


def cmd_girth_exact(args):
    graph = read_graph(args.graph)
    value, witness = exact_girth(graph)
    print(f"girth {value if value != INF else 'inf'}")
    if witness is not None:
        print("witness", " ".join(str(v) for v in witness.nodes))
    return 0


def cmd_run(args):
    args = _apply_config_file(args)
    cfg = ExperimentConfig(
        algo=args.algo, gen=args.gen, input_file=args.input,
        trials=args.trials if args.trials is not None else 1,
        seed=args.seed if args.seed is not None else 0,
        f=args.f if args.f is not None else 2,
        k=args.k if args.k is not None else 2,
        eps=args.eps if args.eps is not None else 0.5,
        c=args.c,
        mode=args.mode or "strict",
        c_b=args.c_b if args.c_b is not None else 32.0,
        round_cap=args.round_cap if args.round_cap is not None else 5_000_000,
        lean=args.lean,
        jobs=args.jobs if args.jobs is not None else 1,
    )
    try:
        cfg.validate()
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    if args.print_config:
        print(json.dumps(cfg.resolved(), indent=1, default=str))
        return 0
    rows, summary = run_experiment(cfg, out_path=args.out)
    for key, val in summary.items():
        print(f"{key} = {val}")
    if args.out:
        print(f"rows -> {args.out}")
    if summary["violations"] or summary["aborts"]:
        return 1
    return 0


def cmd_lb_gen(args):
    host = lb.host_bipartite(args.a, args.k, seed=args.seed)
    if args.inputs.startswith("file:"):
        with open(args.inputs[5:]) as f:
            data = json.load(f)
        e_a, e_b = data["e_a"], data["e_b"]
    else:
        e_a, e_b = lb.input_vectors(host, args.inputs, seed=args.seed)
    inst = lb.build_instance(host, args.q, e_a, e_b, mode=args.mode,
                             eps=Fraction(args.eps))
    paths = lb.save_instance(inst, args.out)
    print(f"n={inst.graph.n} m={inst.graph.m} expected={inst.expected()}")
    print("wrote", *paths)
    return 0


def cmd_lb_verify(args):
    inst = lb.load_instance(args.prefix)
    try:
        report = lb.verify_gap(inst)
    except lb.GapViolation as e:
        print(f"GAP VIOLATION: {e}", file=sys.stderr)
        return 1
    for key, val in report.items():
        print(f"{key} = {val}")
    print("certified")
    return 0


def cmd_calibrate(args):
    """Fit the round constants of the primitives on a small grid."""
    sizes = args.sizes or [100, 200, 400]
    print("source detection: rounds vs (k + D)")
    worst_a = 0.0
    for n in sizes:
        graph = random_sparse(n, 4.0, seed=7)
        k = max(2, int(n ** 0.5))
        sim = Simulation(graph, seed=1)
        rng = random.Random(n)
        sources = sorted(rng.sample(range(n), max(2, n // 4)))
        source_detection(sim, sources, k)
        D = hop_diameter(graph)
        a_const = sim.report.rounds / (k + D)
        worst_a = max(worst_a, a_const)
        print(f"  n={n} k={k} D={D} rounds={sim.report.rounds} A={a_const:.2f}")
    print(f"A = {worst_a:.2f}")
    print("spanner size: |H'| vs k * |V|^(1+1/k)")
    worst_c = 0.0
    for n in sizes:
        graph = random_sparse(n, 4.0, seed=9)
        sim = Simulation(graph, seed=2)
        rng = random.Random(n + 1)
        members = sorted(rng.sample(range(n), min(n, 40)))
        edges = [(u, v, ((u * v) % 9) + 1) for i, u in enumerate(members)
                 for v in members[i + 1:] if (u + v) % 3]
        for k in (2, 3):
            sp = overlay_spanner(sim, edges, k)
            bound = k * len(members) ** (1 + 1 / k)
            c_s = len(sp) / bound
            worst_c = max(worst_c, c_s)
            print(f"  n={n} |V_H|={len(members)} k={k} |H'|={len(sp)} C_s={c_s:.2f}")
    print(f"C_s = {worst_c:.2f}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="girthlab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("girth-exact", help="exact girth of a graph file")
    p.add_argument("graph")
    p.set_defaults(func=cmd_girth_exact)

    p = sub.add_parser("run", help="run a girth-approximation experiment")
    p.add_argument("--algo", required=True,
                   choices=["unweighted", "weighted", "directed",
                            "directed-weighted"])
    p.add_argument("--gen", help="generator spec, e.g. planted:n=100,gmin=4,gmax=12")
    p.add_argument("--input", help="graph file instead of a generator")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--f", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--mode", choices=["strict", "accounting"])
    p.add_argument("--c-b", dest="c_b", type=float)
    p.add_argument("--round-cap", dest="round_cap", type=int)
    p.add_argument("--lean", action="store_true",
                   help="down-scaled constants profile (round-growth runs)")
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--config", help="key = value config file with sections")
    p.add_argument("--print-config", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("lb-gen", help="generate a lower-bound instance")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", default="directed-unweighted",
                   choices=["directed-unweighted", "undirected-weighted"])
    p.add_argument("--eps", default="1")
    p.add_argument("--inputs", default="shared-single",
                   help="shared-single|disjoint-full|empty|random:<seed>|file:<path>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_lb_gen)

    p = sub.add_parser("lb-verify", help="verify a lower-bound instance")
    p.add_argument("prefix")
    p.set_defaults(func=cmd_lb_verify)

    p = sub.add_parser("calibrate", help="fit primitive round constants")
    p.add_argument("--sizes", type=int, nargs="*")
    p.set_defaults(func=cmd_calibrate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
