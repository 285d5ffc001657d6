"""Round-synchronous network simulation and girth approximation algorithms,
with exact oracles and lower-bound instance generators."""

from .graphs import INF, Graph, GraphError, GraphFormatError, parse_graph, read_graph, write_graph
from .engine import Bandwidth, BandwidthExceeded, MessageCost, RoundCapExceeded, RoundReport, Simulation
from .oracle import exact_girth, exact_girth_bruteforce, hop_diameter, hop_limited_distances
from .generators import generate, planted_cycle, subdivision
from .unweighted import ScaleSchedule, approx_girth_unweighted, estimate
from .weighted import WeightedSchedule, approx_girth_weighted, dis_approx, scale_weights
from .directed import DirectedSchedule, approx_girth_directed, approx_girth_directed_weighted, eliminates
from .lowerbound import GapViolation, HostBipartite, LowerBoundInstance, build_instance, host_bipartite, verify_gap
from .harness import ExperimentConfig, run_experiment

__all__ = [
    "INF", "Graph", "GraphError", "GraphFormatError", "parse_graph",
    "read_graph", "write_graph", "Bandwidth", "BandwidthExceeded",
    "MessageCost", "RoundCapExceeded", "RoundReport", "Simulation",
    "exact_girth", "exact_girth_bruteforce", "hop_diameter",
    "hop_limited_distances", "generate", "planted_cycle", "subdivision",
    "ScaleSchedule", "approx_girth_unweighted", "estimate",
    "WeightedSchedule", "approx_girth_weighted", "dis_approx", "scale_weights",
    "DirectedSchedule", "approx_girth_directed",
    "approx_girth_directed_weighted", "eliminates", "GapViolation",
    "HostBipartite", "LowerBoundInstance", "build_instance", "host_bipartite",
    "verify_gap", "ExperimentConfig", "run_experiment",
]
