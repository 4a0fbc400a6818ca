"""End-to-end mapping: subject graph, cuts, DP, recovery, balancing, tuning."""

import time
from dataclasses import dataclass, field, replace

from .balancer import insert_dffs, insert_splitters
from .cuts import DEFAULT_MAX_CUTS, enumerate_cuts
from .dp_mapper import minimize_depth_pb, recover_cover
from .peephole import PeepholeConfig, StageDelayModel, finalize_stats, tune_psd
from .subject_graph import build_subject_graph


@dataclass
class MapOptions:
    k: int = None                 # default: min(6, widest gate)
    iterations: int = 5
    balance_outputs: bool = False
    baseline: bool = False
    max_cuts: int = DEFAULT_MAX_CUTS
    init_fanout_count: int = 2
    max_fanout_count: int = 8
    interconnect_delay: float = 0.0


@dataclass
class MapResult:
    graph: object
    phase1: object
    final: object
    k: int
    trace: list = field(default_factory=list)
    final_stats: object = None      # final network stats with run totals


def default_k(lib):
    return max(2, min(6, lib.max_fanin))


def map_network(raw, lib, opts=None):
    """Map a parsed netlist; returns both the phase-one and the tuned network."""
    t0 = time.perf_counter()
    return map_graph(build_subject_graph(raw), lib, opts, t0)


def map_graph(graph, lib, opts=None, t0=None):
    opts = opts or MapOptions()
    t0 = time.perf_counter() if t0 is None else t0
    k = opts.k or default_k(lib)
    cuts = enumerate_cuts(graph, k, opts.max_cuts)
    mode = "area" if opts.baseline else "dff"
    table = minimize_depth_pb(graph, cuts, lib, mode=mode, balance_outputs=opts.balance_outputs)
    phase1 = insert_splitters(insert_dffs(recover_cover(table)))
    model = StageDelayModel(lib.splitter.delay, opts.interconnect_delay)
    finalize_stats(phase1, model)
    phase1.stats.runtime = time.perf_counter() - t0
    cfg = PeepholeConfig(opts.iterations, opts.init_fanout_count, opts.max_fanout_count)
    trace = []
    final = tune_psd(phase1, cfg, model, trace)
    total = time.perf_counter() - t0
    if final is not phase1:
        final.stats.runtime = total
    stats = replace(final.stats, iterations=len(trace), runtime=total)
    return MapResult(graph, phase1, final, k, trace, stats)
