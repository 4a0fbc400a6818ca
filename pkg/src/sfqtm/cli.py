"""Command-line driver."""

import argparse
import logging
import os
import sys

from . import libraries
from .dp_mapper import MappingError
from .netlist_io import ParseError, parse_blif, parse_genlib, write_mapped_blif, write_report
from .network import NetworkError
from .oracle import check_equivalence
from .pipeline import MapOptions, map_network

log = logging.getLogger("sfqtm")


def build_parser():
    p = argparse.ArgumentParser(prog="sfqtm", description="Map a combinational BLIF netlist "
                                "onto an SFQ cell library with path balancing.")
    p.add_argument("--input", required=True, help="combinational BLIF netlist")
    p.add_argument("--lib", required=True,
                   help=f"genlib file, or a bundled library name ({', '.join(libraries.NAMES)})")
    p.add_argument("--output", help="mapped BLIF (default: stdout)")
    p.add_argument("--report", help="JSON Lines report: phase-one record, then final record")
    p.add_argument("-i", dest="iterations", type=int, default=5, help="peephole iterations")
    p.add_argument("-k", dest="k", type=int, default=None, help="cut size (2..6)")
    p.add_argument("--dff-delay", type=float, default=1.0)
    p.add_argument("--dff-area", type=float, default=1.0)
    p.add_argument("--splitter-delay", type=float, default=1.0)
    p.add_argument("--splitter-area", type=float, default=1.0)
    p.add_argument("--balance-outputs", action="store_true",
                   help="pad every primary output to the deepest output level")
    p.add_argument("--baseline", action="store_true",
                   help="balancing-unaware reference: minimum depth, then area")
    p.add_argument("--verify", action="store_true",
                   help="check equivalence with the input before writing")
    return p


def load_library(spec, **cells):
    if not os.path.exists(spec) and spec in libraries.NAMES:
        return libraries.load(spec, **cells)
    with open(spec) as fh:
        return parse_genlib(fh.read(), **cells)


def run(args):
    if args.iterations < 0:
        raise ValueError("-i must be >= 0")
    if args.k is not None and not 2 <= args.k <= 6:
        raise ValueError("-k must be between 2 and 6")
    lib = load_library(args.lib, dff_delay=args.dff_delay, dff_area=args.dff_area,
                       splitter_delay=args.splitter_delay, splitter_area=args.splitter_area)
    with open(args.input) as fh:
        raw = parse_blif(fh.read())
    opts = MapOptions(k=args.k, iterations=args.iterations,
                      balance_outputs=args.balance_outputs, baseline=args.baseline)
    res = map_network(raw, lib, opts)
    if args.verify:
        eq = check_equivalence(raw, res.final)
        if not eq:
            log.error("verification failed on output %s, pattern %s", eq.output, eq.counterexample)
            return 3
    text = write_mapped_blif(res.final)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(write_report(res.phase1.stats) + "\n")
            fh.write(write_report(res.final_stats) + "\n")
    return 0


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (ParseError, MappingError, NetworkError, OSError, ValueError) as exc:
        print(f"sfqtm: error: {exc}", file=sys.stderr)
        return 2
