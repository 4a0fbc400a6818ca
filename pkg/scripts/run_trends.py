"""Benchmark table: default vs --baseline and -i 0 vs -i N on the bundled circuits."""

import argparse
import statistics
import sys
from pathlib import Path

from sfqtm import libraries
from sfqtm.netlist_io import parse_blif, parse_genlib
from sfqtm.pipeline import MapOptions, map_network

ROOT = Path(__file__).resolve().parents[1]


def load_lib(spec):
    if spec in libraries.NAMES:
        return libraries.load(spec)
    return parse_genlib(Path(spec).read_text())


def row(raw, lib, args):
    base = map_network(raw, lib, MapOptions(k=args.k, iterations=0, baseline=True))
    zero = map_network(raw, lib, MapOptions(k=args.k, iterations=0))
    tuned = map_network(raw, lib, MapOptions(k=args.k, iterations=args.iterations))
    return {
        "dff_base": base.phase1.stats.dff_count,
        "dff": zero.phase1.stats.dff_count,
        "depth_base": base.phase1.depth(),
        "depth": zero.phase1.depth(),
        "psd0": zero.final.stats.psd,
        "psd": tuned.final_stats.psd,
        "gates": tuned.final_stats.gate_count,
        "time": tuned.final_stats.runtime,
    }


def pct(new, old):
    return 100.0 * (1 - new / old) if old else 0.0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("blif", nargs="*", help="netlists (default: benchmarks/*.blif)")
    ap.add_argument("--lib", default="mcnc_style", help="bundled library name or genlib path")
    ap.add_argument("-k", type=int, default=None)
    ap.add_argument("-i", dest="iterations", type=int, default=5)
    args = ap.parse_args(argv)
    paths = [Path(p) for p in args.blif] or sorted((ROOT / "benchmarks").glob("*.blif"),
                                                   key=lambda p: int(p.stem[1:]))
    lib = load_lib(args.lib)
    head = (f"{'circuit':<8} {'DFF base':>9} {'DFF':>7} {'dDFF%':>6} {'depth b/d':>10} "
            f"{'PSD i0':>8} {'PSD iN':>8} {'dPSD%':>6} {'gates':>6} {'sec':>6}")
    print(head)
    dff_red, psd_red = [], []
    for path in paths:
        r = row(parse_blif(path.read_text()), lib, args)
        dff_red.append(pct(r["dff"], r["dff_base"]))
        psd_red.append(pct(r["psd"], r["psd0"]))
        print(f"{path.stem:<8} {r['dff_base']:>9} {r['dff']:>7} {dff_red[-1]:>6.1f} "
              f"{r['depth_base']:>4}/{r['depth']:<5} {r['psd0']:>8.1f} {r['psd']:>8.1f} "
              f"{psd_red[-1]:>6.1f} {r['gates']:>6} {r['time']:>6.2f}", flush=True)
    if paths:
        print(f"mean DFF reduction {statistics.mean(dff_red):.1f}%, "
              f"mean PSD reduction {statistics.mean(psd_red):.1f}%")
    return 0


if __name__ == "__main__":
    sys.exit(main())
