"""Boolean matching of cut functions against library gates.

A match binds every gate pin to a distinct cut leaf, optionally through the
leaf's complemented phase, and realizes either the cut function or its
complement (``output_inverted``).
"""

import threading
from dataclasses import dataclass

from . import truth


@dataclass(frozen=True)
class Match:
    gate: object               # LibGate
    leaf_permutation: tuple    # pin i is driven by leaf leaf_permutation[i]
    leaf_phases: tuple         # per leaf: True if the leaf is used complemented
    output_inverted: bool

    @property
    def key(self):
        """Matches with equal keys are interchangeable."""
        return (self.gate.name, self.output_inverted, self.leaf_phases)


class Matcher:
    """Memoized matcher for one library.

    Each gate's table is expanded under every pin permutation and input
    phase assignment once; lookups are then dictionary hits keyed by
    (size, function).
    """

    def __init__(self, lib, input_phases=True):
        self.lib = lib
        self.input_phases = input_phases
        self._lock = threading.Lock()
        self._index = {}
        self._memo = {}
        for g in lib.gates:
            n = g.fanin_count
            if n == 0:
                continue
            phase_sets = range(1 << n) if input_phases else (0,)
            for perm in truth.all_permutations(n):
                base = truth.permute(g.truth_table, perm, n)
                for ph in phase_sets:
                    f = truth.flip_inputs(base, ph, n)
                    leaf_ph = tuple(bool((ph >> i) & 1) for i in range(n))
                    self._index.setdefault((n, f), []).append(
                        Match(g, perm, leaf_ph, False))
                    self._index.setdefault((n, f ^ truth.table_mask(n)), []).append(
                        Match(g, perm, leaf_ph, True))

    def match(self, size, function):
        key = (size, function)
        hit = self._memo.get(key)
        if hit is None:
            hit = tuple(self._index.get(key, ()))
            with self._lock:
                self._memo.setdefault(key, hit)
        return hit

    def distinct(self, size, function):
        """One representative per interchangeable group, deterministic order."""
        key = ("d", size, function)
        hit = self._memo.get(key)
        if hit is None:
            seen = {}
            for m in self.match(size, function):
                seen.setdefault(m.key, m)
            hit = tuple(sorted(seen.values(), key=lambda m: (m.gate.area, m.key)))
            with self._lock:
                self._memo.setdefault(key, hit)
        return hit


_matchers = {}


def match_cut(cut, lib):
    """All matches of ``cut`` against gates whose fanin equals the cut size."""
    m = _matchers.get(id(lib))
    if m is None or m.lib is not lib:
        m = Matcher(lib)
        _matchers[id(lib)] = m
    return list(m.match(cut.size, cut.function))
