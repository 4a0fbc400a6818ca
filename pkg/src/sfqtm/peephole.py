"""Peephole reduction of the product of worst stage delay and depth (PSD).

A stage is one clocked cell together with the splitter tree behind its
output.  The tuner repeatedly picks the worst stage and, when that cell
drives many sinks, replicates it so that every replica drives at most the
current fanout limit.  A move is kept only when the global PSD drops;
otherwise the limit is relaxed by one.
"""

import math
from collections import Counter
from dataclasses import dataclass

from .balancer import insert_dffs, insert_splitters, remove_dffs, remove_splitters


def splitter_levels(fanout):
    """Depth of a balanced binary splitter tree with ``fanout`` leaves."""
    return (fanout - 1).bit_length() if fanout >= 2 else 0


@dataclass
class StageDelayModel:
    splitter_delay: float = 1.0
    interconnect_delay: float = 0.0

    @classmethod
    def for_network(cls, net, interconnect_delay=0.0):
        sd = net.lib.splitter.delay if net.lib is not None else 1.0
        return cls(sd, interconnect_delay)

    def stage(self, cell_delay, fanout):
        return cell_delay + splitter_levels(fanout) * self.splitter_delay + self.interconnect_delay


@dataclass
class PeepholeConfig:
    iterations: int = 5
    init_fanout_count: int = 2
    max_fanout_count: int = 8

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.init_fanout_count < 1:
            raise ValueError("init_fanout_count must be >= 1")
        if self.max_fanout_count < self.init_fanout_count:
            raise ValueError("max_fanout_count must be >= init_fanout_count")


def leaf_fanouts(net):
    """Sinks reached by each net, looking through splitter trees."""
    sinks = net.sinks()
    memo = {}

    def count(n):
        if n in memo:
            return memo[n]
        total = 0
        for s in sinks.get(n, ()):
            if s[0] != "PO" and net.cells[s[0]].kind == "splitter":
                total += sum(count(o) for o in net.cells[s[0]].outputs)
            else:
                total += 1
        memo[n] = total
        return total

    return {n: count(n) for n in list(sinks)}


def stage_delays(net, model=None):
    """Stage delay of every clocked cell, keyed by cell index."""
    model = model or StageDelayModel.for_network(net)
    fo = leaf_fanouts(net)
    return {i: model.stage(c.gate.delay, fo.get(c.outputs[0], 0))
            for i, c in enumerate(net.cells) if c.clocked}


def stage_delay(net, cell, model=None):
    model = model or StageDelayModel.for_network(net)
    return model.stage(cell.gate.delay, leaf_fanouts(net).get(cell.outputs[0], 0))


def worst_stage_delay(net, model=None):
    return max(stage_delays(net, model).values(), default=0.0)


def psd(net, model=None):
    depth = net.depth()
    if depth == 0:
        return 0.0
    return worst_stage_delay(net, model) * depth


def finalize_stats(net, model=None):
    """Fill gate/DFF/splitter counts, depth, worst stage delay and PSD."""
    st = net.stats
    st.gate_count = sum(1 for c in net.cells if c.kind in ("gate", "const"))
    st.dff_count = net.count("dff")
    st.splitter_count = net.count("splitter")
    st.logical_depth = net.depth()
    st.worst_stage_delay = worst_stage_delay(net, model)
    st.psd = st.worst_stage_delay * st.logical_depth
    return net


class _Workspace:
    """Unbalanced cover with incrementally maintained stage delays.

    After balancing with per-pin DFF chains a gate's fanout equals the
    number of sink pins on its net in the unbalanced cover, and every DFF
    drives exactly one sink; so stages can be tracked here without
    rebuilding the balanced network.
    """

    def __init__(self, net, model, dff_delay):
        self.net = net
        self.model = model
        self.dff_delay = dff_delay
        self.driver = {}
        for i, c in enumerate(net.cells):
            self.driver[c.outputs[0]] = i
        self.fanout = Counter()
        for c in net.cells:
            for n in c.fanins:
                self.fanout[n] += 1
        for o in net.outputs:
            self.fanout[net.po_nets[o]] += 1
        self.stage = {}
        self.hist = Counter()
        for i, c in enumerate(net.cells):
            if c.clocked:
                self._set(i, self._compute(i))
        if dff_delay is not None:
            self.hist[model.stage(dff_delay, 1)] += 1

    def _compute(self, i):
        c = self.net.cells[i]
        return self.model.stage(c.gate.delay, self.fanout[c.outputs[0]])

    def _set(self, i, value):
        old = self.stage.get(i)
        if old is not None:
            self.hist[old] -= 1
            if not self.hist[old]:
                del self.hist[old]
        self.stage[i] = value
        self.hist[value] += 1

    def worst(self):
        return max(self.hist)

    def worst_cell(self):
        """Worst stage; ties go to higher fanout, then lower cell index."""
        top = self.worst()
        best = None
        for i, d in self.stage.items():
            if d == top:
                key = (-self.fanout[self.net.cells[i].outputs[0]], i)
                if best is None or key < best:
                    best = key
        return None if best is None else best[1]

    def sinks_of(self, n):
        out = []
        for i, c in enumerate(self.net.cells):
            for p, f in enumerate(c.fanins):
                if f == n:
                    out.append((i, p))
        out += [("PO", o) for o in self.net.outputs if self.net.po_nets[o] == n]
        return out

    def evaluate(self, i, replicas):
        """Worst stage delay if cell ``i`` were split into ``replicas`` copies."""
        c = self.net.cells[i]
        s = self.fanout[c.outputs[0]]
        hist = Counter(self.hist)

        def change(j, new):
            old = self.stage[j]
            hist[old] -= 1
            hist[new] += 1

        change(i, self.model.stage(c.gate.delay, math.ceil(s / replicas)))
        for r in range(1, replicas):
            hist[self.model.stage(c.gate.delay, s // replicas + (r < s % replicas))] += 1
        for n, uses in Counter(c.fanins).items():
            j = self.driver.get(n)
            if j is not None and self.net.cells[j].clocked:
                grown = self.fanout[n] + (replicas - 1) * uses
                change(j, self.model.stage(self.net.cells[j].gate.delay, grown))
        return max(k for k, v in hist.items() if v > 0)

    def best_move(self, i, limit):
        s = self.fanout[self.net.cells[i].outputs[0]]
        if s <= 1:
            return None
        best = None
        for r in range(max(2, math.ceil(s / limit)), s + 1):
            w = self.evaluate(i, r)
            if best is None or w < best[0]:
                best = (w, r)
        return best

    def apply(self, i, replicas):
        from .network import Cell

        net = self.net
        c = net.cells[i]
        sinks = self.sinks_of(c.outputs[0])
        s = len(sinks)
        base, extra = divmod(s, replicas)
        groups, at = [], 0
        for r in range(replicas):
            size = base + (r < extra)
            groups.append(sinks[at:at + size])
            at += size
        for r in range(1, replicas):
            name = net.fresh("r")
            net.cells.append(Cell("gate", c.gate, list(c.fanins), [name]))
            j = len(net.cells) - 1
            self.driver[name] = j
            for sink in groups[r]:
                if sink[0] == "PO":
                    net.po_nets[sink[1]] = name
                else:
                    net.cells[sink[0]].fanins[sink[1]] = name
            self.fanout[name] = len(groups[r])
            self._set(j, self._compute(j))
            for n in c.fanins:
                self.fanout[n] += 1
        self.fanout[c.outputs[0]] = len(groups[0])
        self._set(i, self._compute(i))
        for n in set(c.fanins):
            j = self.driver.get(n)
            if j is not None and net.cells[j].clocked:
                self._set(j, self._compute(j))


def tune_psd(net, cfg=None, model=None, trace=None):
    """Iterative PSD reduction on a balanced, splitter-legal network.

    Returns the input object itself when no move is accepted, so with zero
    iterations the result is exactly the phase-one network.  ``trace``, if
    given, receives one dict per iteration.
    """
    cfg = cfg or PeepholeConfig()
    if cfg.iterations == 0:
        return net
    model = model or StageDelayModel.for_network(net)
    base = remove_dffs(remove_splitters(net))
    depth = base.depth()
    has_dffs = net.count("dff") > 0
    dff_delay = None
    if has_dffs:
        dff_delay = next(c.gate.delay for c in net.cells if c.kind == "dff")
    ws = _Workspace(base, model, dff_delay)
    current = ws.worst() * depth
    limit = cfg.init_fanout_count
    accepted = 0
    for it in range(cfg.iterations):
        rec = {"iteration": it, "limit": limit, "psd": current, "accepted": False}
        if limit > cfg.max_fanout_count:
            rec["skipped"] = True
            if trace is not None:
                trace.append(rec)
            continue
        i = ws.worst_cell()
        move = ws.best_move(i, limit) if i is not None else None
        if move is not None and move[0] * depth < current:
            ws.apply(i, move[1])
            current = ws.worst() * depth
            accepted += 1
            rec.update(accepted=True, cell=base.cells[i].outputs[0], replicas=move[1], psd=current)
        else:
            limit += 1
        if trace is not None:
            trace.append(rec)
    if not accepted:
        return net
    out = insert_splitters(insert_dffs(base, net.balance_outputs))
    # duplication keeps every level, so depth and the tracked worst stage carry over
    st = out.stats
    st.gate_count = sum(1 for c in out.cells if c.kind in ("gate", "const"))
    st.logical_depth = depth
    st.worst_stage_delay = ws.worst()
    st.psd = st.worst_stage_delay * depth
    st.runtime = net.stats.runtime
    out.stats.iterations = cfg.iterations
    return out
