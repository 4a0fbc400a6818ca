"""Mapped network of library gates, DFFs and splitters."""

import heapq
from collections import defaultdict
from dataclasses import dataclass, field

from . import truth


class NetworkError(ValueError):
    pass


CLOCKED = ("gate", "dff")


@dataclass
class Cell:
    kind: str        # "gate" | "dff" | "splitter" | "const"
    gate: object     # LibGate
    fanins: list     # net names in pin order
    outputs: list    # one net, two for splitters

    @property
    def clocked(self):
        return self.kind in CLOCKED


@dataclass
class MapStats:
    gate_count: int = 0
    dff_count: int = 0
    splitter_count: int = 0
    logical_depth: int = 0
    worst_stage_delay: float = 0.0
    psd: float = 0.0
    runtime: float = 0.0
    iterations: int = 0
    po_dff_count: int = 0


@dataclass
class MappedNetwork:
    name: str
    inputs: list
    outputs: list
    cells: list
    po_nets: dict                       # PO name -> driving net
    balanced: bool = False
    splitter_legal: bool = False
    balance_outputs: bool = False
    stats: MapStats = field(default_factory=MapStats)
    lib: object = None                  # CellLibrary supplying DFF/splitter cells
    prefix: str = "n"                   # namespace for generated nets

    def copy(self):
        cells = [Cell(c.kind, c.gate, list(c.fanins), list(c.outputs)) for c in self.cells]
        return MappedNetwork(self.name, list(self.inputs), list(self.outputs), cells,
                             dict(self.po_nets), self.balanced, self.splitter_legal,
                             self.balance_outputs, MapStats(**vars(self.stats)),
                             self.lib, self.prefix)

    def fresh(self, tag):
        """A net name not used anywhere in the network."""
        taken = self.__dict__.get("_taken")
        if taken is None:
            taken = set(self.inputs) | set(self.outputs)
            for c in self.cells:
                taken.update(c.outputs)
            self._taken = taken
        counters = self.__dict__.setdefault("_counters", {})
        i = counters.get(tag, 0)
        while f"{self.prefix}{tag}{i}" in taken:
            i += 1
        counters[tag] = i + 1
        name = f"{self.prefix}{tag}{i}"
        taken.add(name)
        return name

    def drivers(self):
        """net -> index of driving cell (``None`` for primary inputs)."""
        drv = {pi: None for pi in self.inputs}
        for i, c in enumerate(self.cells):
            for o in c.outputs:
                if o in drv:
                    raise NetworkError(f"net {o} has multiple drivers")
                drv[o] = i
        return drv

    def sinks(self):
        """net -> list of sinks; a sink is (cell index, pin) or ("PO", name)."""
        snk = defaultdict(list)
        for i, c in enumerate(self.cells):
            for p, n in enumerate(c.fanins):
                snk[n].append((i, p))
        for po in self.outputs:
            snk[self.po_nets[po]].append(("PO", po))
        return snk

    def topological_cells(self):
        """Cells in topological order, ties broken by output net name."""
        drv = self.drivers()
        indeg = []
        users = defaultdict(list)
        for i, c in enumerate(self.cells):
            deps = {drv[n] for n in c.fanins if drv.get(n) is not None}
            indeg.append(len(deps))
            for d in deps:
                users[d].append(i)
        heap = [(c.outputs[0], i) for i, c in enumerate(self.cells) if indeg[i] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            _, i = heapq.heappop(heap)
            order.append(self.cells[i])
            for u in users[i]:
                indeg[u] -= 1
                if indeg[u] == 0:
                    heapq.heappush(heap, (self.cells[u].outputs[0], u))
        if len(order) != len(self.cells):
            raise NetworkError("mapped network has a cycle")
        return order

    def net_levels(self):
        drv = self.drivers()
        lv = {pi: 0 for pi in self.inputs}
        cells = self.cells
        for net in drv:
            if net in lv:
                continue
            stack = [net]
            while stack:
                top = stack[-1]
                c = cells[drv[top]]
                pending = [n for n in c.fanins if n not in lv]
                if pending:
                    if len(stack) > len(cells) + 1:
                        raise NetworkError("mapped network has a cycle")
                    stack.extend(pending)
                    continue
                stack.pop()
                base = max((lv[n] for n in c.fanins), default=0)
                level = base + 1 if c.clocked else base
                for o in c.outputs:
                    lv[o] = level
        return lv

    def depth(self):
        lv = self.net_levels()
        return max((lv[self.po_nets[o]] for o in self.outputs), default=0)

    def balance_violations(self, levels=None):
        """(cell output, gap) for every clocked cell whose fanins sit at unequal levels."""
        lv = levels or self.net_levels()
        out = []
        for c in self.cells:
            if c.clocked and c.fanins:
                ls = [lv[n] for n in c.fanins]
                if max(ls) != min(ls):
                    out.append((c.outputs[0], max(ls) - min(ls)))
        if self.balance_outputs and self.outputs:
            ls = [lv[self.po_nets[o]] for o in self.outputs]
            top = max(ls)
            out += [(f"PO:{o}", top - l) for o, l in zip(self.outputs, ls) if l != top]
        return out

    def splitter_violations(self):
        drv = self.drivers()
        out = []
        for net, s in self.sinks().items():
            d = drv.get(net)
            kind = "pi" if d is None else self.cells[d].kind
            limit = 1
            if len(s) > limit:
                out.append((net, kind, len(s)))
        return out

    def count(self, kind):
        return sum(1 for c in self.cells if c.kind == kind)

    def simulate_words(self, words, mask):
        val = {pi: words[pi] & mask for pi in self.inputs}
        for c in self.topological_cells():
            if c.kind in ("dff", "splitter"):
                v = val[c.fanins[0]]
                for o in c.outputs:
                    val[o] = v
            else:
                val[c.outputs[0]] = truth.eval_words(
                    c.gate.truth_table, [val[n] for n in c.fanins], mask)
        return {o: val[self.po_nets[o]] for o in self.outputs}
