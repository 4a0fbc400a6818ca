"""Path balancing with DFF chains and fanout legalization with splitter trees."""

from dataclasses import dataclass

from .dp_mapper import balance_cost
from .network import Cell


@dataclass(frozen=True)
class Violation:
    cell: str     # output net of the offending cell, or "PO:<name>"
    gap: int


def insert_dffs(net, balance_outputs=None):
    """Insert a DFF chain on every fanin pin that arrives early.

    Each pin at level ``l`` feeding a clocked cell whose deepest fanin is at
    ``L`` gets ``L - l`` DFFs, placed right before the pin.  With output
    balancing every primary output is raised to the deepest output level.
    """
    if balance_outputs is None:
        balance_outputs = net.balance_outputs
    out = net.copy()
    out.balance_outputs = balance_outputs
    lib_dff = _dff_gate(net)
    lv = out.net_levels()
    added = []
    for cell in out.cells:
        if not (cell.clocked and cell.fanins):
            continue
        levels = [lv[n] for n in cell.fanins]
        top = max(levels)
        for pin, l in enumerate(levels):
            src = cell.fanins[pin]
            for _ in range(top - l):
                q = out.fresh("d")
                added.append(Cell("dff", lib_dff, [src], [q]))
                lv[q] = lv[src] + 1
                src = q
            cell.fanins[pin] = src
    po_dffs = 0
    if balance_outputs and out.outputs:
        top = max(lv[out.po_nets[o]] for o in out.outputs)
        for o in out.outputs:
            src = out.po_nets[o]
            for _ in range(top - lv[src]):
                q = out.fresh("d")
                added.append(Cell("dff", lib_dff, [src], [q]))
                lv[q] = lv[src] + 1
                src = q
                po_dffs += 1
            out.po_nets[o] = src
    out.cells.extend(added)
    out.balanced = True
    out.splitter_legal = False
    out.stats.dff_count = out.count("dff")
    out.stats.po_dff_count = po_dffs
    return out


def _dff_gate(net):
    lib = net.lib
    if lib is not None:
        return lib.dff
    from .netlist_io import builtin_cells
    return builtin_cells()[0]


def _splitter_gate(net):
    lib = net.lib
    if lib is not None:
        return lib.splitter
    from .netlist_io import builtin_cells
    return builtin_cells()[1]


def insert_splitters(net):
    """Drive every multi-sink net through a balanced binary splitter tree."""
    out = net.copy()
    spl = _splitter_gate(net)
    sinks = out.sinks()
    added = []

    def build(src, group):
        # returns nothing; rewires each sink in ``group`` to a leaf of a tree fed by ``src``
        if len(group) == 1:
            _rewire(out, group[0], src)
            return
        a, b = out.fresh("s"), out.fresh("s")
        added.append(Cell("splitter", spl, [src], [a, b]))
        half = (len(group) + 1) // 2
        build(a, group[:half])
        build(b, group[half:])

    for net_name in sorted(sinks):
        group = sinks[net_name]
        if len(group) > 1:
            build(net_name, group)
    out.cells.extend(added)
    out.splitter_legal = True
    out.stats.splitter_count = out.count("splitter")
    return out


def _rewire(net, sink, src):
    if sink[0] == "PO":
        net.po_nets[sink[1]] = src
    else:
        ci, pin = sink
        net.cells[ci].fanins[pin] = src


def remove_splitters(net):
    """Collapse splitter trees back into multi-sink nets."""
    out = net.copy()
    root = {}
    for c in out.cells:
        if c.kind == "splitter":
            for o in c.outputs:
                root[o] = c.fanins[0]

    def find(n):
        while n in root:
            n = root[n]
        return n

    out.cells = [c for c in out.cells if c.kind != "splitter"]
    for c in out.cells:
        c.fanins = [find(n) for n in c.fanins]
    out.po_nets = {o: find(n) for o, n in out.po_nets.items()}
    out.splitter_legal = False
    return out


def check_balanced(net):
    """Every clocked cell whose fanins sit at unequal levels, with the gap."""
    return [Violation(c, g) for c, g in net.balance_violations()]


def check_splitter_legal(net):
    return net.splitter_violations()


def expected_dffs(net):
    """Sum of balance costs over clocked cells of an unbalanced network."""
    lv = net.net_levels()
    total = sum(balance_cost([lv[n] for n in c.fanins])
                for c in net.cells if c.clocked and c.fanins)
    if net.balance_outputs and net.outputs:
        total += balance_cost([lv[net.po_nets[o]] for o in net.outputs])
    return total


def remove_dffs(net):
    """Bypass every DFF, yielding the unbalanced cover underneath."""
    out = net.copy()
    src = {c.outputs[0]: c.fanins[0] for c in out.cells if c.kind == "dff"}

    def find(n):
        while n in src:
            n = src[n]
        return n

    out.cells = [c for c in out.cells if c.kind != "dff"]
    for c in out.cells:
        c.fanins = [find(n) for n in c.fanins]
    out.po_nets = {o: find(n) for o, n in out.po_nets.items()}
    out.balanced = False
    out.stats.dff_count = 0
    out.stats.po_dff_count = 0
    return out
