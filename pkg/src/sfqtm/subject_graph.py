"""Structurally hashed AND graph with complemented edges.

Literals are ints: ``2 * node + complement``.  Node 0 is the constant-one
node, so literal 0 is TRUE and literal 1 is FALSE.
"""

import logging
from dataclasses import dataclass

from .netlist_io import RawNetlist

log = logging.getLogger(__name__)

CONST1, PI, AND = 0, 1, 2
TRUE, FALSE = 0, 1


def lit(node, compl=False):
    return 2 * node + int(compl)


def lit_node(l):
    return l >> 1


def lit_compl(l):
    return l & 1


class SubjectGraph:
    def __init__(self, name="top"):
        self.name = name
        self.kind = [CONST1]
        self.fanin0 = [-1]
        self.fanin1 = [-1]
        self.inputs = []        # node ids
        self.input_names = []
        self.outputs = []       # (literal, name)
        self.name_map = {}      # net name -> literal
        self._strash = {}

    def __len__(self):
        return len(self.kind)

    @property
    def num_ands(self):
        return sum(1 for k in self.kind if k == AND)

    def and_nodes(self):
        return [n for n, k in enumerate(self.kind) if k == AND]

    def add_pi(self, name):
        n = len(self.kind)
        self.kind.append(PI)
        self.fanin0.append(-1)
        self.fanin1.append(-1)
        self.inputs.append(n)
        self.input_names.append(name)
        self.name_map[name] = lit(n)
        return lit(n)

    def add_and(self, a, b):
        if a > b:
            a, b = b, a
        if a == FALSE or a == b ^ 1:
            return FALSE
        if a == TRUE or a == b:
            return b
        key = (a, b)
        hit = self._strash.get(key)
        if hit is not None:
            return hit
        n = len(self.kind)
        self.kind.append(AND)
        self.fanin0.append(a)
        self.fanin1.append(b)
        self._strash[key] = lit(n)
        return lit(n)

    def add_or(self, a, b):
        return self.add_and(a ^ 1, b ^ 1) ^ 1

    def add_and_balanced(self, lits):
        if not lits:
            return TRUE
        level = list(lits)
        while len(level) > 1:
            nxt = [self.add_and(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0]

    def add_or_balanced(self, lits):
        if not lits:
            return FALSE
        return self.add_and_balanced([l ^ 1 for l in lits]) ^ 1

    def add_output(self, l, name):
        self.outputs.append((l, name))

    def fanins(self, n):
        if self.kind[n] != AND:
            return ()
        return (self.fanin0[n], self.fanin1[n])

    def fanout_counts(self):
        counts = [0] * len(self.kind)
        for n in self.and_nodes():
            counts[self.fanin0[n] >> 1] += 1
            counts[self.fanin1[n] >> 1] += 1
        for l, _ in self.outputs:
            counts[l >> 1] += 1
        return counts

    def simulate_words(self, words, mask):
        """Bit-parallel simulation; ``words`` maps input names to ints."""
        val = [mask] + [0] * (len(self.kind) - 1)
        for n, name in zip(self.inputs, self.input_names):
            val[n] = words[name] & mask
        for n in range(1, len(self.kind)):
            if self.kind[n] == AND:
                a, b = self.fanin0[n], self.fanin1[n]
                va = val[a >> 1] ^ (mask if a & 1 else 0)
                vb = val[b >> 1] ^ (mask if b & 1 else 0)
                val[n] = va & vb
        return {name: val[l >> 1] ^ (mask if l & 1 else 0) for l, name in self.outputs}

    def check(self):
        """Assert structural invariants; used by tests."""
        seen = set()
        for n, k in enumerate(self.kind):
            if k == AND:
                a, b = self.fanin0[n], self.fanin1[n]
                assert (a >> 1) < n and (b >> 1) < n
                assert (a, b) not in seen
                seen.add((a, b))
            elif k == PI:
                assert self.fanin0[n] == -1


def build_subject_graph(net: RawNetlist):
    """Decompose cover tables into a balanced, hashed AND graph."""
    g = SubjectGraph(net.model_name)
    for name in net.inputs:
        g.add_pi(name)
    for t in net.tables:
        cubes = []
        for cube, _ in t.rows:
            lits = []
            for ch, src in zip(cube, t.inputs):
                if ch == "1":
                    lits.append(g.name_map[src])
                elif ch == "0":
                    lits.append(g.name_map[src] ^ 1)
            cubes.append(g.add_and_balanced(lits))
        f = g.add_or_balanced(cubes)
        if t.rows and t.rows[0][1] == "0":
            f ^= 1
        if f >> 1 == 0:
            log.warning("net %s folds to constant %d", t.output, int(f == TRUE))
        g.name_map[t.output] = f
    for o in net.outputs:
        g.add_output(g.name_map[o], o)
    return g


def simulate(graph, pattern):
    """Single-pattern simulation: ``pattern`` maps input names to bools."""
    words = {k: int(bool(v)) for k, v in pattern.items()}
    return {k: bool(v) for k, v in graph.simulate_words(words, 1).items()}


@dataclass
class LevelMap:
    level: dict
    depth: int


def compute_levels(net):
    """Logic levels of a subject graph or a mapped network.

    Splitters and constants do not add a level; every clocked cell
    (library gate or DFF) sits one level above its deepest fanin.
    """
    if isinstance(net, SubjectGraph):
        lv = [0] * len(net.kind)
        for n in range(len(net.kind)):
            if net.kind[n] == AND:
                lv[n] = 1 + max(lv[net.fanin0[n] >> 1], lv[net.fanin1[n] >> 1])
        depth = max((lv[l >> 1] for l, _ in net.outputs), default=0)
        return LevelMap(dict(enumerate(lv)), depth)
    lv = net.net_levels()
    depth = max((lv[net.po_nets[o]] for o in net.outputs), default=0)
    return LevelMap(lv, depth)
