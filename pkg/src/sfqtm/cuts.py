"""k-feasible cut enumeration by bottom-up merging of fanin cut sets."""

from dataclasses import dataclass

from . import truth
from .subject_graph import AND, PI

DEFAULT_MAX_CUTS = 16


@dataclass(frozen=True)
class Cut:
    leaves: tuple
    function: int   # root's positive phase over the leaves, 2**len(leaves) bits

    @property
    def size(self):
        return len(self.leaves)

    def is_trivial(self, root):
        return self.leaves == (root,)


class CutSet(list):
    """Per-node cut lists; ``cutset[n][0]`` is the trivial cut of node ``n``."""

    def __init__(self, items, k, dropped=0):
        super().__init__(items)
        self.k = k
        self.dropped = dropped


def _sig(leaves):
    s = 0
    for l in leaves:
        s |= 1 << (l & 63)
    return s


def enumerate_cuts(graph, k, max_cuts=DEFAULT_MAX_CUTS):
    """Cut sets for every node.

    Non-trivial cuts are dominance-pruned and, when ``max_cuts`` is not
    ``None``, capped keeping the smallest cuts first (ties by leaf ids).
    """
    if not 2 <= k <= truth.MAX_VARS:
        raise ValueError(f"k must be in [2, {truth.MAX_VARS}], got {k}")
    n_nodes = len(graph)
    # internal form per cut: (leaves, leaf set, signature, 64-bit table)
    work = [None] * n_nodes
    result = [None] * n_nodes
    dropped = 0
    ident = truth.extend(0b10, 1)
    for n in range(n_nodes):
        kind = graph.kind[n]
        triv = ((n,), frozenset((n,)), _sig((n,)), ident)
        if kind == PI:
            work[n] = [triv]
            result[n] = [Cut((n,), 0b10)]
            continue
        if kind != AND:
            work[n] = []
            result[n] = []
            continue
        a, b = graph.fanin0[n], graph.fanin1[n]
        ca = truth.FULL if a & 1 else 0
        cb = truth.FULL if b & 1 else 0
        cands = {}
        for la, sa, ga, ta in work[a >> 1]:
            for lb, sb, gb, tb in work[b >> 1]:
                sig = ga | gb
                if bin(sig).count("1") > k:
                    continue
                u = sa | sb
                if len(u) > k:
                    continue
                leaves = tuple(sorted(u))
                if leaves in cands:
                    continue
                tt = truth.stretch(ta ^ ca, la, leaves) & truth.stretch(tb ^ cb, lb, leaves)
                cands[leaves] = (leaves, u, sig, tt)
        kept = []
        for leaves in sorted(cands, key=lambda l: (len(l), l)):
            c = cands[leaves]
            u, sig = c[1], c[2]
            if any((g & ~sig) == 0 and s <= u for _, s, g, _ in kept):
                continue
            kept.append(c)
        if max_cuts is not None and len(kept) > max_cuts:
            dropped += len(kept) - max_cuts
            kept = kept[:max_cuts]
        work[n] = [triv] + kept
        result[n] = [Cut((n,), 0b10)] + [
            Cut(c[0], truth.shrink(c[3], len(c[0]))) for c in kept]
    return CutSet(result, k, dropped)


def cut_function(graph, root, leaves):
    """Function of ``root`` over ``leaves`` by exhaustive cone simulation."""
    leaves = tuple(leaves)
    n = len(leaves)
    mask = truth.table_mask(n)
    val = {leaf: truth.var_table(i, n) for i, leaf in enumerate(leaves)}

    def visit(node):
        if node in val:
            return val[node]
        if graph.kind[node] != AND:
            raise ValueError(f"leaves {leaves} do not form a cut of node {root}")
        a, b = graph.fanin0[node], graph.fanin1[node]
        va = visit(a >> 1) ^ (mask if a & 1 else 0)
        vb = visit(b >> 1) ^ (mask if b & 1 else 0)
        val[node] = va & vb
        return val[node]

    return visit(root)
