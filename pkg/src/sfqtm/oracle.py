"""Brute-force reference implementations for tests.

Nothing here reuses the mapper's cut, matching or DP code.  A *cover*
realizes every needed signal ``(node, phase)`` either by a library gate
over a cut of the node (cut function equal to the gate under some pin
permutation and input phases, possibly complemented) or by one inverter
fed from a gate realization of the opposite phase.  Primary inputs are
level-0 signals; their complement needs an inverter.
"""

import itertools
import random
from dataclasses import dataclass

AND, PI = 2, 1


class OracleTooLarge(RuntimeError):
    pass


@dataclass
class OracleResult:
    min_depth: int
    min_dffs_at_min_depth: int
    witness: list           # (signal, leaf signals, gate name)
    exact_sharing: bool     # False when the DFF count is the tree-unfolded value


# ---------------------------------------------------------------------------
# cuts and matches


def _cone(graph, root):
    seen, stack = set(), [root]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        if graph.kind[n] == AND:
            stack += [graph.fanin0[n] >> 1, graph.fanin1[n] >> 1]
    return seen


def _is_cut(graph, root, leaves):
    stack, seen = [root], set()
    while stack:
        n = stack.pop()
        if n in leaves or n in seen:
            continue
        seen.add(n)
        if graph.kind[n] != AND:
            return False
        stack += [graph.fanin0[n] >> 1, graph.fanin1[n] >> 1]
    return True


def brute_cuts(graph, root, k):
    """All minimal non-trivial cuts of ``root`` with at most ``k`` leaves."""
    if graph.kind[root] != AND:
        return []
    cand = sorted(_cone(graph, root) - {root, 0})
    found = []
    for size in range(1, k + 1):
        for combo in itertools.combinations(cand, size):
            s = set(combo)
            if any(set(f) <= s for f in found):
                continue
            if _is_cut(graph, root, s):
                found.append(combo)
    return found


def cone_table(graph, root, leaves):
    """Truth table of ``root`` over ``leaves``; bit ``x`` holds the value when leaf j = bit j of x."""
    n = len(leaves)
    out = 0
    for x in range(1 << n):
        val = {leaf: (x >> j) & 1 for j, leaf in enumerate(leaves)}

        def ev(m):
            if m not in val:
                a, b = graph.fanin0[m], graph.fanin1[m]
                val[m] = (ev(a >> 1) ^ (a & 1)) & (ev(b >> 1) ^ (b & 1))
            return val[m]

        out |= ev(root) << x
    return out


def brute_matches(lib, size, table):
    """Every (gate, pin->leaf permutation, leaf phases, output inverted) realizing ``table``."""
    full = (1 << (1 << size)) - 1
    out = []
    for g in lib.gates:
        if len(g.pins) != size or size == 0:
            continue
        for perm in itertools.permutations(range(size)):
            for phases in itertools.product((False, True), repeat=size):
                t = 0
                for x in range(1 << size):
                    v = [((x >> j) & 1) ^ phases[j] for j in range(size)]
                    idx = sum(v[perm[i]] << i for i in range(size))
                    t |= ((g.truth_table >> idx) & 1) << x
                if t == table:
                    out.append((g, perm, phases, False))
                if t ^ full == table:
                    out.append((g, perm, phases, True))
    return out


def _options(graph, lib, k):
    """signal -> list of (gate name, leaf signals); inverter options are tagged."""
    inv = min((g for g in lib.gates if len(g.pins) == 1 and g.truth_table & 3 == 1),
              key=lambda g: (g.area, g.name), default=None)
    opts = {}
    for n in range(1, len(graph.kind)):
        if graph.kind[n] == PI:
            opts[(n, 0)] = []
            opts[(n, 1)] = [("inv", inv.name, ((n, 0),))] if inv else []
            continue
        if graph.kind[n] != AND:
            continue
        direct = {0: set(), 1: set()}
        for leaves in brute_cuts(graph, n, k):
            t = cone_table(graph, n, leaves)
            for g, _perm, phases, out_inv in brute_matches(lib, len(leaves), t):
                sig = tuple((leaf, int(p)) for leaf, p in zip(leaves, phases))
                direct[int(out_inv)].add((g.name, sig))
        for ph in (0, 1):
            opts[(n, ph)] = [("gate", name, sig) for name, sig in sorted(direct[ph])]
            if inv and direct[1 - ph]:
                opts[(n, ph)].append(("inv", inv.name, ((n, 1 - ph),)))
    return opts


# ---------------------------------------------------------------------------
# tree-unfolded outcome sets


def _outcomes(graph, opts):
    """signal -> {level: (min dffs, witness)} treating every use as a private copy."""
    best = {}
    direct_only = {}
    for n in range(1, len(graph.kind)):
        for ph in (0, 1):
            s = (n, ph)
            if s not in opts:
                continue
            table = {}
            if graph.kind[n] == PI and ph == 0:
                table[0] = (0, [])
            for kind, name, leaves in opts[s]:
                if kind == "inv":
                    continue
                if any(l not in best or not best[l] for l in leaves):
                    continue
                for combo in itertools.product(*(sorted(best[l].items()) for l in leaves)):
                    levels = [lv for lv, _ in combo]
                    top = max(levels)
                    d = sum(c[1][0] for c in combo) + sum(top - lv for lv in levels)
                    wit = [(s, leaves, name)] + [w for c in combo for w in c[1][1]]
                    if top + 1 not in table or d < table[top + 1][0]:
                        table[top + 1] = (d, wit)
            direct_only[s] = dict(table)
        for ph in (0, 1):
            s = (n, ph)
            if s not in opts:
                continue
            table = dict(direct_only[s])
            for kind, name, leaves in opts[s]:
                if kind != "inv":
                    continue
                for lv, (d, wit) in direct_only.get(leaves[0], {}).items():
                    if lv + 1 not in table or d < table[lv + 1][0]:
                        table[lv + 1] = (d, [(s, leaves, name)] + wit)
            best[s] = table
    return best


def _output_signals(graph):
    return [((l >> 1), l & 1) for l, _ in graph.outputs if l >> 1]


def is_tree(graph):
    fo = [0] * len(graph.kind)
    for n in range(len(graph.kind)):
        if graph.kind[n] == AND:
            fo[graph.fanin0[n] >> 1] += 1
            fo[graph.fanin1[n] >> 1] += 1
    for l, _ in graph.outputs:
        fo[l >> 1] += 1
    return all(fo[n] <= 1 for n in range(len(graph.kind)) if graph.kind[n] == AND)


def _pick_outputs(best, outs, depth, balance_outputs):
    total, wit = 0, []
    for s in outs:
        cands = []
        for lv, (d, w) in best[s].items():
            if lv <= depth:
                cands.append((d + (depth - lv if balance_outputs else 0), lv, w))
        d, _, w = min(cands, key=lambda c: (c[0], c[1]))
        total += d
        wit += w
    return total, wit


# ---------------------------------------------------------------------------
# full cover enumeration (shared signals realized once)


def cover_cost(graph, cover, balance_outputs=False):
    """Exact (depth, DFFs) of a cover given as signal -> (gate name, leaf signals)."""
    level = {}

    def lv(s):
        if s not in level:
            if s not in cover:
                level[s] = 0          # positive primary input
            else:
                level[s] = 1 + max(lv(l) for l in cover[s][1])
        return level[s]

    outs = _output_signals(graph)
    for s in outs:
        lv(s)
    dffs = 0
    for s, (_, leaves) in cover.items():
        ls = [lv(l) for l in leaves]
        dffs += sum(max(ls) - x for x in ls)
    depth = max((level[s] for s in outs), default=0)
    if balance_outputs:
        dffs += sum(depth - level[s] for s in outs)
    return depth, dffs


def enumerate_covers(graph, lib, k, limit=None):
    """Yield every cover reachable from the outputs, realizing each signal once."""
    opts = _options(graph, lib, k)

    def needed(s):
        return not (graph.kind[s[0]] == PI and s[1] == 0)

    count = [0]

    def rec(pending, cover):
        if not pending:
            count[0] += 1
            if limit is not None and count[0] > limit:
                raise OracleTooLarge(f"more than {limit} covers")
            yield {s: (c[0], c[1]) for s, c in cover.items()}
            return
        # consumers always have larger node ids, so the largest pending
        # signal has received every request it will ever get
        s = max(pending)
        rest = pending - {s}
        for kind, name, leaves in opts[s]:
            if kind == "inv" and leaves[0] in cover and cover[leaves[0]][2] == "inv":
                continue
            cover[s] = (name, leaves, kind)
            need = {l for l in leaves if l not in cover and needed(l)}
            yield from rec(rest | need, cover)
            del cover[s]

    yield from rec({s for s in _output_signals(graph) if needed(s)}, {})


def exhaustive_map(graph, lib, k, balance_outputs=False, exact_dffs=True, limit=200000):
    """Lexicographic (depth, DFFs) optimum over all covers.

    The minimum depth is exact on any graph: giving every signal its own
    fastest realization is itself a consistent cover.  On trees nothing can
    be shared, so the per-level minimum DFF count is exact too.  On other
    graphs ``exact_dffs`` enumerates every min-depth cover (bounded by
    ``limit``); otherwise the tree-unfolded count is reported.
    """
    if sum(1 for x in graph.kind if x == AND) > 25:
        raise OracleTooLarge("oracle limited to 25 AND nodes")
    opts = _options(graph, lib, k)
    best = _outcomes(graph, opts)
    outs = _output_signals(graph)
    for s in outs:
        if not best.get(s):
            raise ValueError(f"signal {s} has no cover")
    depth = max((min(best[s]) for s in outs), default=0)
    dffs, wit = _pick_outputs(best, outs, depth, balance_outputs)
    if is_tree(graph) or not exact_dffs:
        return OracleResult(depth, dffs, wit, is_tree(graph))
    top = None
    for cov in enumerate_covers(graph, lib, k, limit):
        d, f = cover_cost(graph, cov, balance_outputs)
        if d == depth and (top is None or f < top[0]):
            top = (f, [(s, c[1], c[0]) for s, c in sorted(cov.items())])
    return OracleResult(depth, top[0], top[1], True)


def min_depth(graph, lib, k):
    best = _outcomes(graph, _options(graph, lib, k))
    return max((min(best[s]) for s in _output_signals(graph)), default=0)


def unfolded_dffs(graph, lib, k, balance_outputs=False):
    """Minimum DFFs at minimum depth when shared logic is counted once per use."""
    best = _outcomes(graph, _options(graph, lib, k))
    outs = _output_signals(graph)
    depth = max((min(best[s]) for s in outs), default=0)
    return _pick_outputs(best, outs, depth, balance_outputs)[0]


# ---------------------------------------------------------------------------
# equivalence


@dataclass
class Equivalence:
    equivalent: bool
    counterexample: dict = None
    output: str = None
    exhaustive: bool = True

    def __bool__(self):
        return self.equivalent


def _names(x):
    ins = getattr(x, "input_names", None)
    if ins is None:
        ins = x.inputs
    outs = x.outputs
    if outs and isinstance(outs[0], tuple):
        outs = [name for _, name in outs]
    return list(ins), list(outs)


def check_equivalence(a, b, samples=100000, seed=0, exhaustive_limit=16):
    """Compare two networks by simulation over all or ``samples`` random patterns."""
    ia, oa = _names(a)
    ib, ob = _names(b)
    if set(ia) != set(ib) or set(oa) != set(ob):
        raise ValueError("networks have different primary inputs or outputs")
    n = len(ia)
    if n <= exhaustive_limit:
        width = 1 << n
        words = {}
        for i, name in enumerate(ia):
            period = 1 << (i + 1)
            block = ((1 << (1 << i)) - 1) << (1 << i)
            words[name] = block * (((1 << width) - 1) // ((1 << period) - 1))
        exhaustive = True
    else:
        width = samples
        rng = random.Random(seed)
        words = {name: rng.getrandbits(width) for name in ia}
        exhaustive = False
    mask = (1 << width) - 1
    ra = a.simulate_words(words, mask)
    rb = b.simulate_words(words, mask)
    for o in oa:
        diff = (ra[o] ^ rb[o]) & mask
        if diff:
            bit = (diff & -diff).bit_length() - 1
            cex = {name: bool((words[name] >> bit) & 1) for name in ia}
            return Equivalence(False, cex, o, exhaustive)
    return Equivalence(True, None, None, exhaustive)
