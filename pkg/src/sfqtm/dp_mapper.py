"""Depth-optimal, balancing-aware cut-based mapping.

For every signal ``(node, phase)`` the mapper keeps a *level profile*: the
minimum achievable level ``D`` and, for each target level ``L >= D``, the
cheapest realization that delivers the signal at exactly ``L``.  The first
entry of a profile is ``(D[i], DFF[i])``: ``D[i]`` is the min over matchable
cuts of ``max(leaf D) + 1`` and ``DFF[i]`` is the min over depth-``D[i]``
cuts of ``sum(leaf DFF) + balance_cost(leaf levels)``.  Later entries let a
leaf that is not on the critical path arrive late through a deeper cover
instead of through padding DFFs.  ``slack=0`` keeps only the first entry.

Costs are ``(dffs, area)`` pairs.  In ``"dff"`` mode they are compared
lexicographically; ``"area"`` mode is the balancing-unaware reference mapper
(minimum depth, then area only).
"""

from dataclasses import dataclass

from .matcher import Matcher
from .subject_graph import AND, PI


class MappingError(ValueError):
    pass


def balance_cost(levels):
    """DFFs needed to bring every input up to the latest one."""
    levels = list(levels)
    top = max(levels)
    return sum(top - l for l in levels)


@dataclass
class Profile:
    depth: int
    costs: list     # costs[j]: (dffs, area) for level depth + j
    picks: list     # picks[j]: (choice, level the choice is evaluated at)

    def cost(self, level, pad):
        j = level - self.depth
        if j < 0:
            return None
        if j < len(self.costs):
            return self.costs[j]
        extra = j - len(self.costs) + 1
        d, a = self.costs[-1]
        return (d + extra * pad[0], a + extra * pad[1])

    def pick(self, level):
        j = min(level - self.depth, len(self.picks) - 1)
        return self.picks[j]


class MatchTable:
    """DP state for every signal reachable from the outputs."""

    def __init__(self, graph, cuts, lib, mode, slack, balance_outputs):
        self.graph = graph
        self.cuts = cuts
        self.lib = lib
        self.mode = mode
        self.slack = slack
        self.balance_outputs = balance_outputs
        n = len(graph)
        self.direct = [[None, None] for _ in range(n)]
        self.full = [[None, None] for _ in range(n)]
        dff_area = lib.dff.area
        self.pad = (1, dff_area) if mode == "dff" else (1, 0.0)

    def better(self, a, b):
        if b is None:
            return True
        if self.mode == "dff":
            return a < b
        return a[1] < b[1]

    def depth(self, node, phase=0):
        p = self.full[node][phase]
        return None if p is None else p.depth

    def dffs(self, node, phase=0):
        p = self.full[node][phase]
        return None if p is None else p.costs[0][0]

    def best(self, node, phase=0):
        p = self.full[node][phase]
        return None if p is None else p.picks[0][0]

    def output_depth(self):
        return max((self.depth(l >> 1, l & 1) or 0 for l, _ in self.graph.outputs), default=0)

    def output_level(self, lit, top):
        """Level at which output literal ``lit`` is taken: ``top`` when outputs
        are balanced, else the cheapest level not above ``top``."""
        prof = self.full[lit >> 1][lit & 1]
        if self.balance_outputs:
            return top
        best = prof.depth
        for level in range(prof.depth + 1, min(top, prof.depth + len(prof.costs) - 1) + 1):
            if self.better(prof.cost(level, self.pad), prof.cost(best, self.pad)):
                best = level
        return best

    def estimate(self):
        """(depth, DFFs) predicted by the DP, shared logic counted per use."""
        top = self.output_depth()
        total = 0
        for l, _ in self.graph.outputs:
            if l >> 1:
                prof = self.full[l >> 1][l & 1]
                total += prof.cost(self.output_level(l, top), self.pad)[0]
        return top, total


def _needed_nodes(graph):
    need = [False] * len(graph)
    stack = [l >> 1 for l, _ in graph.outputs]
    while stack:
        n = stack.pop()
        if need[n]:
            continue
        need[n] = True
        if graph.kind[n] == AND:
            stack.append(graph.fanin0[n] >> 1)
            stack.append(graph.fanin1[n] >> 1)
    return need


def minimize_depth_pb(graph, cuts, lib, mode="dff", slack=None, matcher=None,
                      balance_outputs=False):
    """Fill a :class:`MatchTable` in topological order."""
    if mode not in ("dff", "area"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "area":
        slack = 0
    matcher = matcher or Matcher(lib)
    table = MatchTable(graph, cuts, lib, mode, slack, balance_outputs)
    pad = table.pad
    inv = lib.inverter
    inv_cost = (0, inv.area) if inv else None
    need = _needed_nodes(graph)
    for n in range(1, len(graph)):
        if not need[n]:
            continue
        if graph.kind[n] == PI:
            table.direct[n][0] = Profile(0, [(0, 0.0)], [(("pi",), 0)])
        else:
            for phase in (0, 1):
                table.direct[n][phase] = _direct_profile(table, n, phase, matcher, pad)
            if table.direct[n][0] is None and table.direct[n][1] is None:
                funcs = ", ".join(f"{c.leaves}:{c.function:#x}" for c in cuts[n][1:])
                raise MappingError(f"node {n} has no matchable cut ({funcs})")
        for phase in (0, 1):
            table.full[n][phase] = _full_profile(table, n, phase, inv_cost, pad)
        if table.full[n][0] is None and table.full[n][1] is None:
            raise MappingError(f"node {n} cannot be realized in either phase")
    for l, name in graph.outputs:
        if l >> 1 and table.full[l >> 1][l & 1] is None:
            raise MappingError(
                f"output {name} needs the complemented phase but the library has no inverter")
    return table


def _direct_profile(table, n, phase, matcher, pad):
    full = table.full
    want_inv = bool(phase)
    options = []
    for cut in table.cuts[n][1:]:
        for m in matcher.distinct(cut.size, cut.function):
            if m.output_inverted != want_inv:
                continue
            profs = []
            for leaf, ph in zip(cut.leaves, m.leaf_phases):
                p = full[leaf][ph]
                if p is None:
                    break
                profs.append(p)
            else:
                lmin = max(p.depth for p in profs) + 1
                lend = max(p.depth + len(p.costs) for p in profs)
                options.append((lmin, lend, cut, m, profs))
    if not options:
        return None
    depth = min(o[0] for o in options)
    last = max(o[1] for o in options)
    if table.slack is not None:
        last = min(last, depth + table.slack)
    costs, picks = [], []
    for level in range(depth, last + 1):
        best, pick = None, None
        if costs:
            d, a = costs[-1]
            best = (d + pad[0], a + pad[1])
            pick = picks[-1]
        for lmin, lend, cut, m, profs in options:
            if lmin > level or (level > lend and lmin < level):
                continue
            d, a = 0, m.gate.area
            for p in profs:
                c = p.cost(level - 1, pad)
                d += c[0]
                a += c[1]
            if table.better((d, a), best):
                best = (d, a)
                pick = (("match", cut, m), level)
        costs.append(best)
        picks.append(pick)
    _trim(costs, picks, pad)
    return Profile(depth, costs, picks)


def _trim(costs, picks, pad):
    while len(costs) > 1:
        d, a = costs[-2]
        if costs[-1] == (d + pad[0], a + pad[1]) and picks[-1] == picks[-2]:
            costs.pop()
            picks.pop()
        else:
            break


def _full_profile(table, n, phase, inv_cost, pad):
    own = table.direct[n][phase]
    other = table.direct[n][1 - phase] if inv_cost else None
    if other is None:
        return own
    inv_depth = other.depth + 1
    if own is None:
        depth = inv_depth
        last = other.depth + len(other.costs)
    else:
        depth = min(own.depth, inv_depth)
        last = max(own.depth + len(own.costs) - 1, other.depth + len(other.costs))
    if table.slack is not None:
        last = min(last, depth + table.slack)
    costs, picks = [], []
    for level in range(depth, last + 1):
        best, pick = None, None
        if own is not None and level >= own.depth:
            best = own.cost(level, pad)
            pick = own.pick(level)
        if level >= inv_depth:
            d, a = other.cost(level - 1, pad)
            c = (d + inv_cost[0], a + inv_cost[1])
            if table.better(c, best):
                best = c
                pick = (("inv",), level)
        if costs:
            d, a = costs[-1]
            padded = (d + pad[0], a + pad[1])
            if table.better(padded, best):
                best, pick = padded, picks[-1]
        costs.append(best)
        picks.append(pick)
    _trim(costs, picks, pad)
    return Profile(depth, costs, picks)


# ---------------------------------------------------------------------------
# cover recovery


def _net_prefix(names):
    prefix = "n"
    while any(s.startswith(prefix) for s in names):
        prefix = "_" + prefix
    return prefix


def recover_cover(table, graph=None, outputs=None):
    """Instantiate the chosen matches as an (unbalanced) mapped network.

    Each signal is realized once.  Required levels are propagated from the
    outputs in reverse topological order, and a shared signal is built for
    the earliest level any consumer asked for, so no node ends up later than
    its optimal depth.
    """
    from .network import Cell, MappedNetwork

    graph = graph or table.graph
    outputs = outputs if outputs is not None else graph.outputs
    lib = table.lib
    pad = table.pad
    inv = lib.inverter
    req = {}
    top = table.output_depth()
    for l, _ in outputs:
        n, p = l >> 1, l & 1
        if n == 0:
            continue
        level = table.output_level(l, top)
        req[(n, p)] = min(req.get((n, p), level), level)

    impl = {}   # (node, phase) -> ("direct", pick) | ("inv",)
    for n in range(len(graph) - 1, 0, -1):
        r = [req.get((n, 0)), req.get((n, 1))]
        if r[0] is None and r[1] is None:
            continue
        plan = _plan_node(table, n, r, inv is not None, pad)
        for phase, target in plan:
            if target is None:
                impl[(n, phase)] = ("inv",)
                continue
            choice, at = table.direct[n][phase].pick(target)
            impl[(n, phase)] = ("direct", choice)
            if choice[0] == "match":
                _, cut, m = choice
                for leaf, ph in zip(cut.leaves, m.leaf_phases):
                    key = (leaf, ph)
                    req[key] = min(req.get(key, at - 1), at - 1)

    names = list(graph.input_names) + [name for _, name in outputs]
    prefix = _net_prefix(names)
    pi_name = dict(zip(graph.inputs, graph.input_names))

    def net(node, phase):
        if phase == 0 and node in pi_name:
            return pi_name[node]
        return f"{prefix}{node}" + ("b" if phase else "")

    cells = []
    for n in range(1, len(graph)):
        for phase in (0, 1):
            how = impl.get((n, phase))
            if how is None or how[0] != "direct":
                continue
            choice = how[1]
            if choice[0] != "match":
                continue
            _, cut, m = choice
            fanins = []
            for pin in range(m.gate.fanin_count):
                li = m.leaf_permutation[pin]
                fanins.append(net(cut.leaves[li], int(m.leaf_phases[li])))
            cells.append(Cell("gate", m.gate, fanins, [net(n, phase)]))
        for phase in (0, 1):
            if impl.get((n, phase)) == ("inv",):
                cells.append(Cell("gate", inv, [net(n, 1 - phase)], [net(n, phase)]))

    po_nets = {}
    for l, name in outputs:
        n, p = l >> 1, l & 1
        if n == 0:
            value = p == 0
            g = lib.constant(value)
            if g is None:
                raise MappingError(f"output {name} is constant and the library has no constant cell")
            cname = f"{prefix}const{int(value)}"
            if not any(c.outputs[0] == cname for c in cells):
                cells.append(Cell("const", g, [], [cname]))
            po_nets[name] = cname
        else:
            po_nets[name] = net(n, p)
    out_names = [name for _, name in outputs]
    mapped = MappedNetwork(graph.name, list(graph.input_names), out_names, cells, po_nets,
                           balance_outputs=table.balance_outputs, lib=lib, prefix=prefix)
    return mapped


def _plan_node(table, n, r, has_inv, pad):
    """Decide direct/inverter realization for the requested phases of ``n``.

    Returns ``[(phase, target level or None for inverter)]`` with direct
    realizations listed so their requests are issued.
    """
    direct = table.direct[n]

    def dcost(phase, level):
        p = direct[phase]
        if p is None or level is None or level < p.depth:
            return None
        return p.cost(level, pad)

    plans = []
    both = r[0] is not None and r[1] is not None
    if both:
        c0, c1 = dcost(0, r[0]), dcost(1, r[1])
        if c0 is not None and c1 is not None:
            plans.append(((c0[0] + c1[0], c0[1] + c1[1]), [(0, r[0]), (1, r[1])]))
        if has_inv:
            for src in (0, 1):
                lv = min(r[src], r[1 - src] - 1)
                c = dcost(src, lv)
                if c is not None:
                    cost = (c[0], c[1] + table.lib.inverter.area)
                    plans.append((cost, [(src, lv), (1 - src, None)]))
    else:
        want = 0 if r[0] is not None else 1
        c = dcost(want, r[want])
        if c is not None:
            plans.append((c, [(want, r[want])]))
        if has_inv:
            c = dcost(1 - want, r[want] - 1)
            if c is not None:
                cost = (c[0], c[1] + table.lib.inverter.area)
                plans.append((cost, [(1 - want, r[want] - 1), (want, None)]))
    if not plans:
        raise MappingError(f"node {n}: requested phases cannot be realized")
    best = plans[0]
    for cand in plans[1:]:
        if table.better(cand[0], best[0]):
            best = cand
    return best[1]
