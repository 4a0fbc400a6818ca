"""Random subject graphs and covers for tests and experiments."""

import random

from .subject_graph import SubjectGraph


def random_tree(n_ands, rng, reuse=0.0, name="tree"):
    """A single-output AND tree with ``n_ands`` nodes and random complements.

    With ``reuse > 0`` a leaf may repeat an earlier input, which keeps every
    AND node at fanout one while letting inputs reconverge.  Draws that fold
    away nodes are redrawn.
    """
    while True:
        g = _tree_attempt(n_ands, rng, reuse, name)
        if g.num_ands == n_ands and g.outputs[0][0] >> 1:
            return g


def _tree_attempt(n_ands, rng, reuse, name):
    g = SubjectGraph(name)
    pis = []

    def leaf():
        if pis and rng.random() < reuse:
            return rng.choice(pis)
        pis.append(g.add_pi(f"x{len(pis)}"))
        return pis[-1]

    def build(size):
        if size == 0:
            return leaf() ^ rng.getrandbits(1)
        left = rng.randrange(size)
        a = build(left)
        b = build(size - 1 - left)
        return g.add_and(a, b) ^ rng.getrandbits(1)

    g.add_output(build(n_ands), "f")
    return g


def random_dag(n_ands, n_pis, rng, n_outputs=None, name="dag"):
    """A random AND graph; every sink node becomes an output."""
    g = SubjectGraph(name)
    lits = [g.add_pi(f"x{i}") for i in range(n_pis)]
    tries = 0
    while g.num_ands < n_ands and tries < 50 * n_ands:
        tries += 1
        a, b = rng.sample(lits, 2)
        if a >> 1 == b >> 1:
            continue
        before = len(g)
        l = g.add_and(a ^ rng.getrandbits(1), b ^ rng.getrandbits(1))
        if len(g) > before:
            lits.append(l)
    used = set()
    for n in g.and_nodes():
        used.add(g.fanin0[n] >> 1)
        used.add(g.fanin1[n] >> 1)
    sinks = [n for n in g.and_nodes() if n not in used]
    if n_outputs is not None:
        extra = [n for n in g.and_nodes() if n not in sinks]
        rng.shuffle(extra)
        sinks += extra[:max(0, n_outputs - len(sinks))]
    for i, n in enumerate(sorted(sinks)):
        g.add_output(2 * n ^ rng.getrandbits(1), f"y{i}")
    return g


def seeded(seed):
    return random.Random(seed)


def random_cover(lib, n_cells, n_pis, rng, name="cover"):
    """An unbalanced network of random library gates over ``n_pis`` inputs."""
    from .network import Cell, MappedNetwork

    gates = [g for g in lib.gates if g.fanin_count >= 1]
    inputs = [f"x{i}" for i in range(n_pis)]
    nets = list(inputs)
    cells = []
    for i in range(n_cells):
        g = rng.choice([g for g in gates if g.fanin_count <= len(nets)])
        fanins = rng.sample(nets, g.fanin_count)
        out = f"g{i}"
        cells.append(Cell("gate", g, fanins, [out]))
        nets.append(out)
    used = {n for c in cells for n in c.fanins}
    outs = [c.outputs[0] for c in cells if c.outputs[0] not in used]
    extra = [c.outputs[0] for c in cells if c.outputs[0] in used]
    outs += rng.sample(extra, min(len(extra), rng.randrange(3)))
    po_names = [f"y{i}" for i in range(len(outs))]
    return MappedNetwork(name, inputs, po_names, cells, dict(zip(po_names, outs)), lib=lib)
