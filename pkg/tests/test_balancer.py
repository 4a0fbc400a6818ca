import math

from hypothesis import given, strategies as st

from sfqtm import libraries
from sfqtm.balancer import (check_balanced, check_splitter_legal, expected_dffs, insert_dffs,
                            insert_splitters, remove_dffs, remove_splitters)
from sfqtm.dp_mapper import balance_cost
from sfqtm.generators import random_cover, seeded
from sfqtm.network import Cell, MappedNetwork
from sfqtm.oracle import check_equivalence

LIB = libraries.load("and2_inv")
INV, AND2 = LIB.by_name["inv"], LIB.by_name["and2"]


def chain(cells, src, length, tag):
    for j in range(length):
        out = f"{tag}{j}"
        cells.append(Cell("gate", INV, [src], [out]))
        src = out
    return src


def and_at_levels(la, lb):
    cells = []
    x = chain(cells, "a", la, "p")
    y = chain(cells, "b", lb, "q")
    cells.append(Cell("gate", AND2, [x, y], ["o"]))
    return MappedNetwork("t", ["a", "b"], ["y"], cells, {"y": "o"}, lib=LIB)


def test_equal_levels_need_no_dffs():
    assert insert_dffs(and_at_levels(3, 3)).count("dff") == 0


def test_one_dff_on_early_input():
    out = insert_dffs(and_at_levels(2, 3))
    dffs = [c for c in out.cells if c.kind == "dff"]
    assert len(dffs) == 1 and dffs[0].fanins == ["p1"]
    final = next(c for c in out.cells if c.outputs == ["o"])
    assert final.fanins[0] == dffs[0].outputs[0]


def test_chain_cover_needs_three_dffs():
    cells = [Cell("gate", AND2, ["a", "b"], ["m1"]),
             Cell("gate", AND2, ["m1", "c"], ["m2"]),
             Cell("gate", AND2, ["m2", "d"], ["m3"])]
    net = MappedNetwork("chain", list("abcd"), ["F"], cells, {"F": "m3"}, lib=LIB)
    assert expected_dffs(net) == 3
    assert insert_dffs(net).count("dff") == 3


def test_hand_built_violation():
    v = check_balanced(and_at_levels(0, 2))
    assert len(v) == 1 and v[0].cell == "o" and v[0].gap == 2
    assert check_balanced(insert_dffs(and_at_levels(0, 2))) == []


def fanout_net(n):
    cells = [Cell("gate", INV, ["a"], ["m"])] + [
        Cell("gate", INV, ["m"], [f"o{i}"]) for i in range(n)]
    return MappedNetwork("fo", ["a"], [f"y{i}" for i in range(n)], cells,
                         {f"y{i}": f"o{i}" for i in range(n)}, lib=LIB)


def tree_depth(net, root):
    kids = {c.fanins[0]: c.outputs for c in net.cells if c.kind == "splitter"}

    def depth(n):
        return 0 if n not in kids else 1 + max(depth(o) for o in kids[n])

    return depth(root)


def test_splitter_trees():
    assert insert_splitters(fanout_net(1)).count("splitter") == 0
    assert insert_splitters(fanout_net(2)).count("splitter") == 1
    fo4 = insert_splitters(fanout_net(4))
    assert fo4.count("splitter") == 3 and tree_depth(fo4, "m") == 2
    assert check_splitter_legal(fo4) == []
    levels = fo4.net_levels()
    assert {levels[o] for c in fo4.cells if c.kind == "splitter" for o in c.outputs} == {1}


@given(st.integers(1, 40), st.integers(1, 8), st.sampled_from(["and2_inv", "nand_nor", "mcnc_style"]),
       st.booleans(), st.integers(0, 10**6))
def test_balancing_properties(n_cells, n_pis, lib_name, po_bal, seed):
    lib = libraries.load(lib_name)
    net = random_cover(lib, n_cells, n_pis, seeded(seed))
    net.balance_outputs = po_bal
    lv = net.net_levels()
    want = sum(balance_cost([lv[f] for f in c.fanins]) for c in net.cells if c.clocked and c.fanins)
    if po_bal:
        want += balance_cost([lv[net.po_nets[o]] for o in net.outputs])
    bal = insert_dffs(net)
    assert check_balanced(bal) == []
    assert bal.count("dff") == bal.stats.dff_count == want == expected_dffs(net)
    assert insert_dffs(bal).count("dff") == bal.count("dff")
    assert bal.depth() == net.depth() or po_bal
    legal = insert_splitters(bal)
    assert check_splitter_legal(legal) == [] and check_balanced(legal) == []
    sinks = bal.sinks()
    for n, s in sinks.items():
        if len(s) > 1:
            assert tree_depth(legal, n) == math.ceil(math.log2(len(s)))
    assert legal.count("splitter") == sum(max(0, len(s) - 1) for s in sinks.values())
    assert check_equivalence(net, legal)
    back = remove_dffs(remove_splitters(legal))
    assert sorted((c.gate.name, tuple(c.fanins)) for c in back.cells) == \
        sorted((c.gate.name, tuple(c.fanins)) for c in net.cells)


def test_input_is_not_mutated():
    net = and_at_levels(0, 2)
    before = [list(c.fanins) for c in net.cells]
    insert_splitters(insert_dffs(net))
    assert [c.fanins for c in net.cells] == before
