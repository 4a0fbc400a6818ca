import pytest
from hypothesis import given, strategies as st

from conftest import fanout_blif
from sfqtm import libraries
from sfqtm.balancer import check_balanced, check_splitter_legal, insert_dffs, insert_splitters
from sfqtm.generators import random_cover, seeded
from sfqtm.netlist_io import parse_blif, parse_genlib
from sfqtm.network import Cell, MappedNetwork
from sfqtm.oracle import check_equivalence
from sfqtm.peephole import (PeepholeConfig, StageDelayModel, finalize_stats, psd,
                            splitter_levels, stage_delay, stage_delays, tune_psd)
from sfqtm.pipeline import MapOptions, map_network

SLOW = parse_genlib("GATE g5 1 O=!a; PIN * INV 1 999 5 0 5 0\n"
                    "GATE and2 1 O=a*b; PIN * NONINV 1 999 1 0 1 0")


def star(n_sinks):
    g5 = SLOW.by_name["g5"]
    cells = [Cell("gate", g5, ["a"], ["m"])] + [
        Cell("gate", g5, ["m"], [f"o{i}"]) for i in range(n_sinks)]
    net = MappedNetwork("s", ["a"], [f"y{i}" for i in range(n_sinks)], cells,
                        {f"y{i}": f"o{i}" for i in range(n_sinks)}, lib=SLOW)
    return insert_splitters(insert_dffs(net))


@pytest.mark.parametrize("fanout,want", [(1, 5.0), (2, 6.0), (4, 7.0)])
def test_stage_delay_examples(fanout, want):
    net = star(fanout)
    root = next(c for c in net.cells if c.outputs == ["m"])
    assert stage_delay(net, root) == want
    assert StageDelayModel(1.0).stage(5.0, fanout) == want


def test_splitter_levels():
    assert [splitter_levels(f) for f in (0, 1, 2, 3, 4, 5, 8, 9)] == [0, 0, 1, 2, 2, 3, 3, 4]
    assert StageDelayModel(1.0, 0.5).stage(2.0, 3) == 4.5


def test_psd_examples():
    wires = MappedNetwork("w", ["a"], ["y"], [], {"y": "a"}, lib=SLOW)
    assert psd(wires) == 0.0
    net = star(2)
    assert net.depth() == 2 and psd(net) == 12.0


def test_deeper_cover_of_f_has_larger_psd(libs):
    lib = libs["and_inv"]
    and2, and3, inv = (lib.by_name[n] for n in ("and2", "and3", "inv"))
    unit = StageDelayModel(0.0)
    deep = MappedNetwork("a", list("abcd"), ["F"], [
        Cell("gate", inv, ["c"], ["nc"]), Cell("gate", and2, ["a", "b"], ["m1"]),
        Cell("gate", and2, ["m1", "nc"], ["m2"]), Cell("gate", and2, ["m2", "d"], ["m3"])],
        {"F": "m3"}, lib=lib)
    shallow = MappedNetwork("c", list("abcd"), ["F"], [
        Cell("gate", inv, ["c"], ["nc"]), Cell("gate", and3, ["a", "b", "d"], ["m1"]),
        Cell("gate", and2, ["m1", "nc"], ["m2"])], {"F": "m2"}, lib=lib)
    p_deep = psd(insert_splitters(insert_dffs(deep)), unit)
    p_shallow = psd(insert_splitters(insert_dffs(shallow)), unit)
    assert p_deep > p_shallow


def test_config_validation():
    assert PeepholeConfig() == PeepholeConfig(5, 2, 8)
    for bad in ((-1, 2, 8), (1, 0, 8), (1, 4, 3)):
        with pytest.raises(ValueError):
            PeepholeConfig(*bad)


def test_zero_iterations_returns_input():
    net = star(8)
    assert tune_psd(net, PeepholeConfig(iterations=0)) is net


def test_single_gate_unchanged():
    g5 = SLOW.by_name["g5"]
    net = insert_splitters(insert_dffs(MappedNetwork(
        "one", ["a"], ["y"], [Cell("gate", g5, ["a"], ["o"])], {"y": "o"}, lib=SLOW)))
    trace = []
    assert tune_psd(net, PeepholeConfig(5), trace=trace) is net
    assert len(trace) == 5 and not any(t["accepted"] for t in trace)


def integer_partitions(n, most=None):
    most = most or n
    if n == 0:
        yield []
        return
    for first in range(min(n, most), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield [first] + rest


def duplicated_psd(base, gate_net, sizes):
    """PSD after splitting the sinks of ``gate_net`` into groups of ``sizes``."""
    from sfqtm.balancer import remove_dffs, remove_splitters
    net = remove_dffs(remove_splitters(base))
    drv = next(c for c in net.cells if c.outputs == [gate_net])
    sinks = sorted(net.sinks()[gate_net], key=str)
    at = sizes[0]
    for j, size in enumerate(sizes[1:]):
        name = f"dup{j}"
        net.cells.append(Cell("gate", drv.gate, list(drv.fanins), [name]))
        for s in sinks[at:at + size]:
            if s[0] == "PO":
                net.po_nets[s[1]] = name
            else:
                net.cells[s[0]].fanins[s[1]] = name
        at += size
    return psd(insert_splitters(insert_dffs(net)))


def test_fanout8_reaches_move_space_optimum(libs):
    res = map_network(parse_blif(fanout_blif(8)), libs["and2_inv"], MapOptions(iterations=0))
    start = res.phase1
    g_net = next(c.outputs[0] for c in start.cells
                 if c.kind == "gate" and sorted(c.fanins) == ["a", "b"])
    best = min(duplicated_psd(start, g_net, p) for p in integer_partitions(8))
    trace = []
    out = tune_psd(start, PeepholeConfig(5), trace=trace)
    assert psd(out) < psd(start)
    assert psd(out) == best == 2.0
    assert trace[-1]["psd"] == out.stats.psd == psd(out)


@given(st.integers(2, 40), st.integers(1, 6), st.sampled_from(["nand_nor", "mcnc_style"]),
       st.integers(0, 8), st.integers(0, 10**6))
def test_tuning_is_safe_and_monotone(n_cells, n_pis, lib_name, iters, seed):
    lib = libraries.load(lib_name)
    net = insert_splitters(insert_dffs(random_cover(lib, n_cells, n_pis, seeded(seed))))
    finalize_stats(net)
    trace = []
    out = tune_psd(net, PeepholeConfig(iters, 1, 4), trace=trace)
    assert len(trace) == iters
    assert psd(out) <= psd(net)
    assert check_balanced(out) == [] and check_splitter_legal(out) == []
    assert out.depth() == net.depth()
    assert check_equivalence(net, out)
    if out is not net:
        assert psd(out) < psd(net)
        # incremental bookkeeping agrees with a full recomputation
        accepted = [t for t in trace if t["accepted"]]
        assert accepted[-1]["psd"] == pytest.approx(psd(out))
        assert max(stage_delays(out).values()) == out.stats.worst_stage_delay
        fresh = finalize_stats(out.copy()).stats
        for key in ("gate_count", "dff_count", "splitter_count", "logical_depth", "psd"):
            assert getattr(fresh, key) == getattr(out.stats, key)


def test_limit_cap_makes_remaining_iterations_noops():
    net = star(1)
    trace = []
    tune_psd(net, PeepholeConfig(6, 1, 2), trace=trace)
    assert [t.get("skipped", False) for t in trace] == [False, False, True, True, True, True]
