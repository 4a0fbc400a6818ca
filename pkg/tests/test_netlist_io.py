import itertools
import json
import re

import pytest
from hypothesis import given, strategies as st

from sfqtm import libraries
from sfqtm.balancer import insert_dffs, insert_splitters
from sfqtm.generators import random_cover, seeded
from sfqtm.netlist_io import (REPORT_KEYS, ParseError, eval_cover, parse_blif, parse_genlib,
                              parse_mapped_blif, write_mapped_blif, write_report)
from sfqtm.network import MapStats, NetworkError


def test_buffer_netlist():
    net = parse_blif(".model buf\n.inputs a\n.outputs y\n.names a y\n1 1\n.end\n")
    assert net.model_name == "buf" and net.inputs == ["a"] and net.outputs == ["y"]
    assert len(net.tables) == 1 and net.tables[0].rows == [("1", "1")]


def test_and4_single_table():
    net = parse_blif(".model t\n.inputs a b c d\n.outputs y\n.names a b c d y\n1111 1\n.end\n")
    assert len(net.tables) == 1 and len(net.tables[0].inputs) == 4


def test_or_of_cubes_against_brute_force():
    net = parse_blif(".model t\n.inputs a b\n.outputs y\n.names a b y\n1- 1\n01 1\n.end\n")
    for a, b in itertools.product((0, 1), repeat=2):
        got = net.simulate_words({"a": a, "b": b}, 1)["y"]
        rows = [("1-", "1"), ("01", "1")]
        want = any(all(c == "-" or int(c) == v for c, v in zip(cube, (a, b))) for cube, _ in rows)
        assert got == int(want)


def test_offset_cover_and_constants():
    net = parse_blif(".model t\n.inputs a b\n.outputs y z o\n.names a b y\n11 0\n"
                     ".names z\n.names o\n1\n.end\n")
    r = net.simulate_words({"a": 0b1100, "b": 0b1010}, 0xF)
    assert r == {"y": 0b0111, "z": 0, "o": 0xF}


def test_comments_continuations_and_topological_order():
    text = ("# header\n.model t\n.inputs a \\\n b\n.outputs y\n"
            ".names m y\n0 1\n.names a b m # trailing\n11 1\n.end\n")
    net = parse_blif(text)
    assert net.inputs == ["a", "b"]
    assert [t.output for t in net.tables] == ["m", "y"]


@pytest.mark.parametrize("text,line", [
    (".model t\n.inputs a\n.outputs y\n.latch a y\n.end\n", 4),
    (".model t\n.inputs a\n.outputs y\n.names a y\n2 1\n.end\n", 5),
    (".model t\n.inputs a b\n.outputs y\n.names a b y\n1- 1\n01 0\n.end\n", 6),
    (".model t\n.inputs a\n.outputs y\n.names a y\n11 1\n.end\n", 5),
])
def test_syntax_errors_report_line(text, line):
    with pytest.raises(ParseError) as e:
        parse_blif(text)
    assert e.value.line == line


def test_bad_literal_column():
    with pytest.raises(ParseError) as e:
        parse_blif(".model t\n.inputs a b\n.outputs y\n.names a b y\n1x 1\n.end\n")
    assert (e.value.line, e.value.col) == (5, 2)


@pytest.mark.parametrize("body,msg", [
    (".names q y\n1 1\n", "undefined"),
    (".names y2 y\n1 1\n.names y y2\n1 1\n", "cycle"),
    (".names a y\n1 1\n.names a y\n0 1\n", "multiple drivers"),
])
def test_structural_errors(body, msg):
    with pytest.raises(ParseError, match=msg):
        parse_blif(".model t\n.inputs a\n.outputs y\n" + body + ".end\n")


def test_eval_cover_empty_is_zero():
    assert eval_cover([], [], 0xFF) == 0


# ---------------------------------------------------------------------------
# genlib


def test_inverter_gate():
    lib = parse_genlib("GATE inv 1 Y=!a; PIN * INV 1 999 1 0 1 0")
    g = lib.by_name["inv"]
    assert g.fanin_count == 1 and g.truth_table == 0b01 and g.delay == 1.0 and g.output == "Y"


def test_delay_is_max_block_delay():
    lib = parse_genlib("GATE and2 2 Y=a*b; PIN a NONINV 1 999 1.9 0.2 1.5 0.2\n"
                      "PIN b NONINV 1 999 1.2 0.2 1.4 0.2")
    g = lib.by_name["and2"]
    assert g.delay == 1.9 and g.truth_table == 0b1000 and g.pins == ("a", "b")


def test_builtin_cells_configurable():
    lib = parse_genlib("GATE inv 1 O=!a; PIN * INV 1 999 1 0 1 0",
                       dff_delay=2.5, dff_area=3.0, splitter_delay=0.5, splitter_area=4.0)
    assert (lib.dff.delay, lib.dff.area) == (2.5, 3.0)
    assert (lib.splitter.delay, lib.splitter.area) == (0.5, 4.0)
    assert lib.dff.truth_table == lib.splitter.truth_table == 0b10


def test_pin_order_follows_pin_lines():
    lib = parse_genlib("GATE g 1 O=a*!b; PIN b INV 1 999 1 0 1 0\nPIN a NONINV 1 999 1 0 1 0")
    # pins (b, a): bit index = b + 2a; true only for a=1, b=0 -> index 2
    assert lib.by_name["g"].pins == ("b", "a") and lib.by_name["g"].truth_table == 0b0100


def test_wide_gate_skipped_and_empty_library():
    lib = parse_genlib("GATE inv 1 O=!a; PIN * INV 1 999 1 0 1 0\n"
                       "GATE and7 7 O=a*b*c*d*e*f*g; PIN * NONINV 1 999 1 0 1 0")
    assert [g.name for g in lib.gates] == ["inv"]
    with pytest.raises(ParseError):
        parse_genlib("# nothing here\n")
    with pytest.raises(ParseError):
        parse_genlib("GATE bad 1 O=(a*b; PIN * INV 1 999 1 0 1 0")


def _reference_eval(expr, env):
    """Shunting-yard evaluation of a genlib expression (independent of the package parser)."""
    toks = re.findall(r"[A-Za-z_]\w*|[()!'*+&]", expr)
    # insert explicit AND between juxtaposed operands
    seq = []
    for t in toks:
        if seq and (seq[-1] not in "(!*+&" ) and (t not in ")'*+&"):
            seq.append("*")
        seq.append("*" if t == "&" else t)
    prec = {"+": 1, "*": 2, "!": 3}
    out, ops = [], []
    for t in seq:
        if t == "'":
            out.append("!")
        elif t == "!":
            ops.append(t)
        elif t in "*+":
            while ops and ops[-1] != "(" and prec[ops[-1]] >= prec[t]:
                out.append(ops.pop())
            ops.append(t)
        elif t == "(":
            ops.append(t)
        elif t == ")":
            while ops[-1] != "(":
                out.append(ops.pop())
            ops.pop()
            while ops and ops[-1] == "!":
                out.append(ops.pop())
        else:
            out.append(t)
            while ops and ops[-1] == "!":
                out.append(ops.pop())
    out += reversed(ops)
    stack = []
    for t in out:
        if t == "!":
            stack.append(not stack.pop())
        elif t in "*+":
            b, a = stack.pop(), stack.pop()
            stack.append((a and b) if t == "*" else (a or b))
        else:
            stack.append({"CONST0": False, "CONST1": True}.get(t, env.get(t)))
    (val,) = stack
    return bool(val)


def test_bundled_library_tables_against_reference_evaluator():
    text = libraries.library_text("mcnc_style")
    lib = libraries.load("mcnc_style")
    gate_lines = [l for l in text.splitlines() if l.startswith("GATE")]
    assert len(lib.gates) == len(gate_lines)
    for g in lib.gates:
        n = g.fanin_count
        for x in range(1 << n):
            env = {p: bool((x >> i) & 1) for i, p in enumerate(g.pins)}
            assert ((g.truth_table >> x) & 1) == _reference_eval(g.expr, env), (g.name, x)


def test_library_helpers(libs):
    lib = libs["mcnc_style"]
    assert lib.inverter.name == "inv1" and lib.inverter_present
    assert lib.constant(False).name == "zero" and lib.constant(True).name == "one"
    assert lib.max_fanin == 4
    assert libs["and2_inv"].constant(True) is None


# ---------------------------------------------------------------------------
# mapped netlist and report


def _legal(net):
    return insert_splitters(insert_dffs(net))


def test_writer_requires_legal_network(libs):
    net = random_cover(libs["nand_nor"], 6, 3, seeded(0))
    with pytest.raises(NetworkError):
        write_mapped_blif(net)


def test_fo4_emits_three_splitters(libs):
    from sfqtm.network import Cell, MappedNetwork
    lib = libs["and2_inv"]
    inv = lib.by_name["inv"]
    cells = [Cell("gate", inv, ["a"], ["m"])] + [
        Cell("gate", inv, ["m"], [f"o{i}"]) for i in range(4)]
    net = MappedNetwork("fo4", ["a"], [f"y{i}" for i in range(4)], cells,
                        {f"y{i}": f"o{i}" for i in range(4)}, lib=lib)
    text = write_mapped_blif(_legal(net))
    assert len(re.findall(r"\.gate SPLIT A=m ", text)) == 1
    assert text.count(".gate SPLIT") == 3


@given(st.integers(1, 25), st.integers(2, 6), st.integers(0, 10**6))
def test_round_trip_is_byte_identical(n_cells, n_pis, seed):
    lib = libraries.load("nand_nor")
    net = _legal(random_cover(lib, n_cells, n_pis, seeded(seed)))
    text = write_mapped_blif(net)
    back = parse_mapped_blif(text, lib)
    assert back.balanced == net.balanced and back.splitter_legal
    assert write_mapped_blif(back) == text


def test_report_fields():
    st_ = MapStats(gate_count=3, dff_count=1, splitter_count=0, logical_depth=2,
                   worst_stage_delay=1.9, runtime=0.01, iterations=5)
    rec = json.loads(write_report(st_))
    assert tuple(rec) == REPORT_KEYS
    assert rec["depth"] == 2 and rec["dffs"] == 1 and rec["psd"] == 1.9 * 2
