"""BLIF and genlib readers, mapped-netlist writer, and the run report."""

import json
import logging
import re
from dataclasses import dataclass, field

from . import truth

log = logging.getLogger(__name__)

MAX_FANIN = 6


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + msg)


# ---------------------------------------------------------------------------
# BLIF


@dataclass
class Table:
    output: str
    inputs: list
    rows: list  # (input cube string, output char)


@dataclass
class RawNetlist:
    model_name: str
    inputs: list
    outputs: list
    tables: list = field(default_factory=list)

    def table_map(self):
        return {t.output: t for t in self.tables}

    def simulate_words(self, words, mask):
        """Cover-semantics simulation; ``words`` maps each input name to a bit-vector int."""
        values = dict(words)
        for t in self.tables:
            values[t.output] = eval_cover(t.rows, [values[i] for i in t.inputs], mask)
        return {o: values[o] for o in self.outputs}


def eval_cover(rows, words, mask):
    """Evaluate a single-output cover on bit-parallel input words."""
    if not rows:
        return 0
    onset = rows[0][1] == "1"
    acc = 0
    for cube, _ in rows:
        term = mask
        for ch, w in zip(cube, words):
            if ch == "1":
                term &= w
            elif ch == "0":
                term &= ~w & mask
        acc |= term
    return acc if onset else ~acc & mask


def _logical_lines(text):
    """Yield (line number, tokens) with comments stripped and continuations joined."""
    buf = []
    start = None
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if start is None:
            start = num
        if line.endswith("\\"):
            buf.append(line[:-1])
            continue
        buf.append(line)
        joined = " ".join(buf).strip()
        buf = []
        if joined:
            yield start, joined
        start = None
    if buf and " ".join(buf).strip():
        yield start, " ".join(buf).strip()


def parse_blif(text):
    """Parse the combinational BLIF subset into a :class:`RawNetlist`.

    Tables are returned in topological order.
    """
    model = None
    inputs, outputs, tables = [], [], []
    current = None
    ended = False
    for num, line in _logical_lines(text):
        toks = line.split()
        head = toks[0]
        if head.startswith("."):
            current = None
            if head == ".model":
                model = toks[1] if len(toks) > 1 else "top"
            elif head == ".inputs":
                inputs.extend(toks[1:])
            elif head == ".outputs":
                outputs.extend(toks[1:])
            elif head == ".names":
                if len(toks) < 2:
                    raise ParseError(".names without an output", num, 1)
                current = Table(toks[-1], toks[1:-1], [])
                tables.append(current)
            elif head == ".end":
                ended = True
            elif head == ".latch":
                raise ParseError("sequential .latch is not supported", num, 1)
            elif head in (".gate", ".mlatch", ".subckt"):
                raise ParseError(f"{head} is not part of the supported subset", num, 1)
            else:
                raise ParseError(f"unknown directive {head}", num, 1)
            continue
        if ended:
            raise ParseError("content after .end", num, 1)
        if current is None:
            raise ParseError("cover row outside a .names block", num, 1)
        n = len(current.inputs)
        if n == 0:
            if len(toks) != 1 or toks[0] not in ("0", "1"):
                raise ParseError("constant table row must be 0 or 1", num, 1)
            current.rows.append(("", toks[0]))
            continue
        if len(toks) != 2:
            raise ParseError("cover row must have an input cube and an output value", num, 1)
        cube, val = toks
        if len(cube) != n:
            raise ParseError(f"cube width {len(cube)} != {n} inputs", num, 1)
        bad = next((i for i, ch in enumerate(cube) if ch not in "01-"), None)
        if bad is not None:
            raise ParseError(f"bad literal {cube[bad]!r}", num, line.index(cube) + bad + 1)
        if val not in ("0", "1"):
            raise ParseError(f"bad output value {val!r}", num, line.rindex(val) + 1)
        if current.rows and current.rows[0][1] != val:
            raise ParseError("mixed on-set and off-set rows", num, 1)
        current.rows.append((cube, val))
    if model is None:
        raise ParseError("missing .model")
    net = RawNetlist(model, inputs, outputs, tables)
    net.tables = _check_and_sort(net)
    return net


def _check_and_sort(net):
    drivers = {}
    for t in net.tables:
        if t.output in drivers or t.output in net.inputs:
            raise ParseError(f"net {t.output} has multiple drivers")
        drivers[t.output] = t
    known = set(net.inputs) | set(drivers)
    for t in net.tables:
        for i in t.inputs:
            if i not in known:
                raise ParseError(f"undefined net {i} (used by {t.output})")
    for o in net.outputs:
        if o not in known:
            raise ParseError(f"undefined output {o}")
    order, state = [], {}
    for t in net.tables:
        if t.output in state:
            continue
        stack = [(t, iter(t.inputs))]
        state[t.output] = 1
        while stack:
            node, it = stack[-1]
            for i in it:
                if i not in drivers:
                    continue
                s = state.get(i)
                if s == 1:
                    raise ParseError(f"combinational cycle through {i}")
                if s is None:
                    state[i] = 1
                    stack.append((drivers[i], iter(drivers[i].inputs)))
                    break
            else:
                stack.pop()
                state[node.output] = 2
                order.append(node)
    return order


# ---------------------------------------------------------------------------
# genlib


@dataclass(frozen=True)
class LibGate:
    name: str
    area: float
    pins: tuple
    truth_table: int
    delay: float
    output: str = "O"
    expr: str = ""

    @property
    def fanin_count(self):
        return len(self.pins)

    def __repr__(self):
        return f"LibGate({self.name}, {self.fanin_count} in, tt={truth.to_bits(self.truth_table, self.fanin_count)})"


@dataclass
class CellLibrary:
    gates: list
    dff: LibGate
    splitter: LibGate

    def __post_init__(self):
        self.by_name = {g.name: g for g in self.gates}
        self.by_name[self.dff.name] = self.dff
        self.by_name[self.splitter.name] = self.splitter

    @property
    def inverter(self):
        invs = [g for g in self.gates if g.fanin_count == 1 and g.truth_table == 0b01]
        return min(invs, key=lambda g: (g.area, g.delay, g.name)) if invs else None

    @property
    def inverter_present(self):
        return self.inverter is not None

    def constant(self, value):
        tt = 1 if value else 0
        cands = [g for g in self.gates if g.fanin_count == 0 and g.truth_table == tt]
        return min(cands, key=lambda g: (g.area, g.name)) if cands else None

    @property
    def max_fanin(self):
        return max((g.fanin_count for g in self.gates), default=0)


DFF_NAME = "DFF"
SPLITTER_NAME = "SPLIT"


def builtin_cells(dff_delay=1.0, dff_area=1.0, splitter_delay=1.0, splitter_area=1.0):
    dff = LibGate(DFF_NAME, dff_area, ("D",), 0b10, dff_delay, "Q", "D")
    spl = LibGate(SPLITTER_NAME, splitter_area, ("A",), 0b10, splitter_delay, "Y", "A")
    return dff, spl


class _ExprParser:
    """Recursive-descent parser producing a tiny AST for genlib expressions."""

    TOKEN = re.compile(r"\s*(?:([A-Za-z_][\w\[\]\.]*)|(.))")

    def __init__(self, text):
        self.toks = []
        for m in self.TOKEN.finditer(text):
            if m.group(1):
                self.toks.append(("id", m.group(1)))
            elif m.group(2) and not m.group(2).isspace():
                self.toks.append(("op", m.group(2)))
        self.pos = 0
        self.names = []

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.pos != len(self.toks):
            raise ParseError(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        terms = [self.term()]
        while self.peek() == ("op", "+"):
            self.take()
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else ("or", terms)

    def term(self):
        factors = [self.factor()]
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*&":
                self.take()
                factors.append(self.factor())
            elif kind == "id" or (kind == "op" and val in "(!"):
                factors.append(self.factor())
            else:
                break
        return factors[0] if len(factors) == 1 else ("and", factors)

    def factor(self):
        kind, val = self.take()
        if kind == "op" and val == "!":
            node = ("not", self.factor())
        elif kind == "op" and val == "(":
            node = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("missing ')'")
        elif kind == "id":
            if val in ("CONST0", "CONST1"):
                node = ("const", val == "CONST1")
            else:
                if val not in self.names:
                    self.names.append(val)
                node = ("var", val)
        else:
            raise ParseError(f"unexpected token {val!r}")
        while self.peek() == ("op", "'"):
            self.take()
            node = ("not", node)
        return node


def _eval_ast(node, env, mask):
    op = node[0]
    if op == "var":
        return env[node[1]]
    if op == "const":
        return mask if node[1] else 0
    if op == "not":
        return ~_eval_ast(node[1], env, mask) & mask
    vals = [_eval_ast(n, env, mask) for n in node[1]]
    acc = vals[0]
    for v in vals[1:]:
        acc = acc & v if op == "and" else acc | v
    return acc


def expression_table(expr, pins=None):
    """Truth table of a genlib expression; returns (table, pin order)."""
    p = _ExprParser(expr)
    ast = p.parse()
    order = list(pins) if pins else p.names
    missing = [n for n in p.names if n not in order]
    if missing:
        raise ParseError(f"expression uses undeclared pins {missing}")
    n = len(order)
    mask = truth.table_mask(n)
    env = {name: truth.var_table(i, n) for i, name in enumerate(order)}
    return _eval_ast(ast, env, mask), tuple(order)


_GATE_RE = re.compile(r"GATE\s+(\S+)\s+(\S+)\s+([^=\s]+)\s*=\s*([^;]*);", re.S)


def parse_genlib(text, dff_delay=1.0, dff_area=1.0, splitter_delay=1.0, splitter_area=1.0):
    """Parse a genlib library.

    Gate delay is the maximum over PIN lines of the rise and fall block delays.
    Gates with more than six inputs are skipped with a warning.
    """
    body = re.sub(r"#[^\n]*", "", text)
    matches = list(_GATE_RE.finditer(body))
    if not matches:
        raise ParseError("empty library")
    gates = []
    for idx, m in enumerate(matches):
        name, area_s, out, expr = m.groups()
        end = matches[idx + 1].start() if idx + 1 < len(matches) else len(body)
        pin_text = body[m.end():end]
        try:
            area = float(area_s)
        except ValueError:
            raise ParseError(f"gate {name}: bad area {area_s!r}") from None
        pin_names, delay = [], 0.0
        for pm in re.finditer(r"PIN\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)", pin_text):
            pname = pm.group(1)
            rise, fall = float(pm.group(5)), float(pm.group(7))
            delay = max(delay, rise, fall)
            if pname != "*":
                pin_names.append(pname)
        try:
            tt, order = expression_table(expr.strip(), pin_names or None)
        except ParseError as e:
            raise ParseError(f"gate {name}: {e}") from None
        if len(order) > MAX_FANIN:
            log.warning("skipping gate %s with %d inputs", name, len(order))
            continue
        gates.append(LibGate(name, area, order, tt, delay, out, expr.strip()))
    if not gates:
        raise ParseError("empty library")
    dff, spl = builtin_cells(dff_delay, dff_area, splitter_delay, splitter_area)
    return CellLibrary(gates, dff, spl)


# ---------------------------------------------------------------------------
# mapped netlist


def write_mapped_blif(net):
    """Emit a balanced, splitter-legal mapped network as BLIF ``.gate`` lines."""
    from .network import NetworkError

    if not (net.balanced and net.splitter_legal):
        raise NetworkError("network must be balanced and splitter-legal before writing")
    lines = [f".model {net.name}"]
    if net.inputs:
        lines.append(".inputs " + " ".join(net.inputs))
    if net.outputs:
        lines.append(".outputs " + " ".join(net.outputs))
    for cell in net.topological_cells():
        pins = [f"{p}={n}" for p, n in zip(cell.gate.pins, cell.fanins)]
        if cell.kind == "splitter":
            pins += [f"{cell.gate.output}{i}={n}" for i, n in enumerate(cell.outputs)]
        else:
            pins.append(f"{cell.gate.output}={cell.outputs[0]}")
        lines.append(f".gate {cell.gate.name} " + " ".join(pins))
    for po in net.outputs:
        src = net.po_nets[po]
        if src != po:
            lines.append(f".names {src} {po}")
            lines.append("1 1")
    lines.append(".end")
    return "\n".join(lines) + "\n"


def parse_mapped_blif(text, lib):
    """Read back the output of :func:`write_mapped_blif`."""
    from .network import Cell, MappedNetwork

    name, inputs, outputs = "top", [], []
    cells, aliases = [], {}
    pending_alias = None
    for num, line in _logical_lines(text):
        toks = line.split()
        head = toks[0]
        if pending_alias is not None:
            if toks != ["1", "1"]:
                raise ParseError("only identity .names aliases are allowed", num, 1)
            aliases[pending_alias[1]] = pending_alias[0]
            pending_alias = None
            continue
        if head == ".model":
            name = toks[1]
        elif head == ".inputs":
            inputs.extend(toks[1:])
        elif head == ".outputs":
            outputs.extend(toks[1:])
        elif head == ".names":
            if len(toks) != 3:
                raise ParseError("only 1-input .names aliases are allowed", num, 1)
            pending_alias = (toks[1], toks[2])
        elif head == ".gate":
            gate = lib.by_name.get(toks[1])
            if gate is None:
                raise ParseError(f"unknown gate {toks[1]}", num, line.index(toks[1]) + 1)
            conn = dict(t.split("=", 1) for t in toks[2:])
            fanins = [conn[p] for p in gate.pins]
            if gate.name == lib.splitter.name:
                outs = [conn[f"{gate.output}0"], conn[f"{gate.output}1"]]
                kind = "splitter"
            else:
                outs = [conn[gate.output]]
                if gate.name == lib.dff.name:
                    kind = "dff"
                elif gate.fanin_count == 0:
                    kind = "const"
                else:
                    kind = "gate"
            cells.append(Cell(kind, gate, fanins, outs))
        elif head == ".end":
            pass
        else:
            raise ParseError(f"unexpected directive {head}", num, 1)
    po_nets = {po: aliases.get(po, po) for po in outputs}
    net = MappedNetwork(name, inputs, outputs, cells, po_nets)
    net.balanced = not net.balance_violations()
    net.splitter_legal = not net.splitter_violations()
    return net


REPORT_KEYS = (
    "gates",
    "dffs",
    "splitters",
    "depth",
    "worst_stage_delay",
    "psd",
    "runtime",
    "iterations",
)


def write_report(stats):
    """Flat JSON record with exactly the :data:`REPORT_KEYS` fields."""
    rec = {
        "gates": stats.gate_count,
        "dffs": stats.dff_count,
        "splitters": stats.splitter_count,
        "depth": stats.logical_depth,
        "worst_stage_delay": stats.worst_stage_delay,
        "psd": stats.worst_stage_delay * stats.logical_depth,
        "runtime": stats.runtime,
        "iterations": stats.iterations,
    }
    return json.dumps(rec, sort_keys=False)
