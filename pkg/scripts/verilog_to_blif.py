"""Convert primitive-gate structural Verilog (ISCAS-style) to BLIF.

Supports and/nand/or/nor/xor/xnor/not/buf instances with positional ports and
``assign a = b;`` / ``assign a = 1'b0;`` statements.  Flip-flop instances
(``fflopd``) are cut: Q becomes a primary input, D a primary output.
"""

import argparse
import itertools
import re
import sys

PRIM = {"and", "nand", "or", "nor", "xor", "xnor", "not", "buf"}


def _rows(kind, n):
    if kind == "and":
        return ["1" * n + " 1"]
    if kind == "nand":
        return ["1" * n + " 0"]
    if kind == "or":
        return [("-" * i + "1" + "-" * (n - i - 1)) + " 1" for i in range(n)]
    if kind == "nor":
        return ["0" * n + " 1"]
    if kind in ("xor", "xnor"):
        want = 1 if kind == "xor" else 0
        return ["".join(map(str, bits)) + " 1" for bits in itertools.product((0, 1), repeat=n)
                if sum(bits) % 2 == want]
    if kind == "not":
        return ["0 1"]
    if kind == "buf":
        return ["1 1"]
    raise ValueError(kind)


def convert(text):
    text = re.sub(r"//[^\n]*", "", text)
    text = re.sub(r"/\*.*?\*/", "", text, flags=re.S)
    name, inputs, outputs, lines = "top", [], [], []
    for stmt in text.split(";"):
        stmt = " ".join(stmt.split())
        if not stmt:
            continue
        head = stmt.split()[0]
        if head == "module":
            name = stmt.split()[1].split("(")[0]
        elif head == "input":
            inputs += [s.strip() for s in stmt[len("input"):].split(",")]
        elif head == "output":
            outputs += [s.strip() for s in stmt[len("output"):].split(",")]
        elif head in ("wire", "endmodule"):
            continue
        elif head == "assign":
            lhs, rhs = (s.strip() for s in stmt[len("assign"):].split("=", 1))
            if rhs in ("1'b0", "1'h0"):
                lines.append(f".names {lhs}")
            elif rhs in ("1'b1", "1'h1"):
                lines += [f".names {lhs}", "1"]
            elif re.fullmatch(r"[\w\[\]\.]+", rhs):
                lines += [f".names {rhs} {lhs}", "1 1"]
            else:
                raise ValueError(f"unsupported assign: {stmt}")
        elif head in PRIM:
            ports = [p.strip() for p in stmt[stmt.index("(") + 1:stmt.rindex(")")].split(",")]
            out, ins = ports[0], ports[1:]
            lines.append(".names " + " ".join(ins + [out]))
            lines += _rows(head, len(ins))
        elif head == "fflopd":
            conn = dict(re.findall(r"\.(\w+)\(([^)]*)\)", stmt))
            inputs.append(conn["Q"].strip())
            outputs.append(conn["D"].strip())
        else:
            raise ValueError(f"unsupported statement: {stmt[:60]}")
    for extra in ("clock", "CK"):
        if extra in inputs and not any(f" {extra} " in f" {l} " for l in lines):
            inputs.remove(extra)
    out = [f".model {name}", ".inputs " + " ".join(inputs), ".outputs " + " ".join(outputs)]
    return "\n".join(out + lines + [".end"]) + "\n"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("verilog", nargs="+")
    ap.add_argument("-o", "--outdir", default=".")
    args = ap.parse_args(argv)
    for path in args.verilog:
        with open(path) as fh:
            blif = convert(fh.read())
        base = path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
        with open(f"{args.outdir}/{base}.blif", "w") as fh:
            fh.write(blif)
        print(f"{path} -> {args.outdir}/{base}.blif", file=sys.stderr)


if __name__ == "__main__":
    main()
