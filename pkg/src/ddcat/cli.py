"""Command-line front end: equality checking, normalization, tiling, rendering."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .diagram2 import LayeredDiagram, Level, Wire, WireWord, dump_diagram, load_diagram
from .errors import DdcatError
from .expr import parse_expr, print_expr
from .normalize import decide_eq_diagrams, normalize
from .render import render_diagram_svg, render_tiling_svg
from .signature import CellBoundary, HWord, VWord, load_signature, make_signature
from .tiling import (NotBinaryComposable, extract_expr, reconstruct,
                     tiling_from_doc, tiling_to_doc)
from .translate import translate_expr, translate_signature


def _color_enabled():
    return sys.stdout.isatty() and os.environ.get("DDCAT_COLOR") != "0"


def _verdict(text, good):
    if _color_enabled():
        code = "32" if good else "31"
        return "\x1b[%sm%s\x1b[0m" % (code, text)
    return text


def _load_sig(path):
    with open(path, encoding="utf-8") as fh:
        return load_signature(fh.read())


def _load_expr(path, sig):
    with open(path, encoding="utf-8") as fh:
        return parse_expr(fh.read(), sig)


def cmd_check(args):
    sig = _load_sig(args.signature)
    sig2 = translate_signature(sig)
    d1 = translate_expr(_load_expr(args.exprs[0], sig), sig, sig2)
    d2 = translate_expr(_load_expr(args.exprs[1], sig), sig, sig2)
    cod1, cod2 = None, None
    from .diagram2 import validate_diagram

    cod1 = validate_diagram(d1, sig2)
    cod2 = validate_diagram(d2, sig2)
    if d1.domain != d2.domain or cod1 != cod2:
        print(_verdict("NOT-EQUAL", False), "boundary mismatch")
        return 1
    if sorted(l.cell for l in d1.levels) != sorted(l.cell for l in d2.levels):
        print(_verdict("NOT-EQUAL", False), "multiset mismatch")
        return 1
    if normalize(d1, sig2).diagram == normalize(d2, sig2).diagram:
        print(_verdict("EQUAL", True), "normal forms agree")
        return 0
    print(_verdict("NOT-EQUAL", False), "normal forms differ")
    return 1


def cmd_normalize(args):
    sig = _load_sig(args.signature)
    sig2 = translate_signature(sig)
    d = translate_expr(_load_expr(args.expr, sig), sig, sig2)
    sys.stdout.write(dump_diagram(normalize(d, sig2).diagram))
    return 0


def cmd_translate(args):
    sig = _load_sig(args.signature)
    sig2 = translate_signature(sig)
    d = translate_expr(_load_expr(args.expr, sig), sig, sig2)
    sys.stdout.write(dump_diagram(d))
    return 0


def cmd_tile(args):
    sig = _load_sig(args.signature)
    sig2 = translate_signature(sig)
    with open(args.diagram, encoding="utf-8") as fh:
        d = load_diagram(fh.read(), sig2)
    m = reconstruct(d, sig, sig2)
    sys.stdout.write(json.dumps(tiling_to_doc(m), indent=2) + "\n")
    res = extract_expr(m, sig)
    if isinstance(res, NotBinaryComposable):
        print(_verdict("PINWHEEL", False))
        return 1
    print(_verdict("COMPOSABLE", True))
    return 0


def cmd_extract(args):
    sig = _load_sig(args.signature)
    with open(args.tiling, encoding="utf-8") as fh:
        doc = json.loads(fh.read())
    m = tiling_from_doc(doc, sig)
    res = extract_expr(m, sig)
    if isinstance(res, NotBinaryComposable):
        print("NOT-BINARY-COMPOSABLE")
        return 1
    print(print_expr(res))
    return 0


def cmd_render(args):
    sig = _load_sig(args.signature)
    sig2 = translate_signature(sig)
    path = args.input
    if path.endswith(".expr"):
        svg = render_diagram_svg(translate_expr(_load_expr(path, sig), sig, sig2), sig2)
    elif path.endswith(".diag"):
        with open(path, encoding="utf-8") as fh:
            svg = render_diagram_svg(load_diagram(fh.read(), sig2), sig2)
    elif path.endswith(".tiling"):
        with open(path, encoding="utf-8") as fh:
            svg = render_tiling_svg(tiling_from_doc(json.loads(fh.read()), sig), sig)
    else:
        raise DdcatError("cannot infer input kind from %r (use .expr/.diag/.tiling)" % path)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return 0


def bench_signature():
    a = "A"
    hw, vw = HWord(a, ("h",)), VWord(a, ("v",))
    return make_signature(
        [a], {"h": (a, a)}, {"v": (a, a)},
        {
            "par": CellBoundary(hw, hw, vw, vw),
            "lad": CellBoundary(hw, hw, VWord(a), VWord(a)),
        },
    )


def chain_diagram(sig, n, reverse=True):
    """n disjoint copies of a 2-wire generator, worst-case order by default."""
    wires = tuple(w for _ in range(n) for w in (Wire("vop", "v"), Wire("h", "h")))
    offsets = range(2 * (n - 1), -1, -2) if reverse else range(0, 2 * n, 2)
    return LayeredDiagram(WireWord("A", wires), tuple(Level(k, "par") for k in offsets))


def ladder_diagram(sig, n):
    """n fully connected 1-in 1-out generators; nothing ever swaps."""
    return LayeredDiagram(WireWord("A", (Wire("h", "h"),)),
                          tuple(Level(0, "lad") for _ in range(n)))


def cmd_bench(args):
    sig = bench_signature()
    sig2 = translate_signature(sig)
    sizes = [int(s) for s in args.sizes.split(",") if s]
    print("n,swap_count,wall_ms")
    for n in sizes:
        if args.family == "chain":
            worst = chain_diagram(sig, n, reverse=True)
            sorted_d = chain_diagram(sig, n, reverse=False)
        else:
            worst = ladder_diagram(sig, n)
            sorted_d = ladder_diagram(sig, n)
        swaps = normalize(worst, sig2).swaps
        t0 = time.perf_counter()
        decide_eq_diagrams(worst, sorted_d, sig2)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        print("%d,%d,%.3f" % (n, swaps, wall_ms))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ddcat",
        description="Decide equality of square-cell expressions by normalizing "
                    "their layered wire diagrams; rebuild and test planar tilings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide whether two expressions denote the same cell")
    p.add_argument("-s", "--signature", required=True)
    p.add_argument("exprs", nargs=2, metavar="EXPR_FILE")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("normalize", help="print the canonical diagram of an expression")
    p.add_argument("-s", "--signature", required=True)
    p.add_argument("expr", metavar="EXPR_FILE")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("translate", help="print the layered diagram of an expression")
    p.add_argument("-s", "--signature", required=True)
    p.add_argument("expr", metavar="EXPR_FILE")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("tile", help="rebuild the tiling of an admissible diagram")
    p.add_argument("-s", "--signature", required=True)
    p.add_argument("diagram", metavar="DIAG_FILE")
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("extract", help="decompose a rectangular tiling into an expression")
    p.add_argument("-s", "--signature", required=True)
    p.add_argument("tiling", metavar="TILING_FILE")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("render", help="render an expression, diagram or tiling to SVG")
    p.add_argument("-s", "--signature", required=True)
    p.add_argument("input", metavar="INPUT_FILE")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="swap counts and wall times on benchmark families")
    p.add_argument("--family", choices=("chain", "ladder"), default="chain")
    p.add_argument("--sizes", default="8,16,32,64,128")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (DdcatError, OSError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def entry():
    sys.exit(main())
