"""Rotation of square-cell expressions into layered wire diagrams.

Each cell becomes a node typed vop(domv)++h(domh) -> h(codh)++vop(codv);
horizontal composition stacks the left factor above-left of the right one,
vertical composition stacks the top factor above-right of the bottom one.
Identities become diagrams with no levels.
"""

from __future__ import annotations

from .diagram2 import (LayeredDiagram, Level, Sig2, TwoGenType, WireWord,
                       concat_wire_words, h_wires, identity_diagram, juxtapose,
                       stack, vop_reversal)
from .expr import Gen, HComp, HId, VComp, VId, boundary_of, children


def cell_wire_type(boundary, sig):
    inp = concat_wire_words(vop_reversal(boundary.domv, sig),
                            h_wires(boundary.domh, sig), sig)
    out = concat_wire_words(h_wires(boundary.codh, sig),
                            vop_reversal(boundary.codv, sig), sig)
    return TwoGenType(inp, out)


def translate_signature(sig):
    return Sig2(sig, {name: cell_wire_type(b, sig) for name, b in sig.cells.items()})


def translate_expr(e, sig, sig2=None):
    """Structural recursion over the expression, with an explicit work stack."""
    if sig2 is None:
        sig2 = translate_signature(sig)
    boundary_of(e, sig)  # fail early on ill-formed input
    done = {}
    work = [e]
    while work:
        node = work[-1]
        if id(node) in done:
            work.pop()
            continue
        kids = children(node)
        missing = [k for k in kids if id(k) not in done]
        if missing:
            work.extend(missing)
            continue
        work.pop()
        if isinstance(node, Gen):
            t = sig2.types[node.cell]
            done[id(node)] = LayeredDiagram(t.input, (Level(0, node.cell),))
        elif isinstance(node, HId):
            done[id(node)] = identity_diagram(vop_reversal(node.v, sig))
        elif isinstance(node, VId):
            done[id(node)] = identity_diagram(h_wires(node.h, sig))
        elif isinstance(node, HComp):
            bl = boundary_of(node.left, sig)
            br = boundary_of(node.right, sig)
            upper = juxtapose(done[id(node.left)],
                              identity_diagram(h_wires(br.domh, sig)), sig2)
            lower = juxtapose(identity_diagram(h_wires(bl.codh, sig)),
                              done[id(node.right)], sig2)
            done[id(node)] = stack(upper, lower, sig2)
        elif isinstance(node, VComp):
            bt = boundary_of(node.top, sig)
            bb = boundary_of(node.bottom, sig)
            upper = juxtapose(identity_diagram(vop_reversal(bb.domv, sig)),
                              done[id(node.top)], sig2)
            lower = juxtapose(done[id(node.bottom)],
                              identity_diagram(vop_reversal(bt.codv, sig)), sig2)
            done[id(node)] = stack(upper, lower, sig2)
        else:
            raise TypeError("not a CellExpr: %r" % (node,))
    return done[id(e)]
