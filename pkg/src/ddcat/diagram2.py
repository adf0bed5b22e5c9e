"""Layered string diagrams over the one-way translation of a double signature.

A diagram is a domain word of directed wires plus one generator per level
at a wire offset.  Horizontal generators travel forwards (``h``), vertical
ones backwards (``vop``), so square cells become nodes whose inputs read
vop-wires-then-h-wires and whose outputs read h-wires-then-vop-wires.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ParseError, RangeError, TypeMismatch, ValidationError
from .signature import HWord, VWord


@dataclass(frozen=True)
class Wire:
    kind: str  # "h" or "vop"
    gen: str


@dataclass(frozen=True)
class WireWord:
    at: str
    wires: tuple[Wire, ...] = ()

    def __len__(self):
        return len(self.wires)


@dataclass(frozen=True)
class TwoGenType:
    input: WireWord
    output: WireWord


@dataclass(frozen=True)
class Level:
    offset: int
    cell: str


@dataclass(frozen=True)
class LayeredDiagram:
    domain: WireWord
    levels: tuple[Level, ...] = ()


@dataclass(frozen=True)
class Sig2:
    """A double signature together with the wire types of its cells."""

    sig: object
    types: dict[str, TwoGenType]

    def arity(self, cell):
        t = self.types[cell]
        return len(t.input.wires), len(t.output.wires)


def wire_endpoints(wire, sig):
    if wire.kind == "h":
        dom, cod = sig.hgens[wire.gen]
        return dom, cod
    if wire.kind == "vop":
        dom, cod = sig.vgens[wire.gen]
        return cod, dom
    raise ValidationError("unknown wire kind %r" % wire.kind)


def check_wire_word(word, sig):
    obj = word.at
    for w in word.wires:
        start, end = wire_endpoints(w, sig)
        if start != obj:
            raise ValidationError("broken wire chain at %r" % (w,))
        obj = end
    return obj


def h_wires(hword, sig):
    """The wire word of a horizontal word, left to right."""
    return WireWord(hword.at, tuple(Wire("h", g) for g in hword.gens))


def vop_reversal(vword, sig):
    """The reversed wire word of a vertical word: last generator first."""
    anchor = sig.word_end(vword)
    return WireWord(anchor, tuple(Wire("vop", g) for g in reversed(vword.gens)))


def concat_wire_words(a, b, sig):
    if check_wire_word(a, sig) != b.at:
        raise TypeMismatch("wire words do not chain: %r then %r" % (a, b))
    return WireWord(a.at, a.wires + b.wires)


def vword_of_vop_wires(wires, sig):
    """Recover the top-to-bottom vertical word from a run of vop wires."""
    gens = tuple(w.gen for w in reversed(wires))
    anchor = sig.vgens[gens[0]][0] if gens else None
    return gens, anchor


def _cut_object(word, index, sig):
    obj = word.at
    for w in word.wires[:index]:
        obj = wire_endpoints(w, sig)[1]
    return obj


def validate_diagram(d, sig2):
    """Scan the levels top to bottom, splicing each generator; returns the codomain."""
    sig = sig2.sig
    check_wire_word(d.domain, sig)
    wires = list(d.domain.wires)
    anchor = d.domain.at
    for idx, lvl in enumerate(d.levels):
        if lvl.cell not in sig2.types:
            raise TypeMismatch("unknown cell %r" % lvl.cell, level=idx)
        t = sig2.types[lvl.cell]
        k, n = lvl.offset, len(t.input.wires)
        if k < 0 or k + n > len(wires):
            raise TypeMismatch("level out of range", level=idx, position=k)
        if tuple(wires[k : k + n]) != t.input.wires:
            raise TypeMismatch("input word mismatch", level=idx, position=k)
        if _cut_object(WireWord(anchor, tuple(wires)), k, sig) != t.input.at:
            raise TypeMismatch("input anchor mismatch", level=idx, position=k)
        wires[k : k + n] = list(t.output.wires)
    return WireWord(anchor, tuple(wires))


def level_word_at(d, k, sig2):
    """The wire word between levels k-1 and k (the domain for k = 0)."""
    if k < 0 or k > len(d.levels):
        raise RangeError("level index %d out of range" % k)
    return validate_diagram(LayeredDiagram(d.domain, d.levels[:k]), sig2)


def _reads_as(wires, first, then):
    seen_then = False
    for w in wires:
        if w.kind == then:
            seen_then = True
        elif seen_then:
            return False
    return all(w.kind in (first, then) for w in wires)


def is_admissible(d, sig2):
    """Domain reads vop-then-h wires and codomain reads h-then-vop wires."""
    cod = validate_diagram(d, sig2)
    return _reads_as(d.domain.wires, "vop", "h") and _reads_as(cod.wires, "h", "vop")


def identity_diagram(word):
    return LayeredDiagram(word, ())


def juxtapose(left, right, sig2):
    """Side-by-side composite: left's levels first, right's shifted past left's codomain."""
    cod_left = validate_diagram(left, sig2)
    validate_diagram(right, sig2)
    domain = concat_wire_words(left.domain, right.domain, sig2.sig)
    shift = len(cod_left.wires)
    levels = left.levels + tuple(Level(l.offset + shift, l.cell) for l in right.levels)
    return LayeredDiagram(domain, levels)


def stack(top, bottom, sig2):
    cod = validate_diagram(top, sig2)
    if cod != bottom.domain:
        raise TypeMismatch("stack: codomain %r does not match domain %r" % (cod, bottom.domain))
    return LayeredDiagram(top.domain, top.levels + bottom.levels)


# -- document format ----------------------------------------------------

def diagram_to_doc(d):
    return {
        "domain": {
            "at": d.domain.at,
            "wires": [{"kind": w.kind, "gen": w.gen} for w in d.domain.wires],
        },
        "levels": [{"offset": l.offset, "cell": l.cell} for l in d.levels],
    }


def diagram_from_doc(doc, sig2):
    if not isinstance(doc, dict) or set(doc) - {"domain", "levels"}:
        raise ParseError("malformed diagram document")
    dom = doc.get("domain")
    if not isinstance(dom, dict) or set(dom) - {"at", "wires"}:
        raise ParseError("malformed diagram domain")
    wires = []
    for w in dom.get("wires", []):
        if not isinstance(w, dict) or set(w) != {"kind", "gen"} or w["kind"] not in ("h", "vop"):
            raise ParseError("malformed wire entry")
        wires.append(Wire(w["kind"], w["gen"]))
    levels = []
    for l in doc.get("levels", []):
        if not isinstance(l, dict) or set(l) != {"offset", "cell"} or not isinstance(l["offset"], int):
            raise ParseError("malformed level entry")
        levels.append(Level(l["offset"], l["cell"]))
    d = LayeredDiagram(WireWord(dom.get("at"), tuple(wires)), tuple(levels))
    validate_diagram(d, sig2)
    return d


def dump_diagram(d):
    return json.dumps(diagram_to_doc(d), indent=2) + "\n"


def load_diagram(text, sig2):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("invalid JSON: %s" % exc) from exc
    return diagram_from_doc(doc, sig2)
