"""Double signatures: objects, edge generators and square cells.

A signature declares a set of objects, horizontal and vertical edge
generators with endpoints among the objects, and square cells whose four
boundary words close up at the corners.  Words of generators are the
1-dimensional morphisms; empty words carry an explicit anchor object so
that identity morphisms stay comparable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import AnchorMismatch, ParseError, RangeError, ValidationError

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class HWord:
    """A composable list of horizontal generators, anchored at its start object."""

    at: str
    gens: tuple[str, ...] = ()

    def __len__(self):
        return len(self.gens)

    def is_identity(self):
        return not self.gens


@dataclass(frozen=True)
class VWord:
    """A composable list of vertical generators, listed top to bottom."""

    at: str
    gens: tuple[str, ...] = ()

    def __len__(self):
        return len(self.gens)

    def is_identity(self):
        return not self.gens


@dataclass(frozen=True)
class CellBoundary:
    domh: HWord
    codh: HWord
    domv: VWord
    codv: VWord


@dataclass(frozen=True)
class DoubleSignature:
    objects: frozenset[str]
    hgens: dict[str, tuple[str, str]]
    vgens: dict[str, tuple[str, str]]
    cells: dict[str, CellBoundary]

    # -- word helpers -------------------------------------------------

    def _gen_table(self, word):
        if isinstance(word, HWord):
            return self.hgens
        if isinstance(word, VWord):
            return self.vgens
        raise TypeError("expected HWord or VWord, got %r" % (word,))

    def word_end(self, word):
        table = self._gen_table(word)
        obj = word.at
        for g in word.gens:
            if g not in table:
                raise ValidationError("unknown generator %r" % g)
            dom, cod = table[g]
            if dom != obj:
                raise ValidationError(
                    "broken chain in word: %r starts at %r, expected %r" % (g, dom, obj))
            obj = cod
        return obj

    def check_word(self, word):
        if word.at not in self.objects:
            raise ValidationError("unknown object %r" % word.at)
        self.word_end(word)
        return word

    def hword(self, at, gens=()):
        return self.check_word(HWord(at, tuple(gens)))

    def vword(self, at, gens=()):
        return self.check_word(VWord(at, tuple(gens)))

    def concat(self, a, b):
        """Concatenate two words of the same kind; ends must chain."""
        if type(a) is not type(b):
            raise ValidationError("cannot concatenate words of different kinds")
        if self.word_end(a) != b.at:
            raise ValidationError(
                "cannot concatenate: first word ends at %r, second starts at %r"
                % (self.word_end(a), b.at))
        return type(a)(a.at, a.gens + b.gens)

    def boundary(self, cell):
        from .errors import UnknownGenerator

        if cell not in self.cells:
            raise UnknownGenerator("unknown cell %r" % cell)
        return self.cells[cell]


def word_endpoints(word, sig):
    """Start and end objects of a word; both equal the anchor when empty."""
    return word.at, sig.word_end(word)


def factor_at(word, i, length, sig):
    """The contiguous subword of `length` generators starting after position i.

    A zero-length factor is the empty word anchored at the i-th cut object.
    """
    if i < 0 or length < 0 or i + length > len(word.gens):
        raise RangeError(
            "factor (%d, %d) out of range for word of length %d" % (i, length, len(word.gens)))
    prefix = type(word)(word.at, word.gens[:i])
    anchor = sig.word_end(prefix)
    return type(word)(anchor, word.gens[i : i + length])


def is_prefix(candidate, word, sig):
    if len(candidate.gens) > len(word.gens):
        return False
    return factor_at(word, 0, len(candidate.gens), sig) == candidate


def _check_name(name, kind):
    if not isinstance(name, str) or not _IDENT.match(name):
        raise ValidationError("invalid %s name %r" % (kind, name))
    return name


def make_signature(objects, hgens, vgens, cells):
    """Validate the generating data and assemble a signature."""
    objset = set()
    for o in objects:
        _check_name(o, "object")
        if o in objset:
            raise ValidationError("duplicate object %r" % o)
        objset.add(o)

    def check_gens(table, kind):
        out = {}
        for name, (dom, cod) in table.items():
            _check_name(name, kind)
            if name in out:
                raise ValidationError("duplicate %s %r" % (kind, name))
            for obj in (dom, cod):
                if obj not in objset:
                    raise ValidationError("unknown object %r in %s %r" % (obj, kind, name))
            out[name] = (dom, cod)
        return out

    sig = DoubleSignature(frozenset(objset), check_gens(hgens, "hgen"),
                          check_gens(vgens, "vgen"), {})
    seen = set(sig.hgens) | set(sig.vgens)
    for name, b in cells.items():
        _check_name(name, "cell")
        if name in sig.cells or name in seen:
            raise ValidationError("duplicate cell %r" % name)
        for w in (b.domh, b.codh):
            if not isinstance(w, HWord):
                raise ValidationError("cell %r: expected horizontal word" % name)
            sig.check_word(w)
        for w in (b.domv, b.codv):
            if not isinstance(w, VWord):
                raise ValidationError("cell %r: expected vertical word" % name)
            sig.check_word(w)
        # corner equations of a square cell
        if b.domh.at != b.domv.at:
            raise ValidationError("cell %r violates corner equation at top-left" % name)
        if sig.word_end(b.domh) != b.codv.at:
            raise ValidationError("cell %r violates corner equation at top-right" % name)
        if sig.word_end(b.domv) != b.codh.at:
            raise ValidationError("cell %r violates corner equation at bottom-left" % name)
        if sig.word_end(b.codh) != sig.word_end(b.codv):
            raise ValidationError("cell %r violates corner equation at bottom-right" % name)
        sig.cells[name] = b
    return sig


# -- document format ----------------------------------------------------

_WORD_KEYS = {"at", "gens"}
_GEN_KEYS = {"name", "dom", "cod"}
_CELL_KEYS = {"name", "domh", "codh", "domv", "codv"}
_TOP_KEYS = {"objects", "hgens", "vgens", "cells"}


def _word_from_doc(doc, cls, where):
    if not isinstance(doc, dict) or set(doc) - _WORD_KEYS:
        raise ParseError("malformed word in %s" % where)
    gens = doc.get("gens", [])
    if "at" not in doc or not isinstance(gens, list):
        raise ParseError("malformed word in %s" % where)
    return cls(doc["at"], tuple(gens))


def word_to_doc(word):
    return {"at": word.at, "gens": list(word.gens)}


def load_signature(text):
    """Parse and validate a signature document (see README for the format)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("invalid JSON: %s" % exc) from exc
    if not isinstance(doc, dict):
        raise ParseError("signature document must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ParseError("unknown keys in signature document: %s" % sorted(unknown))

    def gens_from(key):
        out = {}
        for entry in doc.get(key, []):
            if not isinstance(entry, dict) or set(entry) != _GEN_KEYS:
                raise ParseError("malformed generator entry in %r" % key)
            if entry["name"] in out:
                raise ValidationError("duplicate %s %r" % (key, entry["name"]))
            out[entry["name"]] = (entry["dom"], entry["cod"])
        return out

    cells = {}
    for entry in doc.get("cells", []):
        if not isinstance(entry, dict) or set(entry) != _CELL_KEYS:
            raise ParseError("malformed cell entry")
        name = entry["name"]
        if name in cells:
            raise ValidationError("duplicate cell %r" % name)
        cells[name] = CellBoundary(
            domh=_word_from_doc(entry["domh"], HWord, "cell %r" % name),
            codh=_word_from_doc(entry["codh"], HWord, "cell %r" % name),
            domv=_word_from_doc(entry["domv"], VWord, "cell %r" % name),
            codv=_word_from_doc(entry["codv"], VWord, "cell %r" % name),
        )
    return make_signature(doc.get("objects", []), gens_from("hgens"),
                          gens_from("vgens"), cells)


def emit_signature(sig):
    doc = {
        "objects": sorted(sig.objects),
        "hgens": [{"name": n, "dom": d, "cod": c} for n, (d, c) in sorted(sig.hgens.items())],
        "vgens": [{"name": n, "dom": d, "cod": c} for n, (d, c) in sorted(sig.vgens.items())],
        "cells": [
            {
                "name": n,
                "domh": word_to_doc(b.domh),
                "codh": word_to_doc(b.codh),
                "domv": word_to_doc(b.domv),
                "codv": word_to_doc(b.codv),
            }
            for n, b in sorted(sig.cells.items())
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def require_same_anchor(h, v):
    if h.at != v.at:
        raise AnchorMismatch("words anchored at %r and %r" % (h.at, v.at))
