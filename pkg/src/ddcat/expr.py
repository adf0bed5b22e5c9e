"""Syntax trees for square cells: composition, identities, parsing, printing.

Composition is spatial: ``(a | b)`` puts a to the left of b, ``(a / b)``
puts a above b.  Distinct parenthesizations are distinct trees; equality
of the cells they denote is decided elsewhere, never at the AST level.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .errors import CompositionError, GenerationError, ParseError
from .signature import CellBoundary, HWord, VWord


class CellExpr:
    pass


@dataclass(frozen=True)
class Gen(CellExpr):
    cell: str


@dataclass(frozen=True)
class HComp(CellExpr):
    left: CellExpr
    right: CellExpr


@dataclass(frozen=True)
class VComp(CellExpr):
    top: CellExpr
    bottom: CellExpr


@dataclass(frozen=True)
class HId(CellExpr):
    """Identity for horizontal composition, on a vertical word."""

    v: VWord


@dataclass(frozen=True)
class VId(CellExpr):
    """Identity for vertical composition, on a horizontal word."""

    h: HWord


def children(e):
    if isinstance(e, HComp):
        return (e.left, e.right)
    if isinstance(e, VComp):
        return (e.top, e.bottom)
    return ()


def leaf_count(e):
    """Number of generator leaves (identities do not count)."""
    total = 0
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Gen):
            total += 1
        else:
            stack.extend(children(node))
    return total


def boundary_of(e, sig):
    """Infer the four boundary words of an expression, or fail loudly."""
    done: dict[int, CellBoundary] = {}
    stack = [e]
    while stack:
        node = stack[-1]
        if id(node) in done:
            stack.pop()
            continue
        kids = children(node)
        missing = [k for k in kids if id(k) not in done]
        if missing:
            stack.extend(missing)
            continue
        stack.pop()
        if isinstance(node, Gen):
            done[id(node)] = sig.boundary(node.cell)
        elif isinstance(node, HId):
            v = sig.check_word(node.v)
            end = sig.word_end(v)
            done[id(node)] = CellBoundary(HWord(v.at), HWord(end), v, v)
        elif isinstance(node, VId):
            h = sig.check_word(node.h)
            end = sig.word_end(h)
            done[id(node)] = CellBoundary(h, h, VWord(h.at), VWord(end))
        elif isinstance(node, HComp):
            l, r = done[id(node.left)], done[id(node.right)]
            if l.codv != r.domv:
                raise CompositionError(
                    "horizontal composition: shared vertical edge mismatch, %r vs %r"
                    % (l.codv, r.domv))
            done[id(node)] = CellBoundary(
                sig.concat(l.domh, r.domh), sig.concat(l.codh, r.codh), l.domv, r.codv)
        elif isinstance(node, VComp):
            t, b = done[id(node.top)], done[id(node.bottom)]
            if t.codh != b.domh:
                raise CompositionError(
                    "vertical composition: shared horizontal edge mismatch, %r vs %r"
                    % (t.codh, b.domh))
            done[id(node)] = CellBoundary(
                t.domh, b.codh, sig.concat(t.domv, b.domv), sig.concat(t.codv, b.codv))
        else:
            raise TypeError("not a CellExpr: %r" % (node,))
    return done[id(e)]


# -- concrete syntax ----------------------------------------------------

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|1@|[()|/.])")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError("unexpected character %r" % text[pos], pos)
            break
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, sig, length):
        self.tokens = tokens
        self.sig = sig
        self.pos = 0
        self.length = length

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def next(self, expect=None):
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of input", self.length)
        tok, at = self.tokens[self.pos]
        if expect is not None and tok != expect:
            raise ParseError("expected %r, got %r" % (expect, tok), at)
        self.pos += 1
        return tok, at

    def parse_expr(self):
        tok = self.peek()
        if tok == "(":
            self.next()
            left = self.parse_expr()
            op, at = self.next()
            if op not in ("|", "/"):
                raise ParseError("expected '|' or '/', got %r" % op, at)
            right = self.parse_expr()
            self.next(")")
            return HComp(left, right) if op == "|" else VComp(left, right)
        if tok in ("hid", "vid"):
            kind, _ = self.next()
            self.next("(")
            word = self.parse_path(kind)
            self.next(")")
            return HId(word) if kind == "hid" else VId(word)
        if tok is None:
            raise ParseError("unexpected end of input", self.length)
        name, at = self.next()
        if not re.match(r"[A-Za-z_]", name):
            raise ParseError("expected expression, got %r" % name, at)
        return Gen(name)

    def parse_path(self, kind):
        cls = VWord if kind == "hid" else HWord
        table = self.sig.vgens if kind == "hid" else self.sig.hgens
        tok = self.peek()
        if tok == "1@":
            self.next()
            obj, _ = self.next()
            return self.sig.check_word(cls(obj))
        gens = []
        name, at = self.next()
        gens.append(name)
        while self.peek() == ".":
            self.next()
            name, _ = self.next()
            gens.append(name)
        if gens[0] not in table:
            raise ParseError("unknown generator %r in %s(...)" % (gens[0], kind), at)
        anchor = table[gens[0]][0]
        return self.sig.check_word(cls(anchor, tuple(gens)))


def parse_expr(text, sig):
    parser = _Parser(_tokenize(text), sig, len(text))
    e = parser.parse_expr()
    if parser.pos != len(parser.tokens):
        raise ParseError("trailing input %r" % parser.tokens[parser.pos][0],
                         parser.tokens[parser.pos][1])
    return e


def _path_text(word):
    if not word.gens:
        return "1@%s" % word.at
    return ".".join(word.gens)


def print_expr(e):
    """Inverse of parse_expr on ASTs."""
    if isinstance(e, Gen):
        return e.cell
    if isinstance(e, HComp):
        return "(%s | %s)" % (print_expr(e.left), print_expr(e.right))
    if isinstance(e, VComp):
        return "(%s / %s)" % (print_expr(e.top), print_expr(e.bottom))
    if isinstance(e, HId):
        return "hid(%s)" % _path_text(e.v)
    if isinstance(e, VId):
        return "vid(%s)" % _path_text(e.h)
    raise TypeError("not a CellExpr: %r" % (e,))


# -- random generation for tests -----------------------------------------

def random_expr(sig, size_budget, seed):
    """A well-formed expression with at most size_budget generator leaves.

    Grows outward from a random generator, attaching compatible generators
    or identities; deterministic in the seed.
    """
    if size_budget < 1:
        raise GenerationError("size budget must be at least 1")
    if not sig.cells:
        raise GenerationError("signature has no cells")
    rng = random.Random(seed)
    names = sorted(sig.cells)
    e = Gen(rng.choice(names))
    b = boundary_of(e, sig)
    leaves = 1
    id_budget = max(2, size_budget // 2)
    while leaves < size_budget:
        grown = False
        for side in rng.sample(("right", "left", "below", "above"), 4):
            cands = [n for n in names if _fits(sig.cells[n], side, b)]
            if not cands:
                continue
            e, b = _attach(sig, e, b, side, Gen(rng.choice(cands)))
            leaves += 1
            grown = True
            break
        if not grown or (id_budget > 0 and rng.random() < 0.15):
            if id_budget <= 0:
                break
            side = rng.choice(("right", "left", "below", "above"))
            e, b = _attach(sig, e, b, side, _identity_for(side, b))
            id_budget -= 1
            if not grown and id_budget <= 0:
                break
    return e


def _fits(cand, side, b):
    if side == "right":
        return cand.domv == b.codv
    if side == "left":
        return cand.codv == b.domv
    if side == "below":
        return cand.domh == b.codh
    return cand.codh == b.domh


def _identity_for(side, b):
    if side == "right":
        return HId(b.codv)
    if side == "left":
        return HId(b.domv)
    if side == "below":
        return VId(b.codh)
    return VId(b.domh)


def _attach(sig, e, b, side, piece):
    if side == "right":
        e = HComp(e, piece)
    elif side == "left":
        e = HComp(piece, e)
    elif side == "below":
        e = VComp(e, piece)
    else:
        e = VComp(piece, e)
    return e, boundary_of(e, sig)
