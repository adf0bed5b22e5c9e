"""Partial tilings: staircase-shaped rectangle subdivisions with labeled cells.

The upper-left region between an outer top word and an outer left word is
filled by generator and identity cells; the exposed lower-right boundary is
a staircase whose alternating horizontal/vertical words form the tiling
type.  Admissible layered diagrams fold onto tilings by gluing one
generator per level; rectangular tilings unfold back to expressions by
guillotine cuts when no pinwheel blocks the way.

Geometry is bookkeeping on a refinable rational grid: equivalence and
serialization look only at the combinatorial structure, with coordinates
renormalized to consecutive integers on output.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .diagram2 import is_admissible, validate_diagram
from .errors import (IllegalPosition, NotAdmissible, NotRectangular,
                     ParseError, ValidationError)
from .expr import Gen, HId, VId
from .signature import (HWord, VWord, factor_at, is_prefix,
                        require_same_anchor, word_to_doc)
from .translate import translate_signature

F = Fraction


# -- cells ----------------------------------------------------------------

@dataclass(frozen=True)
class GenLabel:
    name: str


@dataclass(frozen=True)
class HIdLabel:
    v: VWord


@dataclass(frozen=True)
class VIdLabel:
    h: HWord


@dataclass(frozen=True)
class Side:
    """A cell edge: its word plus one crossing coordinate per generator.

    Horizontal sides list coordinates left to right, vertical sides top to
    bottom, matching word order.
    """

    word: object
    coords: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class Cell:
    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction
    label: object
    top: Side
    bottom: Side
    left: Side
    right: Side

    def rect(self):
        return (self.x0, self.y0, self.x1, self.y1)

    def is_identity(self):
        return not isinstance(self.label, GenLabel)


@dataclass(frozen=True)
class StairStep:
    """One staircase step: a horizontal run then the vertical run above its end."""

    hword: HWord
    h_y: Fraction
    h_x0: Fraction
    h_x1: Fraction
    h_coords: tuple
    vword: VWord
    v_x: Fraction
    v_y0: Fraction
    v_y1: Fraction
    v_coords: tuple


@dataclass(frozen=True)
class PartialTiling:
    htype: HWord
    vtype: VWord
    steps_words: tuple
    left_x: Fraction
    top_y: Fraction
    left_coords: tuple
    top_coords: tuple
    cells: tuple
    stairs: tuple | None  # geometric staircase; None for document-loaded tilings

    def steps(self):
        return self.steps_words

    def gen_cells(self):
        return tuple(c for c in self.cells if isinstance(c.label, GenLabel))


def _even_asc(lo, hi, n):
    return tuple(lo + (hi - lo) * F(t + 1, n + 1) for t in range(n))


def _even_desc(lo, hi, n):
    return tuple(lo + (hi - lo) * F(n - t, n + 1) for t in range(n))


def _gen_cell(name, b, x0, y0, x1, y1, top_coords=None, left_coords=None):
    top = Side(b.domh, _even_asc(x0, x1, len(b.domh.gens)) if top_coords is None else top_coords)
    left = Side(b.domv, _even_desc(y0, y1, len(b.domv.gens)) if left_coords is None else left_coords)
    return Cell(x0, y0, x1, y1, GenLabel(name), top,
                Side(b.codh, _even_asc(x0, x1, len(b.codh.gens))), left,
                Side(b.codv, _even_desc(y0, y1, len(b.codv.gens))))


def _hid_cell(vw, coords, sig, x0, y0, x1, y1):
    end = sig.word_end(vw)
    return Cell(x0, y0, x1, y1, HIdLabel(vw),
                Side(HWord(vw.at)), Side(HWord(end)), Side(vw, coords), Side(vw, coords))


def _vid_cell(hw, coords, sig, x0, y0, x1, y1):
    end = sig.word_end(hw)
    return Cell(x0, y0, x1, y1, VIdLabel(hw),
                Side(hw, coords), Side(hw, coords), Side(VWord(hw.at)), Side(VWord(end)))


# -- construction ---------------------------------------------------------

def empty_tiling(h, v, sig):
    """The thin corner tiling exposing first v then h, built from identities."""
    sig.check_word(h)
    sig.check_word(v)
    require_same_anchor(h, v)
    a0 = h.at
    endh, endv = sig.word_end(h), sig.word_end(v)
    lh, lv = len(h.gens), len(v.gens)
    if lv and lh:
        ht, wd = F(lv + 1), F(lh + 2)
        vc = _even_desc(F(0), ht, lv)
        hc = _even_asc(F(1), wd, lh)
        cells = (
            _hid_cell(v, vc, sig, F(0), F(0), F(1), ht),
            _hid_cell(VWord(a0), (), sig, F(0), ht, F(1), ht + 1),
            _vid_cell(h, hc, sig, F(1), ht, wd, ht + 1),
        )
        stairs = (
            StairStep(HWord(endv), F(0), F(0), F(1), (), v, F(1), F(0), ht, vc),
            StairStep(h, ht, F(1), wd, hc, VWord(endh), wd, ht, ht + 1, ()),
        )
        top_y, top_coords, left_coords = ht + 1, hc, vc
    elif lv:
        ht = F(lv + 1)
        vc = _even_desc(F(0), ht, lv)
        cells = (
            _hid_cell(v, vc, sig, F(0), F(0), F(1), ht),
            _hid_cell(VWord(a0), (), sig, F(0), ht, F(1), ht + 1),
        )
        stairs = (StairStep(HWord(endv), F(0), F(0), F(1), (), v, F(1), F(0), ht + 1, vc),)
        top_y, top_coords, left_coords = ht + 1, (), vc
    elif lh:
        wd = F(lh + 2)
        hc = _even_asc(F(1), wd, lh)
        cells = (
            _hid_cell(VWord(a0), (), sig, F(0), F(0), F(1), F(1)),
            _vid_cell(h, hc, sig, F(1), F(0), wd, F(1)),
        )
        stairs = (StairStep(h, F(0), F(0), wd, hc, VWord(endh), wd, F(0), F(1), ()),)
        top_y, top_coords, left_coords = F(1), hc, ()
    else:
        cells = (_hid_cell(VWord(a0), (), sig, F(0), F(0), F(1), F(1)),)
        stairs = (StairStep(HWord(a0), F(0), F(0), F(1), (), VWord(a0), F(1), F(0), F(1), ()),)
        top_y, top_coords, left_coords = F(1), (), ()
    return PartialTiling(h, v, tuple((s.hword, s.vword) for s in stairs), F(0), top_y,
                         left_coords, top_coords, cells, stairs)


def gluing_positions(m, boundary, sig):
    """All legal attachment sites (k, i, j) for a cell with the given boundary."""
    res = set()
    steps = m.steps()
    n = len(steps)
    hp, vp = boundary.domh, boundary.domv
    h1, vn = steps[0][0], steps[-1][1]
    for i in range(len(h1.gens) - len(hp.gens) + 1):
        if factor_at(h1, i, len(hp.gens), sig) == hp:
            if i == 0:
                res.add((0, 0, 0))
            elif vp.is_identity():
                res.add((0, i, 0))
    for j in range(len(vn.gens) - len(vp.gens) + 1):
        if factor_at(vn, j, len(vp.gens), sig) == vp:
            if j == 0:
                res.add((n, 0, 0))
            elif hp.is_identity():
                res.add((n, 0, j))
    for k in range(1, n):
        vk, hk1 = steps[k - 1][1], steps[k][0]
        if is_prefix(vp, vk, sig) and is_prefix(hp, hk1, sig):
            res.add((k, 0, 0))
        if vp.is_identity():
            for i in range(len(hk1.gens) - len(hp.gens) + 1):
                if factor_at(hk1, i, len(hp.gens), sig) == hp:
                    res.add((k, i, 0))
        if hp.is_identity():
            for j in range(len(vk.gens) - len(vp.gens) + 1):
                if factor_at(vk, j, len(vp.gens), sig) == vp:
                    res.add((k, 0, j))
    return frozenset(res)


class _Run:
    """Mutable staircase segment used while reassembling after a gluing."""

    __slots__ = ("orient", "line", "lo", "hi", "word", "coords")

    def __init__(self, orient, line, lo, hi, word, coords):
        self.orient = orient
        self.line = line
        self.lo = lo
        self.hi = hi
        self.word = word
        self.coords = tuple(coords)


def _stairs_to_runs(stairs):
    runs = []
    for s in stairs:
        runs.append(_Run("h", s.h_y, s.h_x0, s.h_x1, s.hword, s.h_coords))
        runs.append(_Run("v", s.v_x, s.v_y0, s.v_y1, s.vword, s.v_coords))
    return runs


def _cut_h(run, count, lower=None, flush=True):
    """x-cut after `count` leading wires; flush with the right end when all used.

    `lower` forces the cut strictly right of an earlier cut; `flush=False`
    keeps the cut strictly inside the run even when every wire is used.
    """
    left = run.coords[count - 1] if count else run.lo
    if lower is not None and lower > left:
        left = lower
    if count == len(run.coords):
        return run.hi if flush else (left + run.hi) / 2
    return (left + run.coords[count]) / 2


def _cut_v(run, count, upper=None, flush=True):
    """y-cut below `count` leading (topmost) wires; flush with the bottom when all used."""
    top = run.coords[count - 1] if count else run.hi
    if upper is not None and upper < top:
        top = upper
    if count == len(run.coords):
        return run.lo if flush else (run.lo + top) / 2
    return (top + run.coords[count]) / 2


def _rest(word, start, sig):
    return factor_at(word, start, len(word.gens) - start, sig)


def glue(m, cell_name, pos, sig):
    """Attach a generator at a gluing position, adding filler identity cells
    whenever a staircase step would otherwise break or become an interior
    identity."""
    if m.stairs is None:
        raise ValidationError("tiling has no staircase geometry; rebuild it by gluing")
    b = sig.boundary(cell_name)
    if pos not in gluing_positions(m, b, sig):
        raise IllegalPosition("%r is not a gluing position for %r on this tiling"
                              % (pos, cell_name))
    k, i, j = pos
    n = len(m.stairs)
    all_runs = _stairs_to_runs(m.stairs)
    lh, lv = len(b.domh.gens), len(b.domv.gens)
    new_cells = []
    htype, vtype = m.htype, m.vtype
    top_coords, left_coords = m.top_coords, m.left_coords

    if k == 0:
        st = m.stairs[0]
        h1 = all_runs[0]
        y0, ynew = st.h_y, st.h_y - 1
        site = []
        if i > 0:
            cut1 = _cut_h(h1, i, flush=False)
            skw = factor_at(st.hword, 0, i, sig)
            skc = st.h_coords[:i]
            new_cells.append(_vid_cell(skw, skc, sig, m.left_x, ynew, cut1, y0))
            site.append(_Run("h", ynew, m.left_x, cut1, skw, skc))
            ax0 = cut1
        else:
            cut1 = None
            ax0 = m.left_x
        cut2 = _cut_h(h1, i + lh, lower=cut1)
        alpha = _gen_cell(cell_name, b, ax0, ynew, cut2, y0,
                          top_coords=st.h_coords[i : i + lh])
        site.append(_Run("h", ynew, ax0, cut2, b.codh, alpha.bottom.coords))
        site.append(_Run("v", cut2, ynew, y0, b.codv, alpha.right.coords))
        site.append(_Run("h", y0, cut2, st.h_x1, _rest(st.hword, i + lh, sig),
                         st.h_coords[i + lh :]))
        if i == 0:
            vtype = sig.concat(m.vtype, b.domv)
            left_coords = m.left_coords + alpha.left.coords
        runs = site + all_runs[1:]
    elif k == n:
        st = m.stairs[-1]
        vn = all_runs[-1]
        xr, xnew = st.v_x, st.v_x + 1
        site = []
        cuty1 = _cut_v(vn, j, flush=False) if j > 0 else None
        cuty2 = _cut_v(vn, j + lv, upper=cuty1)
        site.append(_Run("v", xr, st.v_y0, cuty2, _rest(st.vword, j + lv, sig),
                         st.v_coords[j + lv :]))
        if j > 0:
            skw = factor_at(st.vword, 0, j, sig)
            skc = st.v_coords[:j]
            new_cells.append(_hid_cell(skw, skc, sig, xr, cuty1, xnew, m.top_y))
            atop = cuty1
        else:
            atop = m.top_y
        alpha = _gen_cell(cell_name, b, xr, cuty2, xnew, atop,
                          left_coords=st.v_coords[j : j + lv])
        site.append(_Run("h", cuty2, xr, xnew, b.codh, alpha.bottom.coords))
        site.append(_Run("v", xnew, cuty2, atop, b.codv, alpha.right.coords))
        if j > 0:
            site.append(_Run("v", xnew, atop, m.top_y, skw, skc))
        if j == 0:
            htype = sig.concat(m.htype, b.domh)
            top_coords = m.top_coords + alpha.top.coords
        runs = all_runs[:-1] + site
    else:
        stv, sth = m.stairs[k - 1], m.stairs[k]
        vk, hk1 = all_runs[2 * k - 1], all_runs[2 * k]
        xk, yk = stv.v_x, sth.h_y
        site = []
        if i > 0:
            cut_y = _cut_v(vk, 0, flush=False)
            cx1 = _cut_h(hk1, i, flush=False)
            cx2 = _cut_h(hk1, i + lh, lower=cx1)
            skw = factor_at(sth.hword, 0, i, sig)
            skc = sth.h_coords[:i]
            new_cells.append(_vid_cell(skw, skc, sig, xk, cut_y, cx1, yk))
            alpha = _gen_cell(cell_name, b, cx1, cut_y, cx2, yk,
                              top_coords=sth.h_coords[i : i + lh])
            site.append(_Run("v", xk, stv.v_y0, cut_y, stv.vword, stv.v_coords))
            site.append(_Run("h", cut_y, xk, cx1, skw, skc))
            site.append(_Run("h", cut_y, cx1, cx2, b.codh, alpha.bottom.coords))
            site.append(_Run("v", cx2, cut_y, yk, b.codv, alpha.right.coords))
            site.append(_Run("h", yk, cx2, sth.h_x1, _rest(sth.hword, i + lh, sig),
                             sth.h_coords[i + lh :]))
        elif j > 0:
            cy1 = _cut_v(vk, j, flush=False)
            cy2 = _cut_v(vk, j + lv, upper=cy1)
            cut_x = _cut_h(hk1, 0, flush=False)
            skw = factor_at(stv.vword, 0, j, sig)
            skc = stv.v_coords[:j]
            new_cells.append(_hid_cell(skw, skc, sig, xk, cy1, cut_x, yk))
            alpha = _gen_cell(cell_name, b, xk, cy2, cut_x, cy1,
                              left_coords=stv.v_coords[j : j + lv])
            site.append(_Run("v", xk, stv.v_y0, cy2, _rest(stv.vword, j + lv, sig),
                             stv.v_coords[j + lv :]))
            site.append(_Run("h", cy2, xk, cut_x, b.codh, alpha.bottom.coords))
            site.append(_Run("v", cut_x, cy2, cy1, b.codv, alpha.right.coords))
            site.append(_Run("v", cut_x, cy1, yk, skw, skc))
            site.append(_Run("h", yk, cut_x, sth.h_x1, sth.hword, sth.h_coords))
        else:
            cut_y, cut_x = _cut_v(vk, lv), _cut_h(hk1, lh)
            alpha = _gen_cell(cell_name, b, xk, cut_y, cut_x, yk,
                              top_coords=sth.h_coords[:lh], left_coords=stv.v_coords[:lv])
            site.append(_Run("v", xk, stv.v_y0, cut_y, _rest(stv.vword, lv, sig),
                             stv.v_coords[lv:]))
            site.append(_Run("h", cut_y, xk, cut_x, b.codh, alpha.bottom.coords))
            site.append(_Run("v", cut_x, cut_y, yk, b.codv, alpha.right.coords))
            site.append(_Run("h", yk, cut_x, sth.h_x1, _rest(sth.hword, lh, sig),
                             sth.h_coords[lh:]))
        runs = all_runs[: 2 * k - 1] + site + all_runs[2 * k + 1 :]
    new_cells.append(alpha)

    runs, filler = _reassemble(runs, sig)
    stairs = _runs_to_stairs(runs)
    return PartialTiling(htype, vtype, tuple((s.hword, s.vword) for s in stairs),
                         m.left_x, m.top_y, left_coords, top_coords,
                         m.cells + tuple(new_cells) + tuple(filler), stairs)


def _merge_runs(runs, sig):
    out = []
    for r in runs:
        if r.hi == r.lo and not r.word.gens:
            continue
        assert r.hi > r.lo, "zero-extent run carrying wires"
        if out and out[-1].orient == r.orient:
            prev = out[-1]
            assert prev.line == r.line and prev.hi == r.lo, "non-collinear staircase runs"
            if r.orient == "h":
                word = sig.concat(prev.word, r.word)
                coords = prev.coords + r.coords
            else:
                # vertical words read top to bottom: the later (upper) run leads
                word = sig.concat(r.word, prev.word)
                coords = r.coords + prev.coords
            out[-1] = _Run(r.orient, r.line, prev.lo, r.hi, word, coords)
        else:
            out.append(r)
    return out


def _reassemble(runs, sig):
    """Merge collinear runs and patch interior identity steps with filler cells."""
    filler = []
    while True:
        runs = _merge_runs(runs, sig)
        idx = next((t for t in range(1, len(runs) - 1) if not runs[t].word.gens), None)
        if idx is None:
            break
        r = runs[idx]
        if r.orient == "h":
            below, above = runs[idx - 1], runs[idx + 1]
            filler.append(_hid_cell(below.word, below.coords, sig,
                                    below.line, below.lo, above.line, r.line))
            merged = _Run("v", above.line, below.lo, above.hi,
                          sig.concat(above.word, below.word), above.coords + below.coords)
            runs[idx - 2].hi = above.line
            runs[idx - 1 : idx + 2] = [merged]
        else:
            below, above = runs[idx - 1], runs[idx + 1]
            filler.append(_vid_cell(above.word, above.coords, sig,
                                    r.line, below.line, above.hi, above.line))
            merged = _Run("h", below.line, below.lo, above.hi,
                          sig.concat(below.word, above.word), below.coords + above.coords)
            runs[idx + 2].lo = below.line
            runs[idx - 1 : idx + 2] = [merged]
    return runs, filler


def _runs_to_stairs(runs):
    assert runs and runs[0].orient == "h" and runs[-1].orient == "v"
    assert len(runs) % 2 == 0
    stairs = []
    for t in range(0, len(runs), 2):
        hr, vr = runs[t], runs[t + 1]
        assert hr.orient == "h" and vr.orient == "v"
        assert hr.hi == vr.line and vr.lo == hr.line
        if t + 2 < len(runs):
            assert runs[t + 2].lo == vr.line and runs[t + 2].line == vr.hi
        stairs.append(StairStep(hr.word, hr.line, hr.lo, hr.hi, hr.coords,
                                vr.word, vr.line, vr.lo, vr.hi, vr.coords))
    for t, s in enumerate(stairs):
        assert t == 0 or s.hword.gens, "interior identity step survived reassembly"
        assert t == len(stairs) - 1 or s.vword.gens, "interior identity step survived reassembly"
    return tuple(stairs)


# -- reconstruction from layered diagrams ---------------------------------

def _flat_slots(m):
    slots = []
    for hw, vw in m.steps():
        slots.extend(("h", g) for g in hw.gens)
        slots.extend(("vop", g) for g in reversed(vw.gens))
    return slots


def _blocks(m):
    """Flat index ranges of the staircase words: (kind, step, start, end)."""
    out = []
    pos = 0
    for s, (hw, vw) in enumerate(m.steps(), 1):
        out.append(("h", s, pos, pos + len(hw.gens)))
        pos += len(hw.gens)
        out.append(("v", s, pos, pos + len(vw.gens)))
        pos += len(vw.gens)
    return out, pos


def _position_for_span(m, offset, length, boundary, sig):
    """The gluing position determined by a generator's input span in the level word."""
    blocks, total = _blocks(m)
    steps = m.steps()
    n = len(steps)
    lv, lh = len(boundary.domv.gens), len(boundary.domh.gens)

    def block_at(pos):
        for kind, s, start, end in blocks:
            if start <= pos < end:
                return kind, s, start, end
        raise IllegalPosition("offset %d outside the level word" % pos)

    if length > 0:
        if lv and lh:
            kind, s, start, end = block_at(offset)
            if kind != "v" or offset + lv != end:
                raise IllegalPosition("input wires do not straddle a staircase corner")
            return (s, 0, 0)
        if lh:
            kind, s, start, end = block_at(offset)
            if kind != "h" or offset + lh > end:
                raise IllegalPosition("input wires not within one horizontal step")
            return (s - 1, offset - start, 0)
        kind, s, start, end = block_at(offset)
        if kind != "v" or offset + lv > end:
            raise IllegalPosition("input wires not within one vertical step")
        return (s, 0, len(steps[s - 1][1].gens) - (offset - start) - lv)

    # no input wires: classify by the slots around the insertion point
    slots = _flat_slots(m)
    left = slots[offset - 1][0] if offset > 0 else None
    right = slots[offset][0] if offset < total else None
    if right == "h":
        _, s, start, _ = block_at(offset)
        return (s - 1, offset - start, 0)
    if right == "vop":
        kind, s, start, _ = block_at(offset)
        if left == "vop" and start < offset:
            return (s, 0, len(steps[s - 1][1].gens) - (offset - start))
        return (s - 1, len(steps[s - 1][0].gens), 0)
    # right is None: the very end of the level word
    if left == "vop":
        return (n, 0, 0)
    if left == "h":
        return (n - 1, len(steps[n - 1][0].gens), 0)
    return (0, 0, 0)


def reconstruct(d, sig, sig2=None):
    """Fold an admissible layered diagram onto a partial tiling, one gluing per level."""
    if sig2 is None:
        sig2 = translate_signature(sig)
    validate_diagram(d, sig2)
    kinds = [w.kind for w in d.domain.wires]
    if kinds != sorted(kinds, reverse=True):  # vop wires first, then h wires
        raise NotAdmissible("diagram domain is not of the staircase form")
    wires = d.domain.wires
    nv = 0
    while nv < len(wires) and wires[nv].kind == "vop":
        nv += 1
    vgens = tuple(w.gen for w in reversed(wires[:nv]))
    hgens = tuple(w.gen for w in wires[nv:])
    if vgens:
        a0 = sig.vgens[vgens[0]][0]
    elif hgens:
        a0 = sig.hgens[hgens[0]][0]
    else:
        a0 = d.domain.at
    m = empty_tiling(HWord(a0, hgens), VWord(a0, vgens), sig)
    word = list(wires)
    for lvl in d.levels:
        b = sig.boundary(lvl.cell)
        t = sig2.types[lvl.cell]
        pos = _position_for_span(m, lvl.offset, len(t.input.wires), b, sig)
        m = glue(m, lvl.cell, pos, sig)
        word[lvl.offset : lvl.offset + len(t.input.wires)] = list(t.output.wires)
        assert _flat_slots(m) == [(w.kind, w.gen) for w in word], \
            "staircase slots diverged from the level word"
    return m


# -- guillotine extraction ------------------------------------------------

@dataclass(frozen=True)
class NotBinaryComposable:
    """Returned when a sub-rectangle admits no full guillotine cut."""

    rect: tuple


def _leaf_expr(cell):
    if isinstance(cell.label, GenLabel):
        return Gen(cell.label.name)
    if isinstance(cell.label, HIdLabel):
        return HId(cell.label.v)
    if not cell.label.h.gens:
        return HId(VWord(cell.label.h.at))
    return VId(cell.label.h)


def extract_expr(m, sig):
    """Recursive guillotine decomposition of a rectangular tiling.

    Prefers the leftmost full-height vertical cut, then the topmost
    full-width horizontal cut; returns NotBinaryComposable with the
    offending sub-rectangle when neither exists.
    """
    if len(m.steps()) != 1:
        raise NotRectangular("tiling type has %d steps, expected a rectangle" % len(m.steps()))
    cells = m.cells

    def rec(idxs):
        if len(idxs) == 1:
            return _leaf_expr(cells[idxs[0]])
        group = [cells[i] for i in idxs]
        x0, y0 = min(c.x0 for c in group), min(c.y0 for c in group)
        x1, y1 = max(c.x1 for c in group), max(c.y1 for c in group)
        for cut in sorted({c.x0 for c in group} | {c.x1 for c in group}):
            if not x0 < cut < x1:
                continue
            if all(c.x1 <= cut or c.x0 >= cut for c in group):
                left = [i for i in idxs if cells[i].x1 <= cut]
                right = [i for i in idxs if cells[i].x0 >= cut]
                a = rec(left)
                if isinstance(a, NotBinaryComposable):
                    return a
                b = rec(right)
                if isinstance(b, NotBinaryComposable):
                    return b
                from .expr import HComp
                return HComp(a, b)
        for cut in sorted({c.y0 for c in group} | {c.y1 for c in group}, reverse=True):
            if not y0 < cut < y1:
                continue
            if all(c.y1 <= cut or c.y0 >= cut for c in group):
                top = [i for i in idxs if cells[i].y0 >= cut]
                bottom = [i for i in idxs if cells[i].y1 <= cut]
                a = rec(top)
                if isinstance(a, NotBinaryComposable):
                    return a
                b = rec(bottom)
                if isinstance(b, NotBinaryComposable):
                    return b
                from .expr import VComp
                return VComp(a, b)
        return NotBinaryComposable((x0, y0, x1, y1))

    return rec(list(range(len(cells))))


def is_binary_composable(m, sig):
    return not isinstance(extract_expr(m, sig), NotBinaryComposable)


# -- structural keys and equivalence --------------------------------------

def _label_key(label):
    if isinstance(label, GenLabel):
        return ("gen", label.name)
    if isinstance(label, HIdLabel):
        word = label.v
        tag = "hid"
    else:
        word = label.h
        tag = "vid"
    if not word.gens:
        return ("id", word.at)
    return (tag, word.at, word.gens)


def _segments(cells, ci, side, left_x, top_y):
    """Ordered (neighbor, gens) segments along one side of a cell.

    Neighbors are cell indices; gaps are the outer edge or the open
    staircase.  Segments follow word order: left to right for horizontal
    sides, top to bottom for vertical ones.
    """
    c = cells[ci]
    if side in ("top", "bottom"):
        line = c.y1 if side == "top" else c.y0
        lo, hi = c.x0, c.x1
        s = c.top if side == "top" else c.bottom
        touching = [
            (max(lo, d.x0), min(hi, d.x1), di)
            for di, d in enumerate(cells)
            if di != ci and (d.y0 if side == "top" else d.y1) == line
            and max(lo, d.x0) < min(hi, d.x1)
        ]
        outer = side == "top" and line == top_y
        ascending = True
    else:
        line = c.x0 if side == "left" else c.x1
        lo, hi = c.y0, c.y1
        s = c.left if side == "left" else c.right
        touching = [
            (max(lo, d.y0), min(hi, d.y1), di)
            for di, d in enumerate(cells)
            if di != ci and (d.x1 if side == "left" else d.x0) == line
            and max(lo, d.y0) < min(hi, d.y1)
        ]
        outer = side == "left" and line == left_x
        ascending = False
    touching.sort()
    segs = []
    pos = lo
    for a, b, di in touching:
        if a > pos:
            segs.append((pos, a, "outer" if outer else "open"))
        segs.append((a, b, di))
        pos = b
    if pos < hi:
        segs.append((pos, hi, "outer" if outer else "open"))
    out = []
    for a, b, ref in segs:
        gens = tuple(g for g, x in zip(s.word.gens, s.coords) if a < x < b)
        out.append((a, b, ref, gens))
    if not ascending:
        out.reverse()
    return out


def structural_key(m):
    """A coordinate-free fingerprint: labels, words and adjacency in discovery order."""
    cells = m.cells
    start = next(i for i, c in enumerate(cells) if c.x0 == m.left_x and c.y1 == m.top_y)
    segcache = {}

    def segs(ci, side):
        if (ci, side) not in segcache:
            segcache[(ci, side)] = _segments(cells, ci, side, m.left_x, m.top_y)
        return segcache[(ci, side)]

    order = {start: 0}
    queue = [start]
    while queue:
        ci = queue.pop(0)
        for side in ("left", "top", "right", "bottom"):
            for _, _, ref, _ in segs(ci, side):
                if isinstance(ref, int) and ref not in order:
                    order[ref] = len(order)
                    queue.append(ref)
    assert len(order) == len(cells), "tiling region is not connected"

    def encode(ci):
        entry = [_label_key(cells[ci].label)]
        for side in ("left", "top", "right", "bottom"):
            entry.append(tuple(
                (("c", order[ref]) if isinstance(ref, int) else (ref,), gens)
                for _, _, ref, gens in segs(ci, side)))
        return tuple(entry)

    by_order = sorted(order, key=order.get)
    return (
        (m.htype.at, m.htype.gens), (m.vtype.at, m.vtype.gens),
        tuple((hw.at, hw.gens, vw.at, vw.gens) for hw, vw in m.steps()),
        tuple(encode(ci) for ci in by_order),
    )


def _full_edge_neighbor(cells, ci, side):
    c = cells[ci]
    for di, d in enumerate(cells):
        if di == ci:
            continue
        if side == "left" and d.x1 == c.x0 and d.y0 == c.y0 and d.y1 == c.y1:
            return di
        if side == "right" and d.x0 == c.x1 and d.y0 == c.y0 and d.y1 == c.y1:
            return di
        if side == "bottom" and d.y1 == c.y0 and d.x0 == c.x0 and d.x1 == c.x1:
            return di
        if side == "top" and d.y0 == c.y1 and d.x0 == c.x0 and d.x1 == c.x1:
            return di
    return None


def _absorb(m, ci, side, sig):
    """Merge identity cell ci into its full-edge neighbor on the given side."""
    c = m.cells[ci]
    if not c.is_identity():
        return None
    if side in ("left", "right") and (c.top.word.gens or c.bottom.word.gens):
        return None
    if side in ("top", "bottom") and (c.left.word.gens or c.right.word.gens):
        return None
    di = _full_edge_neighbor(m.cells, ci, side)
    if di is None:
        return None
    d = m.cells[di]
    shared = {"left": (d.right, c.left), "right": (c.right, d.left),
              "bottom": (c.bottom, d.top), "top": (d.bottom, c.top)}[side]
    if shared[0].word != shared[1].word:
        return None
    if side == "left":
        merged = replace(d, x1=c.x1, right=c.right,
                         top=Side(sig.concat(d.top.word, c.top.word), d.top.coords),
                         bottom=Side(sig.concat(d.bottom.word, c.bottom.word), d.bottom.coords))
    elif side == "right":
        merged = replace(d, x0=c.x0, left=c.left,
                         top=Side(sig.concat(c.top.word, d.top.word), d.top.coords),
                         bottom=Side(sig.concat(c.bottom.word, d.bottom.word), d.bottom.coords))
    elif side == "bottom":
        merged = replace(d, y1=c.y1, top=c.top,
                         left=Side(sig.concat(c.left.word, d.left.word), d.left.coords),
                         right=Side(sig.concat(c.right.word, d.right.word), d.right.coords))
    else:
        merged = replace(d, y0=c.y0, bottom=c.bottom,
                         left=Side(sig.concat(d.left.word, c.left.word), d.left.coords),
                         right=Side(sig.concat(d.right.word, c.right.word), d.right.coords))
    cells = [merged if t == di else x for t, x in enumerate(m.cells) if t != ci]
    return replace(m, cells=tuple(cells))


def normalize_tiling(m, sig):
    """Absorb every absorbable identity cell, preferring generator neighbors."""
    while True:
        candidates = []
        for ci, c in enumerate(m.cells):
            if not c.is_identity():
                continue
            for rank, side in enumerate(("left", "top", "right", "bottom")):
                di = _full_edge_neighbor(m.cells, ci, side)
                if di is None:
                    continue
                if side in ("left", "right") and (c.top.word.gens or c.bottom.word.gens):
                    continue
                if side in ("top", "bottom") and (c.left.word.gens or c.right.word.gens):
                    continue
                is_id = m.cells[di].is_identity()
                candidates.append((is_id, c.rect(), rank, ci, side))
        if not candidates:
            return m
        _, _, _, ci, side = min(candidates)
        m = _absorb(m, ci, side, sig)


def _split_candidates(m, ci):
    """Structurally meaningful cut positions for shedding an identity off a cell."""
    c = m.cells[ci]
    out = []
    xs = set()
    ys = set()
    for d in m.cells:
        if d is c:
            continue
        if d.y0 == c.y1 or d.y1 == c.y0:
            xs.update((d.x0, d.x1))
        if d.x0 == c.x1 or d.x1 == c.x0:
            ys.update((d.y0, d.y1))
    hw = c.top.coords + c.bottom.coords
    vw = c.left.coords + c.right.coords
    lo = max(hw) if hw else c.x0
    cands = sorted(x for x in xs if lo < x < c.x1) or [(lo + c.x1) / 2]
    out.extend(("right", x) for x in cands if c.x0 < x < c.x1)
    hi = min(hw) if hw else c.x1
    cands = sorted(x for x in xs if c.x0 < x < hi) or [(c.x0 + hi) / 2]
    out.extend(("left", x) for x in cands if c.x0 < x < c.x1)
    lo = max(vw) if vw else c.y0
    cands = sorted(y for y in ys if lo < y < c.y1) or [(lo + c.y1) / 2]
    out.extend(("top", y) for y in cands if c.y0 < y < c.y1)
    hi = min(vw) if vw else c.y1
    cands = sorted(y for y in ys if c.y0 < y < hi) or [(c.y0 + hi) / 2]
    out.extend(("bottom", y) for y in cands if c.y0 < y < c.y1)
    return out


def _split(m, ci, side, cut, sig):
    c = m.cells[ci]
    if side == "right":
        if any(x >= cut for x in c.top.coords + c.bottom.coords):
            return None
        piece = _hid_cell(c.right.word, c.right.coords, sig, cut, c.y0, c.x1, c.y1)
        rest = replace(c, x1=cut)
    elif side == "left":
        if any(x <= cut for x in c.top.coords + c.bottom.coords):
            return None
        piece = _hid_cell(c.left.word, c.left.coords, sig, c.x0, c.y0, cut, c.y1)
        rest = replace(c, x0=cut)
    elif side == "top":
        if any(y >= cut for y in c.left.coords + c.right.coords):
            return None
        piece = _vid_cell(c.top.word, c.top.coords, sig, c.x0, cut, c.x1, c.y1)
        rest = replace(c, y1=cut)
    else:
        if any(y <= cut for y in c.left.coords + c.right.coords):
            return None
        piece = _vid_cell(c.bottom.word, c.bottom.coords, sig, c.x0, c.y0, c.x1, cut)
        rest = replace(c, y0=cut)
    cells = list(m.cells)
    cells[ci] = rest
    cells.append(piece)
    return replace(m, cells=tuple(cells))


class _Unknown:
    def __repr__(self):
        return "UNKNOWN"


UNKNOWN = _Unknown()


def tilings_equivalent(m1, m2, budget, sig):
    """Bounded bidirectional search under identity-cell moves.

    True when the searches meet, False when both move spaces are exhausted
    below the cell cap, UNKNOWN when the budget runs out first.
    """
    cap = max(len(m1.cells), len(m2.cells)) + 3
    a = normalize_tiling(m1, sig)
    b = normalize_tiling(m2, sig)
    seen_a = {structural_key(a): a}
    seen_b = {structural_key(b): b}
    if next(iter(seen_a)) in seen_b:
        return True
    frontiers = {"a": [a], "b": [b]}
    seens = {"a": seen_a, "b": seen_b}
    spent = 0
    while frontiers["a"] or frontiers["b"]:
        if frontiers["a"] and (not frontiers["b"] or len(seen_a) <= len(seen_b)):
            tag = "a"
        else:
            tag = "b"
        seen = seens[tag]
        other = seens["b" if tag == "a" else "a"]
        frontier, frontiers[tag] = frontiers[tag], []
        for state in frontier:
            for ci in range(len(state.cells)):
                for side, cut in _split_candidates(state, ci):
                    nxt = _split(state, ci, side, cut, sig)
                    if nxt is None or len(nxt.cells) > cap:
                        continue
                    nxt = normalize_tiling(nxt, sig)
                    key = structural_key(nxt)
                    spent += 1
                    if spent > budget:
                        return UNKNOWN
                    if key in other:
                        return True
                    if key not in seen:
                        seen[key] = nxt
                        frontiers[tag].append(nxt)
    return False


# -- wire connectivity (used by tests and rendering) ------------------------

def gen_wire_graph(m):
    """Connections between generator cells: wires followed through identity cells."""
    cells = m.cells

    def facing(ci, side, coord):
        c = cells[ci]
        for di, d in enumerate(cells):
            if di == ci:
                continue
            if side == "right" and d.x0 == c.x1 and d.y0 < coord < d.y1:
                return di
            if side == "left" and d.x1 == c.x0 and d.y0 < coord < d.y1:
                return di
            if side == "top" and d.y0 == c.y1 and d.x0 < coord < d.x1:
                return di
            if side == "bottom" and d.y1 == c.y0 and d.x0 < coord < d.x1:
                return di
        return None

    def chase(ci, side, coord):
        while True:
            di = facing(ci, side, coord)
            if di is None:
                return None
            d = cells[di]
            if isinstance(d.label, GenLabel):
                return di
            ci = di  # identity cells forward the wire straight through

    edges = set()
    for ci, c in enumerate(cells):
        if not isinstance(c.label, GenLabel):
            continue
        for side, s in (("right", c.right), ("bottom", c.bottom)):
            for g, coord in zip(s.word.gens, s.coords):
                di = chase(ci, side, coord)
                other = cells[di].label.name if di is not None else "~boundary"
                edges.add((c.label.name, other, g))
    return frozenset(edges)


# -- document format --------------------------------------------------------

def _renormalized_rects(cells):
    xs = sorted({c.x0 for c in cells} | {c.x1 for c in cells})
    ys = sorted({c.y0 for c in cells} | {c.y1 for c in cells})
    xr = {x: i for i, x in enumerate(xs)}
    yr = {y: i for i, y in enumerate(ys)}
    return [(xr[c.x0], yr[c.y0], xr[c.x1], yr[c.y1]) for c in cells]


def _label_to_doc(label):
    if isinstance(label, GenLabel):
        return {"kind": "gen", "name": label.name}
    if isinstance(label, HIdLabel):
        return {"kind": "hid", "v": word_to_doc(label.v)}
    return {"kind": "vid", "h": word_to_doc(label.h)}


def tiling_to_doc(m):
    rects = _renormalized_rects(m.cells)
    entries = sorted(zip(rects, m.cells), key=lambda rc: rc[0])
    return {
        "type": {
            "h": word_to_doc(m.htype),
            "v": word_to_doc(m.vtype),
            "steps": [{"h": word_to_doc(hw), "v": word_to_doc(vw)} for hw, vw in m.steps()],
        },
        "cells": [
            {
                "rect": list(rect),
                "label": _label_to_doc(c.label),
                "sides": {
                    "top": word_to_doc(c.top.word),
                    "bottom": word_to_doc(c.bottom.word),
                    "left": word_to_doc(c.left.word),
                    "right": word_to_doc(c.right.word),
                },
            }
            for rect, c in entries
        ],
    }


def _word_from(doc, cls, sig, where):
    if not isinstance(doc, dict) or set(doc) - {"at", "gens"}:
        raise ParseError("malformed word in %s" % where)
    return sig.check_word(cls(doc["at"], tuple(doc.get("gens", []))))


def tiling_from_doc(doc, sig):
    if not isinstance(doc, dict) or set(doc) - {"type", "cells"}:
        raise ParseError("malformed tiling document")
    ty = doc.get("type", {})
    if not isinstance(ty, dict) or set(ty) - {"h", "v", "steps"}:
        raise ParseError("malformed tiling type")
    htype = _word_from(ty.get("h"), HWord, sig, "type.h")
    vtype = _word_from(ty.get("v"), VWord, sig, "type.v")
    steps = tuple(
        (_word_from(s.get("h"), HWord, sig, "step"), _word_from(s.get("v"), VWord, sig, "step"))
        for s in ty.get("steps", []))
    cells = []
    for entry in doc.get("cells", []):
        if set(entry) - {"rect", "label", "sides"}:
            raise ParseError("malformed cell entry")
        x0, y0, x1, y1 = (F(t) for t in entry["rect"])
        if not (x0 < x1 and y0 < y1):
            raise ParseError("degenerate cell rectangle")
        lab = entry["label"]
        sides = entry["sides"]
        top = _word_from(sides["top"], HWord, sig, "cell side")
        bottom = _word_from(sides["bottom"], HWord, sig, "cell side")
        left = _word_from(sides["left"], VWord, sig, "cell side")
        right = _word_from(sides["right"], VWord, sig, "cell side")
        if lab.get("kind") == "gen":
            b = sig.boundary(lab["name"])
            if (top, bottom, left, right) != (b.domh, b.codh, b.domv, b.codv):
                raise ValidationError("cell sides disagree with the declared boundary")
            label = GenLabel(lab["name"])
        elif lab.get("kind") == "hid":
            label = HIdLabel(_word_from(lab["v"], VWord, sig, "label"))
            if top.gens or bottom.gens or left != label.v or right != label.v:
                raise ValidationError("identity cell sides disagree with its label")
        elif lab.get("kind") == "vid":
            label = VIdLabel(_word_from(lab["h"], HWord, sig, "label"))
            if left.gens or right.gens or top != label.h or bottom != label.h:
                raise ValidationError("identity cell sides disagree with its label")
        else:
            raise ParseError("unknown cell label kind")
        cells.append(Cell(x0, y0, x1, y1, label,
                          Side(top, _even_asc(x0, x1, len(top.gens))),
                          Side(bottom, _even_asc(x0, x1, len(bottom.gens))),
                          Side(left, _even_desc(y0, y1, len(left.gens))),
                          Side(right, _even_desc(y0, y1, len(right.gens)))))
    if not cells:
        raise ParseError("tiling document has no cells")
    _check_coverage(cells)
    left_x = min(c.x0 for c in cells)
    top_y = max(c.y1 for c in cells)
    return PartialTiling(htype, vtype, steps, left_x, top_y,
                         _even_desc(min(c.y0 for c in cells), top_y, len(vtype.gens)),
                         _even_asc(left_x, max(c.x1 for c in cells), len(htype.gens)),
                         tuple(cells), None)


def _check_coverage(cells):
    """Cells must be interior-disjoint; against the bounding box this bounds the region."""
    for i, c in enumerate(cells):
        for d in cells[i + 1 :]:
            if max(c.x0, d.x0) < min(c.x1, d.x1) and max(c.y0, d.y0) < min(c.y1, d.y1):
                raise ValidationError("overlapping cells in tiling document")
