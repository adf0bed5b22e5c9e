"""Deterministic SVG output for layered diagrams and tilings.

Layout is fixed: wires sit on a unit grid, levels at integer heights, no
timestamps or randomness, so identical inputs produce identical bytes.
Forward wires are drawn black, reversed vertical wires red.
"""

from __future__ import annotations

from .diagram2 import level_word_at, validate_diagram
from .tiling import GenLabel, HIdLabel, _renormalized_rects

_SCALE = 40
_MARGIN = 20
_RED = "#c0392b"
_BLACK = "#222222"


def _fmt(value):
    text = "%.2f" % float(value)
    return text.rstrip("0").rstrip(".") if "." in text else text


def _line(x1, y1, x2, y2, color):
    return '<line class="wire" x1="%s" y1="%s" x2="%s" y2="%s" stroke="%s" stroke-width="1.5"/>' % (
        _fmt(x1), _fmt(y1), _fmt(x2), _fmt(y2), color)


def _wire_color(wire):
    return _RED if wire.kind == "vop" else _BLACK


def _svg(width, height, body):
    head = ('<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
            'viewBox="0 0 %d %d">') % (width, height, width, height)
    frame = '<rect x="1" y="1" width="%d" height="%d" fill="white" stroke="#999999"/>' % (
        width - 2, height - 2)
    return "\n".join([head, frame] + body + ["</svg>"]) + "\n"


def render_diagram_svg(d, sig2):
    """One node per level, wires as straight segments between level lines."""
    validate_diagram(d, sig2)
    words = [level_word_at(d, k, sig2) for k in range(len(d.levels) + 1)]
    bands = max(len(d.levels), 1)
    maxw = max((len(w.wires) for w in words), default=0)
    width = (maxw + 1) * _SCALE + 2 * _MARGIN
    height = bands * _SCALE + 2 * _MARGIN

    def xpos(p):
        return _MARGIN + (p + 1) * _SCALE

    def ypos(t):
        return _MARGIN + t * _SCALE

    body = []
    nodes = []
    if not d.levels:
        for p, w in enumerate(words[0].wires):
            body.append(_line(xpos(p), ypos(0), xpos(p), ypos(1), _wire_color(w)))
    for t, lvl in enumerate(d.levels):
        word = words[t]
        t2 = sig2.types[lvl.cell]
        k, n_in = lvl.offset, len(t2.input.wires)
        n_out = len(t2.output.wires)
        if n_in:
            cx = xpos(k) + (n_in - 1) * _SCALE / 2
        elif n_out:
            cx = xpos(k) + (n_out - 1) * _SCALE / 2
        else:
            cx = xpos(k) - _SCALE / 2
        cy = ypos(t) + _SCALE / 2
        for p, w in enumerate(word.wires):
            if p < k:
                body.append(_line(xpos(p), ypos(t), xpos(p), ypos(t + 1), _wire_color(w)))
            elif p < k + n_in:
                body.append(_line(xpos(p), ypos(t), cx, cy, _wire_color(w)))
            else:
                body.append(_line(xpos(p), ypos(t), xpos(p - n_in + n_out), ypos(t + 1),
                                  _wire_color(w)))
        for q, w in enumerate(t2.output.wires):
            body.append(_line(cx, cy, xpos(k + q), ypos(t + 1), _wire_color(w)))
        nodes.append((cx, cy, lvl.cell))
    for cx, cy, name in nodes:
        body.append('<circle class="node" cx="%s" cy="%s" r="12" fill="white" stroke="black"/>'
                    % (_fmt(cx), _fmt(cy)))
        body.append('<text x="%s" y="%s" font-size="10" text-anchor="middle" '
                    'dominant-baseline="middle">%s</text>' % (_fmt(cx), _fmt(cy), name))
    return _svg(width, height, body)


def render_tiling_svg(m, sig=None):
    """Rectangle subdivision with labeled generator nodes and wire stubs."""
    rects = _renormalized_rects(m.cells)
    max_x = max(r[2] for r in rects)
    max_y = max(r[3] for r in rects)
    width = max_x * _SCALE + 2 * _MARGIN
    height = max_y * _SCALE + 2 * _MARGIN

    def pt(x, y):
        # tilings grow upward; SVG grows downward
        return _MARGIN + x * _SCALE, _MARGIN + (max_y - y) * _SCALE

    body = []
    stubs = []
    labels = []
    for (x0, y0, x1, y1), cell in zip(rects, m.cells):
        px0, py1 = pt(x0, y0)
        px1, py0 = pt(x1, y1)
        fill = "white" if isinstance(cell.label, GenLabel) else "#f4f4f4"
        body.append('<rect class="cell" x="%s" y="%s" width="%s" height="%s" '
                    'fill="%s" stroke="#777777"/>' % (
                        _fmt(px0), _fmt(py0), _fmt(px1 - px0), _fmt(py1 - py0), fill))
        cx, cy = (px0 + px1) / 2, (py0 + py1) / 2
        sides = (
            ("top", cell.top, _BLACK), ("bottom", cell.bottom, _BLACK),
            ("left", cell.left, _RED), ("right", cell.right, _RED),
        )
        for where, side, color in sides:
            n = len(side.word.gens)
            for t in range(n):
                frac = (t + 1) / (n + 1)
                if where == "top":
                    ex, ey = px0 + (px1 - px0) * frac, py0
                elif where == "bottom":
                    ex, ey = px0 + (px1 - px0) * frac, py1
                elif where == "left":
                    ex, ey = px0, py0 + (py1 - py0) * frac
                else:
                    ex, ey = px1, py0 + (py1 - py0) * frac
                stubs.append(_line(cx, cy, ex, ey, color))
        if isinstance(cell.label, GenLabel):
            labels.append((cx, cy, cell.label.name))
    body.extend(stubs)
    for cx, cy, name in labels:
        body.append('<circle class="node" cx="%s" cy="%s" r="12" fill="white" stroke="black"/>'
                    % (_fmt(cx), _fmt(cy)))
        body.append('<text x="%s" y="%s" font-size="10" text-anchor="middle" '
                    'dominant-baseline="middle">%s</text>' % (_fmt(cx), _fmt(cy), name))
    return _svg(width, height, body)
