"""Exchange moves on layered diagrams, canonical forms, and equality.

Two adjacent levels whose generators occupy disjoint wire spans may be
swapped; the equivalence this generates is decided by bringing both
diagrams to a canonical form where every generator sits as early and as
far left as the moves allow.  A breadth-first closure over the moves
serves as an independent oracle for small instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .diagram2 import LayeredDiagram, Level, validate_diagram
from .errors import NotSwappable, OracleOverflow, RangeError, SignatureMismatch, TypeMismatch
from .translate import translate_expr, translate_signature


class SwapKind(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class NormalForm:
    diagram: LayeredDiagram
    swaps: int


def _swapped_pair(upper, lower, kind, sig2):
    """New (upper, lower) offsets after exchanging two adjacent levels, or None."""
    k1, g1 = upper
    k2, g2 = lower
    in1, out1 = sig2.arity(g1)
    in2, out2 = sig2.arity(g2)
    if kind is SwapKind.LEFT:
        if k2 + in2 > k1:
            return None
        return (k2, g2), (k1 - in2 + out2, g1)
    if k2 < k1 + out1:
        return None
    return (k2 - out1 + in1, g2), (k1, g1)


def swap_levels(d, i, kind, sig2):
    if i < 0 or i + 1 >= len(d.levels):
        raise RangeError("no adjacent pair at index %d" % i)
    up, lo = d.levels[i], d.levels[i + 1]
    res = _swapped_pair((up.offset, up.cell), (lo.offset, lo.cell), kind, sig2)
    if res is None:
        raise NotSwappable(i, kind.value)
    (ka, ga), (kb, gb) = res
    levels = list(d.levels)
    levels[i] = Level(ka, ga)
    levels[i + 1] = Level(kb, gb)
    return LayeredDiagram(d.domain, tuple(levels))


def _front_offset(pending, j, arity):
    """Offset of level j once raised to the front, or None when blocked.

    Raising prefers the left exchange; the right exchange is used only when
    the left one does not apply, which keeps the raised offset minimal.
    """
    k, g = pending[j]
    inj, _ = arity[g]
    kappa = k
    for i in range(j - 1, -1, -1):
        ki, gi = pending[i]
        ini, outi = arity[gi]
        if kappa + inj <= ki:
            continue
        if kappa >= ki + outi:
            kappa += ini - outi
            continue
        return None
    return kappa


def normalize(d, sig2):
    """Greedy canonical form: repeatedly move the leftmost available level up.

    Counts the exchange moves actually performed; an already-sorted diagram
    costs zero swaps, the reversed disjoint chain costs n(n-1)/2.
    """
    validate_diagram(d, sig2)
    arity = {cell: sig2.arity(cell) for cell in {l.cell for l in d.levels}}
    pending = [(l.offset, l.cell) for l in d.levels]
    out = []
    swaps = 0
    while pending:
        best = None
        best_j = None
        prefix_min = None
        for j, (k, g) in enumerate(pending):
            inj, _ = arity[g]
            if prefix_min is None or k + inj <= prefix_min:
                kappa = k  # pure left raises, offset unchanged
            else:
                kappa = _front_offset(pending, j, arity)
            if kappa is not None:
                key = (kappa, g)
                if best is None or key < best:
                    best, best_j = key, j
            prefix_min = k if prefix_min is None else min(prefix_min, k)
        # the first level is always raisable, so a best candidate exists
        for t in range(best_j, 0, -1):
            res = _swapped_pair(pending[t - 1], pending[t], SwapKind.LEFT, sig2)
            if res is None:
                res = _swapped_pair(pending[t - 1], pending[t], SwapKind.RIGHT, sig2)
            pending[t - 1], pending[t] = res
            swaps += 1
        out.append(pending.pop(0))
    nf = LayeredDiagram(d.domain, tuple(Level(k, g) for k, g in out))
    return NormalForm(nf, swaps)


def decide_eq_diagrams(d1, d2, sig2):
    """Equality of the cells two diagrams denote; False on any boundary mismatch."""
    try:
        cod1 = validate_diagram(d1, sig2)
        cod2 = validate_diagram(d2, sig2)
    except TypeMismatch as exc:
        raise SignatureMismatch("diagram not valid over this signature: %s" % exc) from exc
    if d1.domain != d2.domain or cod1 != cod2:
        return False
    if sorted(l.cell for l in d1.levels) != sorted(l.cell for l in d2.levels):
        return False
    return normalize(d1, sig2).diagram == normalize(d2, sig2).diagram


def decide_eq_exprs(e1, e2, sig, sig2=None):
    if sig2 is None:
        sig2 = translate_signature(sig)
    return decide_eq_diagrams(translate_expr(e1, sig, sig2),
                              translate_expr(e2, sig, sig2), sig2)


def bfs_class(d, cap, sig2):
    """All diagrams reachable from d by exchange moves, as level tuples."""
    validate_diagram(d, sig2)
    start = tuple((l.offset, l.cell) for l in d.levels)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for levels in frontier:
            for i in range(len(levels) - 1):
                for kind in (SwapKind.LEFT, SwapKind.RIGHT):
                    res = _swapped_pair(levels[i], levels[i + 1], kind, sig2)
                    if res is None:
                        continue
                    cand = levels[:i] + res + levels[i + 2 :]
                    if cand not in seen:
                        if len(seen) >= cap:
                            raise OracleOverflow(cap)
                        seen.add(cand)
                        nxt.append(cand)
        frontier = nxt
    return frozenset(seen)
