import pytest

from ddcat import (LayeredDiagram, Level, RangeError, TypeMismatch, Wire,
                   WireWord, is_admissible, juxtapose, level_word_at, stack,
                   translate_signature, validate_diagram)
from ddcat.diagram2 import diagram_from_doc, diagram_to_doc, identity_diagram


def w(*pairs):
    return tuple(Wire(k, g) for k, g in pairs)


@pytest.fixture
def single_alpha(s0_sig2):
    return LayeredDiagram(WireWord("A", w(("vop", "v"), ("h", "h"))), (Level(0, "alpha"),))


def test_validate_single(single_alpha, s0_sig2):
    cod = validate_diagram(single_alpha, s0_sig2)
    assert cod == WireWord("A", w(("h", "h"), ("vop", "v")))


def test_validate_two_level(s0_sig2):
    d = LayeredDiagram(WireWord("A", w(("vop", "v"), ("h", "h"), ("h", "h"))),
                       (Level(0, "alpha"), Level(1, "beta")))
    cod = validate_diagram(d, s0_sig2)
    assert cod == WireWord("A", w(("h", "h"), ("h", "h"), ("vop", "v")))


def test_validate_mismatch(s0_sig2):
    d = LayeredDiagram(WireWord("A", w(("h", "h"),)), (Level(0, "alpha"),))
    with pytest.raises(TypeMismatch) as exc:
        validate_diagram(d, s0_sig2)
    assert exc.value.level == 0


def test_level_word_at(single_alpha, s0_sig2):
    assert level_word_at(single_alpha, 0, s0_sig2) == single_alpha.domain
    assert level_word_at(single_alpha, 1, s0_sig2) == WireWord("A", w(("h", "h"), ("vop", "v")))
    two = LayeredDiagram(WireWord("A", w(("vop", "v"), ("h", "h"), ("h", "h"))),
                         (Level(0, "alpha"), Level(1, "beta")))
    assert level_word_at(two, 1, s0_sig2) == WireWord("A", w(("h", "h"), ("vop", "v"), ("h", "h")))
    with pytest.raises(RangeError):
        level_word_at(single_alpha, 2, s0_sig2)


def test_admissible(single_alpha, s0_sig2):
    assert is_admissible(single_alpha, s0_sig2)
    bad = identity_diagram(WireWord("A", w(("h", "h"), ("vop", "v"))))
    assert not is_admissible(bad, s0_sig2)


def test_juxtapose_identities(s0_sig2):
    a = identity_diagram(WireWord("A", w(("h", "h"),)))
    b = identity_diagram(WireWord("A", w(("vop", "v"),)))
    both = juxtapose(a, b, s0_sig2)
    assert both.domain == WireWord("A", w(("h", "h"), ("vop", "v")))
    assert both.levels == ()


def test_stack_and_offsets(single_alpha, s0_sig2, mix_sig):
    # over the richer signature: p's output [H a, Vop u] feeds r's input [Vop u] at slot 1
    sig2 = translate_signature(mix_sig)
    top = LayeredDiagram(WireWord("X", w(("vop", "u"), ("h", "a"))), (Level(0, "p"),))
    bottom = LayeredDiagram(WireWord("X", w(("h", "a"), ("vop", "u"))), (Level(1, "r"),))
    two = stack(top, bottom, sig2)
    assert two.levels == (Level(0, "p"), Level(1, "r"))
    validate_diagram(two, sig2)
    with pytest.raises(TypeMismatch):
        stack(single_alpha, single_alpha, s0_sig2)


def test_juxtapose_offset_shift(single_alpha, s0_sig2):
    shifted = juxtapose(identity_diagram(WireWord("A", w(("h", "h"),))), single_alpha, s0_sig2)
    assert shifted.levels == (Level(1, "alpha"),)
    validate_diagram(shifted, s0_sig2)


def test_width_accounting(s0_sig2):
    d = LayeredDiagram(WireWord("A", w(("vop", "v"), ("h", "h"), ("h", "h"))),
                       (Level(0, "alpha"), Level(1, "beta")))
    cod = validate_diagram(d, s0_sig2)
    diff = sum(len(s0_sig2.types[l.cell].input.wires) - len(s0_sig2.types[l.cell].output.wires)
               for l in d.levels)
    assert diff == len(d.domain.wires) - len(cod.wires)


def test_document_round_trip(single_alpha, s0_sig2):
    doc = diagram_to_doc(single_alpha)
    assert diagram_from_doc(doc, s0_sig2) == single_alpha
