from hypothesis import given, settings, strategies as st

from ddcat import (Gen, HWord, Level, VWord, Wire, WireWord, boundary_of,
                   is_admissible, leaf_count, parse_expr, random_expr,
                   translate_expr, translate_signature, validate_diagram)
from ddcat.diagram2 import h_wires, vop_reversal

from conftest import load_fixture_sig


def w(*pairs):
    return tuple(Wire(k, g) for k, g in pairs)


def test_translate_signature_s0(s0, s0_sig2):
    t = s0_sig2.types["alpha"]
    assert t.input == WireWord("A", w(("vop", "v"), ("h", "h")))
    assert t.output == WireWord("A", w(("h", "h"), ("vop", "v")))


def test_vop_reversal_order(pinwheel_sig):
    word = vop_reversal(VWord("A", ("r4", "r3")), pinwheel_sig)
    assert word.wires == w(("vop", "r3"), ("vop", "r4"))


def test_pinwheel_types_chain(pinwheel_sig):
    sig2 = translate_signature(pinwheel_sig)
    assert len(sig2.types) == 5
    for t in sig2.types.values():
        assert t.input.at == t.output.at  # single-object signature


def test_translate_hcomp(s0, s0_sig2):
    d = translate_expr(parse_expr("(alpha | beta)", s0), s0, s0_sig2)
    assert d.domain == WireWord("A", w(("vop", "v"), ("h", "h"), ("h", "h")))
    assert d.levels == (Level(0, "alpha"), Level(1, "beta"))
    assert is_admissible(d, s0_sig2)


def test_translate_vcomp(s0, s0_sig2):
    d = translate_expr(parse_expr("(alpha / beta)", s0), s0, s0_sig2)
    assert d.domain == WireWord("A", w(("vop", "v"), ("vop", "v"), ("h", "h")))
    assert d.levels == (Level(1, "alpha"), Level(0, "beta"))
    assert is_admissible(d, s0_sig2)


def test_translate_empty_identities(s0, s0_sig2):
    for text in ("hid(1@A)", "vid(1@A)"):
        d = translate_expr(parse_expr(text, s0), s0, s0_sig2)
        assert d.domain == WireWord("A") and d.levels == ()


def test_translate_boundary_naturality(mix_sig):
    sig2 = translate_signature(mix_sig)
    for seed in range(80):
        e = random_expr(mix_sig, 6, seed)
        b = boundary_of(e, mix_sig)
        d = translate_expr(e, mix_sig, sig2)
        dom = vop_reversal(b.domv, mix_sig).wires + h_wires(b.domh, mix_sig).wires
        assert d.domain.wires == dom
        cod = validate_diagram(d, sig2)
        expect = h_wires(b.codh, mix_sig).wires + vop_reversal(b.codv, mix_sig).wires
        assert cod.wires == expect
        assert len(d.levels) == leaf_count(e)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(["s0.json", "mix.json", "pinwheel.json", "chain.json"]),
       st.integers(1, 8), st.integers(0, 10**6))
def test_translate_always_admissible(name, budget, seed):
    sig = load_fixture_sig(name)
    sig2 = translate_signature(sig)
    e = random_expr(sig, budget, seed)
    assert is_admissible(translate_expr(e, sig, sig2), sig2)
