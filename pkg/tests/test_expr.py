import pytest
from hypothesis import given, settings, strategies as st

from ddcat import (CompositionError, Gen, GenerationError, HComp, HId, HWord,
                   ParseError, VComp, VId, VWord, boundary_of, leaf_count,
                   make_signature, parse_expr, print_expr, random_expr)

from conftest import load_fixture_sig


def test_boundary_hcomp(s0):
    b = boundary_of(HComp(Gen("alpha"), Gen("beta")), s0)
    assert b.domh == HWord("A", ("h", "h")) and b.codh == HWord("A", ("h", "h"))
    assert b.domv == VWord("A", ("v",)) and b.codv == VWord("A", ("v",))


def test_boundary_vcomp(s0):
    b = boundary_of(VComp(Gen("alpha"), Gen("beta")), s0)
    assert b.domh == HWord("A", ("h",)) and b.codh == HWord("A", ("h",))
    assert b.domv == VWord("A", ("v", "v")) and b.codv == VWord("A", ("v", "v"))


def test_boundary_mismatch_raises(s0):
    with pytest.raises(CompositionError, match="shared vertical edge"):
        boundary_of(HComp(Gen("alpha"), HId(VWord("A", ("v", "v")))), s0)


def test_parse_basics(s0):
    assert parse_expr("(alpha | beta)", s0) == HComp(Gen("alpha"), Gen("beta"))
    assert parse_expr("(hid(v) / alpha)", s0) == VComp(HId(VWord("A", ("v",))), Gen("alpha"))
    with pytest.raises(ParseError):
        parse_expr("(alpha |", s0)


def test_parse_empty_identities(s0):
    assert parse_expr("hid(1@A)", s0) == HId(VWord("A"))
    assert parse_expr("vid(1@A)", s0) == VId(HWord("A"))


def test_parse_rejects_trailing(s0):
    with pytest.raises(ParseError):
        parse_expr("alpha beta", s0)


def test_print_parse_round_trip_fixed(s0):
    for text in ("alpha", "(alpha | beta)", "((alpha / beta) | hid(v))",
                 "vid(h.h)", "(hid(1@A) / vid(1@A))"):
        e = parse_expr(text, s0)
        assert parse_expr(print_expr(e), s0) == e


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 10**6))
def test_random_expr_well_formed(budget, seed):
    sig = load_fixture_sig("mix.json")
    e = random_expr(sig, budget, seed)
    assert leaf_count(e) <= budget
    boundary_of(e, sig)  # must not raise
    assert parse_expr(print_expr(e), sig) == e


def test_random_expr_deterministic(s0):
    assert random_expr(s0, 6, 42) == random_expr(s0, 6, 42)
    e = random_expr(s0, 6, 42)
    assert leaf_count(e) <= 6
    boundary_of(e, s0)


def test_random_expr_single_leaf(s0):
    assert random_expr(s0, 1, 7) in (Gen("alpha"), Gen("beta"))


def test_random_expr_no_cells():
    sig = make_signature(["A"], {}, {}, {})
    with pytest.raises(GenerationError):
        random_expr(sig, 3, 1)


def test_boundary_corner_equations_random(mix_sig):
    for seed in range(120):
        e = random_expr(mix_sig, 7, seed)
        b = boundary_of(e, mix_sig)
        assert b.domh.at == b.domv.at
        assert mix_sig.word_end(b.domh) == b.codv.at
        assert mix_sig.word_end(b.domv) == b.codh.at
        assert mix_sig.word_end(b.codh) == mix_sig.word_end(b.codv)
