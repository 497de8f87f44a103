"""Arena layer: hiding, pointer rewiring, views, legality.

The fixture arena is a two-stage pipeline: an outer request/answer pair, a
relay through two degree-1 copies of an intermediate channel, and an inner
request/answer pair.  Expected values below were worked out by hand from the
enabling graph and frozen.
"""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hiddenmoves.arena import (
    OMEGA,
    STAR,
    Arena,
    JSeq,
    MoveId,
    MoveLabel,
    check_legal,
    external_justifier,
    flat_arena,
    hide_arena,
    hide_jseq,
    is_complete,
    jseq_from_json,
    jseq_of,
    jseq_to_json,
    o_view,
    p_view,
    truncate_hide,
    validate_arena,
)

C_Q = MoveId("q", ("c",))
B2_Q = MoveId("q", ("b2",))
B1_Q = MoveId("q", ("b1",))
A_Q = MoveId("q", ("a",))


def moveset(numerals=range(0, 19)):
    moves = {}
    for n in numerals:
        moves[MoveId(n, ("c",))] = MoveLabel("P", "A", 0)
        moves[MoveId(n, ("b2",))] = MoveLabel("O", "A", 1)
        moves[MoveId(n, ("b1",))] = MoveLabel("P", "A", 1)
        moves[MoveId(n, ("a",))] = MoveLabel("O", "A", 0)
    moves[C_Q] = MoveLabel("O", "Q", 0)
    moves[B2_Q] = MoveLabel("P", "Q", 1)
    moves[B1_Q] = MoveLabel("O", "Q", 1)
    moves[A_Q] = MoveLabel("P", "Q", 0)
    return moves


def pipeline_arena():
    moves = moveset()

    def enables(m, n):
        if m is STAR:
            return n == C_Q
        if n not in moves or m not in moves:
            return False
        if (m, n) in {(C_Q, B2_Q), (B2_Q, B1_Q), (B1_Q, A_Q)}:
            return True
        if m.path == n.path and m.base == "q" and n.base != "q":
            return True
        return False

    def successors(m):
        if m is STAR:
            return (C_Q,)
        return tuple(n for n in moves if enables(m, n))

    return Arena(
        contains=lambda m: m in moves,
        label=lambda m: moves[m],
        enables=enables,
        successors=successors,
        mu=1,
        samples=tuple(moves),
        name="pipeline",
    )


def c(n):
    return MoveId(n, ("c",))


def b2(n):
    return MoveId(n, ("b2",))


def b1(n):
    return MoveId(n, ("b1",))


def a(n):
    return MoveId(n, ("a",))


def interaction(n):
    """The full 8-move run for inner answer n."""
    return jseq_of(
        (C_Q, None),
        (B2_Q, 0),
        (B1_Q, 1),
        (A_Q, 2),
        (a(n), 3),
        (b1(n + 1), 2),
        (b2(n + 1), 1),
        (c(2 * (n + 1)), 0),
    )


def test_pipeline_arena_satisfies_axioms():
    assert validate_arena(pipeline_arena()) == []


def test_flat_arena_axioms_and_membership():
    f = flat_arena(range(0, 9), "nat")
    assert validate_arena(f) == []
    assert f.contains(MoveId(100))  # intended answers are all naturals
    assert not f.contains(MoveId("x"))
    assert f.label(MoveId(100)) == MoveLabel("P", "A", 0)


def test_hide_arena_composes_enabling_across_the_relay():
    h = hide_arena(pipeline_arena(), 1)
    assert not h.contains(B1_Q)
    assert not h.contains(b2(3))
    assert h.contains(C_Q) and h.contains(A_Q)
    # c_q |- b2_q |- b1_q |- a_q collapses to a direct link
    assert h.enables(C_Q, A_Q)
    assert not h.enables(C_Q, a(5))
    assert not h.enables(A_Q, C_Q)
    assert h.mu == 0
    assert set(h.successors(C_Q)) >= {A_Q, c(0)}
    assert validate_arena(h) == []


def test_hide_arena_depth_zero_is_identity_and_omega_clamps():
    p = pipeline_arena()
    assert hide_arena(p, 0) is p
    hw = hide_arena(p, OMEGA)
    assert hw.enables(C_Q, A_Q)
    h9 = hide_arena(p, 9)
    assert h9.enables(C_Q, A_Q)


def test_external_justifier_skips_the_relay():
    p = pipeline_arena()
    s = interaction(5)
    assert external_justifier(s, p, 3, 1) == 0  # a_q -> ... -> c_q
    assert external_justifier(s, p, 3, 0) == 2  # without hiding: b1_q
    assert external_justifier(s, p, 0, 1) is None
    assert external_justifier(s, p, 7, 1) == 0


def test_hide_jseq_yields_the_four_move_interaction():
    p = pipeline_arena()
    s = interaction(5)
    h = hide_jseq(s, p, 1)
    assert h.moves() == (C_Q, A_Q, a(5), c(12))
    assert [h.ptr(i) for i in range(4)] == [None, 0, 1, 0]


def test_hide_jseq_point_wise_matches_iterated_single_steps():
    p = pipeline_arena()
    s = interaction(3)
    once = hide_jseq(s, p, 1)
    assert once == hide_jseq(s, p, OMEGA)


def test_truncate_drops_dangling_prefix_entries():
    p = pipeline_arena()
    s = interaction(5)
    assert truncate_hide(s.prefix(3), p, 1).moves() == ()  # ends inside the relay
    assert truncate_hide(s.prefix(4), p, 1).moves() == (C_Q, A_Q)
    assert truncate_hide(s.prefix(5), p, 1).moves() == (C_Q, A_Q, a(5))
    assert is_complete(s.prefix(4), p, 1)
    assert not is_complete(s.prefix(2), p, 1)


def test_views_walk_pointers():
    p = pipeline_arena()
    s = interaction(5)
    assert p_view(s.prefix(5), p) == [0, 1, 2, 3, 4]
    assert o_view(s.prefix(4), p) == [0, 1, 2, 3]
    # after hiding, the view jumps across the rewired pointer
    h = hide_jseq(s, p, 1)
    hp = hide_arena(p, 1)
    assert p_view(h.prefix(3), hp) == [0, 1, 2]


def test_check_legal_accepts_the_interaction_and_prefixes():
    p = pipeline_arena()
    s = interaction(7)
    for k in range(len(s) + 1):
        assert check_legal(s.prefix(k), p), k


def test_check_legal_rejects_bad_pointer():
    p = pipeline_arena()
    s = jseq_of((C_Q, None), (B2_Q, 0), (A_Q, 1))  # b2_q does not enable a_q
    v = check_legal(s, p)
    assert not v and v.reason == "justification"


def test_check_legal_rejects_missing_pointer():
    p = pipeline_arena()
    v = check_legal(jseq_of((C_Q, None), (B2_Q, None)), p)
    assert not v and v.reason == "justification"


def test_check_legal_rejects_alternation_breach():
    p = pipeline_arena()
    s = jseq_of((C_Q, None), (B2_Q, 0), (b2(4), 1), (B1_Q, 1))  # O then O
    v = check_legal(s, p)
    assert not v and v.reason == "alternation"


def test_check_legal_flags_degree_switch_after_p_move():
    # a deliberately broken arena: P-owned external question enabling an
    # internal continuation
    q0 = MoveId("q", ("x",))
    q1 = MoveId("q", ("y",))
    labels = {q0: MoveLabel("O", "Q", 0), q1: MoveLabel("P", "Q", 0), MoveId("k", ("z",)): MoveLabel("O", "Q", 1)}
    k = MoveId("k", ("z",))

    def enables(m, n):
        if m is STAR:
            return n == q0
        return (m, n) in {(q0, q1), (q1, k)}

    bad = Arena(
        contains=lambda m: m in labels,
        label=lambda m: labels[m],
        enables=enables,
        successors=lambda m: (q0,) if m is STAR else tuple(n for n in labels if enables(m, n)),
        mu=1,
        samples=tuple(labels),
        name="bad",
    )
    assert any(x.axiom == "E4" for x in validate_arena(bad))
    v = check_legal(jseq_of((q0, None), (q1, 0), (k, 1)), bad)
    assert not v and v.reason == "ie-switch"


def test_validate_arena_smoke_on_broken_initial():
    q = MoveId("q")
    labels = {q: MoveLabel("P", "Q", 0)}
    bad = Arena(
        contains=lambda m: m in labels,
        label=lambda m: labels[m],
        enables=lambda m, n: m is STAR and n == q,
        successors=lambda m: (q,) if m is STAR else (),
        mu=0,
        samples=(q,),
        name="badinit",
    )
    assert any(x.axiom == "E1" for x in validate_arena(bad))


def test_jseq_json_roundtrip():
    p = pipeline_arena()
    s = interaction(2)
    enc = jseq_to_json(s, p)
    assert enc[0]["base"] == "q" and enc[0]["degree"] == 0
    assert enc[1]["degree"] == 1 and enc[1]["pointer"] == 0
    assert jseq_from_json(enc) == s


@given(st.integers(min_value=0, max_value=8), st.integers(min_value=0, max_value=8))
@settings(max_examples=40, deadline=None)
def test_hiding_prefixes_commute_with_truncation(n, cut):
    """Hiding a complete prefix equals the prefix of the hidden sequence."""
    p = pipeline_arena()
    s = interaction(n)
    cut = min(cut, len(s))
    pre = s.prefix(cut)
    if is_complete(pre, p, 1):
        ext = [i for i in range(cut) if p.degree(s.move(i)) == 0]
        assert hide_jseq(pre, p, 1).moves() == tuple(s.move(i) for i in ext)


@given(st.integers(min_value=0, max_value=8))
@settings(max_examples=20, deadline=None)
def test_external_justifier_is_idempotent_under_hiding(n):
    """After hiding, every pointer already points at an external move."""
    p = pipeline_arena()
    s = interaction(n)
    h = hide_jseq(s, p, 1)
    hp = hide_arena(p, 1)
    for i in range(len(h)):
        if h.ptr(i) is not None:
            assert external_justifier(h, hp, i, 1) == h.ptr(i)
