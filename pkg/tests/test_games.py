import pytest

from hiddenmoves.arena import JSeq, MoveId, MoveLabel, OMEGA, STAR, hide_jseq
from hiddenmoves.games import (
    ProbeBounds,
    bang,
    cantor_pair,
    cantor_unpair,
    concat,
    dagger,
    enumerate_positions,
    flat_game,
    hide_game,
    is_subgame,
    lollipop,
    pairing,
    pos_equiv,
    retag_game,
    tensor,
    terminal_game,
    validate_game,
    with_,
)


def mid(base, *tags):
    m = MoveId(base)
    for t in reversed(tags):
        m = m.push(t)
    return m


def seq(*entries):
    return JSeq(tuple(entries))


N = flat_game(range(9), "N")
NN = lollipop(N, N)


# -- flat and terminal


def test_terminal_has_only_the_empty_position():
    t = terminal_game()
    assert t.pos(seq())
    assert t.extensions(seq()) == []


def test_flat_game_positions():
    q = mid("q")
    assert N.pos(seq((q, None)))
    assert N.pos(seq((q, None), (mid(5), 0)))
    assert not N.pos(seq((mid(5), None)))
    assert not N.pos(seq((q, None), (mid(5), 0), (q, None)))
    # numeric flat games accept any natural number answer
    assert N.pos(seq((q, None), (mid(77), 0)))


# -- lollipop


def test_lollipop_labels_flip_domain():
    assert NN.arena.label(mid("q", "L")) == MoveLabel("P", "Q", 0)
    assert NN.arena.label(mid(3, "L")) == MoveLabel("O", "A", 0)
    assert NN.arena.label(mid("q", "R")) == MoveLabel("O", "Q", 0)
    assert NN.arena.label(mid(3, "R")) == MoveLabel("P", "A", 0)


def test_lollipop_positions():
    s = seq(
        (mid("q", "R"), None),
        (mid("q", "L"), 0),
        (mid(5, "L"), 1),
        (mid(6, "R"), 0),
    )
    for k in range(len(s) + 1):
        assert NN.pos(s.prefix(k))
    # strict answers without asking are allowed by the game
    assert NN.pos(seq((mid("q", "R"), None), (mid(9, "R"), 0)))
    # the domain cannot open the play
    assert not NN.pos(seq((mid("q", "L"), None)))


# -- tensor and with


def test_tensor_interleaves_components():
    G = tensor(N, N)
    s = seq(
        (mid("q", "L"), None),
        (mid(2, "L"), 0),
        (mid("q", "R"), None),
        (mid(3, "R"), 2),
    )
    for k in range(len(s) + 1):
        assert G.pos(s.prefix(k))
    # two opening questions in a row break alternation
    assert not G.pos(seq((mid("q", "L"), None), (mid("q", "R"), None)))


def test_with_is_one_sided():
    G = with_(N, N)
    assert G.pos(seq((mid("q", "L"), None), (mid(2, "L"), 0)))
    assert not G.pos(
        seq((mid("q", "L"), None), (mid(2, "L"), 0), (mid("q", "R"), None))
    )


# -- concatenation: two copies of N -o N glued along the middle


C = concat(lollipop(N, N), lollipop(N, N))


def pipeline(n, m):
    return seq(
        (mid("q", "R"), None),
        (mid("q", ("s", 2)), 0),
        (mid("q", ("s", 1)), 1),
        (mid("q", "L"), 2),
        (mid(n, "L"), 3),
        (mid(n + 1, ("s", 1)), 2),
        (mid(n + 1, ("s", 2)), 1),
        (mid(m, "R"), 0),
    )


def test_concat_degrees_and_labels():
    assert C.mu == 1
    assert C.arena.label(mid("q", "R")) == MoveLabel("O", "Q", 0)
    assert C.arena.label(mid("q", ("s", 2))) == MoveLabel("P", "Q", 1)
    assert C.arena.label(mid("q", ("s", 1))) == MoveLabel("O", "Q", 1)
    assert C.arena.label(mid("q", "L")) == MoveLabel("P", "Q", 0)
    assert C.arena.label(mid(4, ("s", 1))) == MoveLabel("P", "A", 1)
    assert C.arena.label(mid(4, ("s", 2))) == MoveLabel("O", "A", 1)


def test_concat_enabling_bridge():
    a = C.arena
    assert a.enables(STAR, mid("q", "R"))
    assert a.enables(mid("q", "R"), mid("q", ("s", 2)))
    assert a.enables(mid("q", ("s", 2)), mid("q", ("s", 1)))
    assert a.enables(mid("q", ("s", 1)), mid("q", "L"))
    assert not a.enables(mid("q", ("s", 1)), mid("q", ("s", 2)))


def test_concat_positions_accept_the_pipeline():
    s = pipeline(4, 10)
    for k in range(len(s) + 1):
        assert C.pos(s.prefix(k))


def test_concat_rejects_mismatched_copies():
    s = pipeline(4, 10)
    bad = s.prefix(6).snoc(mid(9, ("s", 2)), 1)  # copy changes the value
    assert not C.pos(bad)


def test_concat_forced_copy_of_middle_question():
    s = pipeline(4, 10)
    assert C.forced_o(s.prefix(2)) == (mid("q", ("s", 1)), 1)
    assert C.forced_o(s.prefix(6)) == (mid(5, ("s", 2)), 1)
    assert C.forced_o(s.prefix(4)) is None


def test_concat_component_projections():
    s = pipeline(4, 10)
    first, _ = C.project_first(s)
    assert [str(m) for m in first.moves()] == ["<R:q>", "<L:q>", "<L:4>", "<R:5>"]
    assert [p for _, p in first.entries] == [None, 0, 1, 0]
    second, _ = C.project_second(s)
    assert [str(m) for m in second.moves()] == ["<R:q>", "<L:q>", "<L:5>", "<R:10>"]


# -- hiding the concatenation gives a plain function game


def test_hide_concat_is_function_shaped():
    H = hide_game(C, 1)
    assert H.mu == 0
    a = H.arena
    assert a.enables(mid("q", "R"), mid("q", "L"))
    s = seq(
        (mid("q", "R"), None),
        (mid("q", "L"), 0),
        (mid(4, "L"), 1),
        (mid(10, "R"), 0),
    )
    for k in range(len(s) + 1):
        assert H.pos(s.prefix(k))
    ok, why = is_subgame(H, NN, ProbeBounds(max_play_len=8), limit=80)
    assert ok, why


def test_hide_concat_records_witnesses():
    H = hide_game(C, 1)
    s = seq(
        (mid("q", "R"), None),
        (mid("q", "L"), 0),
        (mid(4, "L"), 1),
        (mid(10, "R"), 0),
    )
    assert H.pos(s)
    w = H.witness(s)
    assert w is not None
    assert hide_jseq(w, C.arena, 1).entries == s.entries
    assert C.pos(w)


def test_hide_depth_zero_is_identity():
    assert hide_game(C, 0) is C


def test_hide_full_depth_via_omega():
    H = hide_game(C, OMEGA)
    assert H.mu == 0
    assert H.pos(seq((mid("q", "R"), None), (mid("q", "L"), 0)))


# -- bang


def test_bang_threads_and_canonical_indices():
    B = bang(N, copies=2)
    s = seq(
        (mid("q", ("b", 0)), None),
        (mid(3, ("b", 0)), 0),
        (mid("q", ("b", 1)), None),
        (mid(4, ("b", 1)), 2),
    )
    for k in range(len(s) + 1):
        assert B.pos(s.prefix(k))
    t = seq(
        (mid("q", ("b", 2)), None),
        (mid(3, ("b", 2)), 0),
        (mid("q", ("b", 0)), None),
        (mid(4, ("b", 0)), 2),
    )
    assert B.pos(t)
    assert pos_equiv(B, s, t)
    assert not pos_equiv(B, s, seq(
        (mid("q", ("b", 0)), None),
        (mid(5, ("b", 0)), 0),
        (mid("q", ("b", 1)), None),
        (mid(4, ("b", 1)), 2),
    ))
    # a fresh thread must reuse the least unused index to count as canonical
    exts = B.extensions(seq())
    assert exts == [(mid("q", ("b", 0)), None)]


def test_bang_mixed_threads_keep_their_own_dialogue():
    B = bang(N, copies=2)
    bad = seq(
        (mid("q", ("b", 0)), None),
        (mid(3, ("b", 1)), 0),
    )
    assert not B.pos(bad)


# -- dagger


def test_cantor_pairing_roundtrip():
    for i in range(6):
        for j in range(6):
            assert cantor_unpair(cantor_pair(i, j)) == (i, j)


def test_dagger_threads():
    G = lollipop(bang(N, 2), N)
    D = dagger(G, copies=2)
    z00 = cantor_pair(0, 0)
    s = seq(
        (mid("q", "R", ("b", 0)), None),
        (mid("q", "L", ("b", z00)), 0),
        (mid(7, "L", ("b", z00)), 1),
        (mid(8, "R", ("b", 0)), 0),
    )
    for k in range(len(s) + 1):
        assert D.pos(s.prefix(k))
    # a second outer thread with its own inner copies
    z10 = cantor_pair(1, 0)
    t = s.snoc(mid("q", "R", ("b", 1)), None).snoc(mid("q", "L", ("b", z10)), 4)
    assert D.pos(t)
    # moves of different outer threads never justify each other
    assert not D.arena.enables(mid("q", "R", ("b", 0)), mid("q", "L", ("b", z10)))


def test_dagger_canonical_renumbering():
    G = lollipop(bang(N, 2), N)
    D = dagger(G, copies=2)
    z10 = cantor_pair(1, 0)
    z00 = cantor_pair(0, 0)
    s = seq(
        (mid("q", "R", ("b", 2)), None),
        (mid("q", "L", ("b", cantor_pair(2, 1))), 0),
    )
    t = seq(
        (mid("q", "R", ("b", 0)), None),
        (mid("q", "L", ("b", z00)), 0),
    )
    assert D.pos(s) and D.pos(t)
    assert pos_equiv(D, s, t)
    u = seq(
        (mid("q", "R", ("b", 0)), None),
        (mid("q", "R", ("b", 1)), None),
    )
    assert not pos_equiv(D, s, u)


# -- pairing on a shared context


def test_pairing_is_one_sided_over_the_context():
    gl = lollipop(bang(N, 1), N)
    gr = lollipop(bang(N, 1), N)
    P = pairing(gl, gr)
    left = seq(
        (mid("q", "R", "L"), None),
        (mid("q", "L", ("b", 0)), 0),
        (mid(2, "L", ("b", 0)), 1),
        (mid(3, "R", "L"), 0),
    )
    for k in range(len(left) + 1):
        assert P.pos(left.prefix(k))
    right = seq((mid("q", "R", "R"), None), (mid(5, "R", "R"), 0))
    assert P.pos(right)
    mixed = seq((mid("q", "R", "L"), None), (mid("q", "R", "R"), None))
    assert not P.pos(mixed)


# -- retagging


def test_retag_game_roundtrip():
    swap = {"L": "R", "R": "L"}

    def fwd(m):
        return m.pop().push(swap[m.head()])

    R = retag_game(NN, "swapped", fwd, fwd)
    s = seq((mid("q", "L"), None), (mid("q", "R"), 0))
    assert R.pos(s)
    assert R.arena.label(mid("q", "L")) == MoveLabel("O", "Q", 0)


# -- validation and equivalence


def test_validate_small_games():
    assert validate_game(N, ProbeBounds(max_play_len=4), limit=40) == []
    assert validate_game(NN, ProbeBounds(max_play_len=6), limit=60) == []
    assert validate_game(C, ProbeBounds(max_play_len=10, numerals=(0, 1)), limit=80) == []


def test_enumerate_positions_small():
    plays = enumerate_positions(NN, ProbeBounds(max_play_len=4, numerals=(0, 1)), limit=200)
    assert seq() in plays
    assert seq((mid("q", "R"), None), (mid("q", "L"), 0)) in plays


def test_pos_equiv_at_depth_on_concat():
    s = pipeline(4, 10)
    t = pipeline(4, 10)
    assert pos_equiv(C, s, t, 0)
    assert pos_equiv(C, s, t, 1)
    u = pipeline(5, 10)
    assert not pos_equiv(C, s, u, 1)
    # the four external moves agree after hiding even when the hidden
    # middles answered with different values
    v = seq(
        (mid("q", "R"), None),
        (mid("q", ("s", 2)), 0),
        (mid("q", ("s", 1)), 1),
        (mid("q", "L"), 2),
        (mid(4, "L"), 3),
        (mid(9, ("s", 1)), 2),
        (mid(9, ("s", 2)), 1),
        (mid(10, "R"), 0),
    )
    assert C.pos(v)
    assert not pos_equiv(C, s, v, 0)
    assert pos_equiv(C, s, v, 1)
