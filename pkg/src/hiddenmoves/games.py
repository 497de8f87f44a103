"""Games over arenas: constructions, position oracles, identification.

A game couples an arena with a position oracle (which justified sequences
are reachable), an identification of positions (equality up to renaming of
replication indices), and the expression that built it.  Constructions:

  terminal, flat(S), tensor, lollipop, with_, pairing (shared context),
  bang, dagger (promotion with paired replication indices), concat (the
  non-hiding composition whose middle copies become internal at a fresh
  degree), hide_game, retag_game.

Move paths use tags:
  "L"/"R"          component sides (lollipop domain/codomain, tensor, ...)
  ("b", i)         replication thread i
  ("s", 1|2)       the two middle copies of a concatenation
  ("i", 1|2)       internal moves inherited from a side of a binary node
  ("c", i)         thread tag on internal moves under a promotion
"""

from __future__ import annotations

import random
from typing import Iterable, Optional

from .arena import (
    OMEGA,
    STAR,
    Arena,
    ArenaViolation,
    JSeq,
    MoveId,
    MoveLabel,
    clamp_depth,
    external_justifier,
    hide_arena,
    hide_jseq,
    is_complete,
    o_view,
    p_view,
    validate_arena,
)


def cantor_pair(i: int, j: int) -> int:
    return (i + j) * (i + j + 1) // 2 + j


def cantor_unpair(z: int) -> tuple:
    w = 0
    while (w + 1) * (w + 2) // 2 <= z:
        w += 1
    j = z - w * (w + 1) // 2
    return (w - j, j)


class ProbeBounds:
    """Budgets for bounded exploration of games and strategies."""

    def __init__(self, max_play_len=48, numerals=tuple(range(9)), max_copy_index=3, fuel=10_000):
        self.max_play_len = max_play_len
        self.numerals = tuple(numerals)
        self.max_copy_index = max_copy_index
        self.fuel = fuel

    @staticmethod
    def from_json(obj: dict) -> "ProbeBounds":
        return ProbeBounds(
            max_play_len=obj.get("maxPlayLen", 48),
            numerals=tuple(obj.get("numeralProbes", range(9))),
            max_copy_index=obj.get("maxCopyIndex", 3),
            fuel=obj.get("fuel", 10_000),
        )

    def to_json(self) -> dict:
        return {
            "maxPlayLen": self.max_play_len,
            "numeralProbes": list(self.numerals),
            "maxCopyIndex": self.max_copy_index,
            "fuel": self.fuel,
        }


DEFAULT_BOUNDS = ProbeBounds()


# ---------------------------------------------------------------------------
# Game expressions (structure records, used for dispatch and reporting)


class GameExpr:
    pass


class TerminalE(GameExpr):
    def __repr__(self):
        return "T"


class FlatE(GameExpr):
    def __init__(self, answers, tag):
        self.answers = answers
        self.tag = tag

    def __repr__(self):
        return f"flat({self.tag})"


class TensorE(GameExpr):
    def __init__(self, left, right):
        self.left = left
        self.right = right


class WithE(GameExpr):
    def __init__(self, left, right):
        self.left = left
        self.right = right


class LollipopE(GameExpr):
    def __init__(self, dom, cod):
        self.dom = dom
        self.cod = cod


class PairingE(GameExpr):
    def __init__(self, left, right):
        self.left = left
        self.right = right


class BangE(GameExpr):
    def __init__(self, inner):
        self.inner = inner


class OmegaWithE(GameExpr):
    def __init__(self, inner):
        self.inner = inner


class OmegaPairingE(GameExpr):
    def __init__(self, sample):
        self.sample = sample


class DaggerE(GameExpr):
    def __init__(self, inner):
        self.inner = inner


class ConcatE(GameExpr):
    def __init__(self, first, second):
        self.first = first
        self.second = second


class HideE(GameExpr):
    def __init__(self, inner, depth):
        self.inner = inner
        self.depth = depth


class RetagE(GameExpr):
    def __init__(self, inner, name):
        self.inner = inner
        self.name = name


# ---------------------------------------------------------------------------
# The game object


class DynamicGame:
    def __init__(self, expr, arena, pos_last, canon_moves, forced_o, name):
        self.expr = expr
        self.arena = arena
        self.mu = arena.mu
        self.name = name
        self._pos_last = pos_last
        self._canon_moves = canon_moves
        self._forced_o = forced_o
        self._pos_cache = {JSeq(): True}
        self._ext_cache = {}
        self._hidden_arenas = {}

    def __repr__(self):
        return f"Game({self.name})"

    def pos(self, s: JSeq) -> bool:
        hit = self._pos_cache.get(s)
        if hit is not None:
            return hit
        ok = self.pos(s.prefix(len(s) - 1)) and self._pos_last(s)
        self._pos_cache[s] = ok
        return ok

    def normalized(self) -> bool:
        return self.mu == 0

    def hidden_arena(self, d) -> Arena:
        dd = clamp_depth(d, self.mu)
        if dd == 0:
            return self.arena
        if dd not in self._hidden_arenas:
            self._hidden_arenas[dd] = hide_arena(self.arena, dd)
        return self._hidden_arenas[dd]

    def canon(self, s: JSeq):
        moves = self._canon_moves(list(s.moves()))
        return tuple((m, p) for m, (_, p) in zip(moves, s.entries))

    def equiv(self, s: JSeq, t: JSeq, d=0) -> bool:
        dd = clamp_depth(d, self.mu)
        hs = hide_jseq(s, self.arena, dd) if dd else s
        ht = hide_jseq(t, self.arena, dd) if dd else t
        return self.canon(hs) == self.canon(ht)

    def forced_o(self, s: JSeq):
        """The pending internal O-copy after an internal P-move, if any."""
        return self._forced_o(s)

    def extensions(self, s, bounds=DEFAULT_BOUNDS, owner=None):
        """Legal one-move extensions, kept to first-use replication indices."""
        if len(s) >= bounds.max_play_len:
            return []
        a = self.arena
        want = owner
        if want is None:
            if len(s) == 0:
                want = "O"
            else:
                want = "P" if a.label(s.move(len(s) - 1)).owner == "O" else "O"
        key = (s, want)
        hit = self._ext_cache.get(key)
        if hit is not None:
            return hit
        out = []
        for m in a.samples:
            if a.label(m).owner != want:
                continue
            ptrs = []
            if a.enables(STAR, m):
                ptrs.append(None)
            ptrs.extend(j for j in range(len(s)) if a.enables(s.move(j), m))
            for p in ptrs:
                s2 = s.snoc(m, p)
                if not self.pos(s2):
                    continue
                if self.canon(s2)[-1][0] != m:
                    continue
                out.append((m, p))
        self._ext_cache[key] = out
        return out


def enumerate_positions(g: DynamicGame, bounds=DEFAULT_BOUNDS, limit=2000):
    out = [JSeq()]
    frontier = [JSeq()]
    while frontier and len(out) < limit:
        nxt = []
        for s in frontier:
            for m, p in g.extensions(s, bounds):
                s2 = s.snoc(m, p)
                out.append(s2)
                nxt.append(s2)
                if len(out) >= limit:
                    return out
        frontier = nxt
    return out


def pos_equiv(g: DynamicGame, s: JSeq, t: JSeq, d=0) -> bool:
    return g.equiv(s, t, d)


# ---------------------------------------------------------------------------
# Shared plumbing


def project(s: JSeq, f):
    """Restrict s along the partial move map f.

    Returns (restriction, old index -> new index).  A kept move keeps its
    pointer when its justifier is kept, otherwise it becomes initial; the
    constructions only drop justifiers across the documented seams.
    """
    entries = []
    idx = {}
    for i, (m, p) in enumerate(s.entries):
        fm = f(m)
        if fm is None:
            continue
        q = idx.get(p) if p is not None else None
        idx[i] = len(entries)
        entries.append((fm, q))
    return JSeq(tuple(entries)), idx


def legal_last(arena: Arena, s: JSeq, mu: int) -> bool:
    """Justification, alternation, degree-switch and staged visibility of
    the last move of s, assuming the proper prefix is legal."""
    i = len(s) - 1
    m, p = s.entries[i]
    if not arena.contains(m):
        return False
    lab = arena.label(m)
    if p is None:
        if not arena.enables(STAR, m):
            return False
    else:
        if not (0 <= p < i) or not arena.enables(s.move(p), m):
            return False
    if i == 0:
        if p is not None:
            return False
    else:
        prev = arena.label(s.move(i - 1))
        if prev.owner == lab.owner:
            return False
        if prev.degree != lab.degree and prev.owner != "O":
            return False
    for d in range(0, mu + 1):
        if 0 < lab.degree <= d:
            continue  # the last move itself is erased at this stage
        if d and not is_complete(s, arena, d):
            continue
        t = hide_jseq(s, arena, d) if d else s
        k = len(t) - 1
        q = t.ptr(k)
        ha = arena if d == 0 else hide_arena(arena, d)
        if q is None:
            if not ha.enables(STAR, t.move(k)):
                return False
            continue
        body = t.prefix(k)
        view = p_view(body, ha) if lab.owner == "P" else o_view(body, ha)
        if q not in view:
            return False
    return True


def _tagged(tag, samples):
    return tuple(m.push(tag) for m in samples)


def _mapped_forced(g, split_fn, embed_fn, s):
    """Delegate forced_o into a component along split_fn/embed_fn."""
    sub, idx = project(s, split_fn)
    hit = g.forced_o(sub)
    if hit is None:
        return None
    m, p = hit
    em = embed_fn(m)
    if p is None:
        return em, None
    back = {v: k for k, v in idx.items()}
    return em, back[p]


# ---------------------------------------------------------------------------
# Terminal and flat games


def terminal_game() -> DynamicGame:
    def missing(m):
        raise KeyError(m)

    arena = Arena(
        contains=lambda m: False,
        label=missing,
        enables=lambda m, n: False,
        successors=lambda m: (),
        mu=0,
        samples=(),
        name="T",
    )
    return DynamicGame(
        TerminalE(), arena,
        pos_last=lambda s: False,
        canon_moves=lambda ms: list(ms),
        forced_o=lambda s: None,
        name="T",
    )


def flat_game(answers: Iterable, tag: str = "flat") -> DynamicGame:
    answers = tuple(answers)
    q = MoveId("q")
    numeric = any(isinstance(a, int) for a in answers)

    def contains(m):
        if m.path:
            return False
        if m == q:
            return True
        if numeric and isinstance(m.base, int) and m.base >= 0:
            return True
        return m.base in answers

    def label(m):
        if not contains(m):
            raise KeyError(m)
        return MoveLabel("O", "Q", 0) if m == q else MoveLabel("P", "A", 0)

    arena = Arena(
        contains=contains,
        label=label,
        enables=lambda m, n: (n == q) if m is STAR else (m == q and contains(n) and n != q),
        successors=lambda m: (
            (q,) if m is STAR else (tuple(MoveId(a) for a in answers) if m == q else ())
        ),
        mu=0,
        samples=(q,) + tuple(MoveId(a) for a in answers),
        name=tag,
    )

    def pos_last(s):
        if len(s) == 1:
            return s.entries[0] == (q, None)
        if len(s) == 2:
            return contains(s.move(1)) and s.move(1) != q and s.ptr(1) == 0
        return False

    return DynamicGame(
        FlatE(answers, tag), arena,
        pos_last=pos_last,
        canon_moves=lambda ms: list(ms),
        forced_o=lambda s: None,
        name=tag,
    )


# ---------------------------------------------------------------------------
# Tensor, with, lollipop (two straight sides)


def _two_sided(ga, gb, relabel_a, initials, cross, mu, name):
    aa, ab = ga.arena, gb.arena

    def side(m):
        h = m.head()
        if h == "L":
            return aa, m.pop(), relabel_a
        if h == "R":
            return ab, m.pop(), None
        return None

    def contains(m):
        loc = side(m)
        return loc is not None and loc[0].contains(loc[1])

    def label(m):
        loc = side(m)
        if loc is None or not loc[0].contains(loc[1]):
            raise KeyError(m)
        lab = loc[0].label(loc[1])
        return loc[2](lab) if loc[2] else lab

    def enables(m, n):
        if m is STAR:
            return contains(n) and initials(n)
        if not (contains(m) and contains(n)):
            return False
        if m.head() == n.head():
            locm, locn = side(m), side(n)
            return locm[0].enables(locm[1], locn[1])
        return cross(m, n)

    samples = _tagged("L", aa.samples) + _tagged("R", ab.samples)

    def successors(m):
        if m is STAR:
            return tuple(x for x in samples if contains(x) and initials(x))
        loc = side(m)
        if loc is None:
            return ()
        tag = m.head()
        out = [x.push(tag) for x in loc[0].successors(loc[1])]
        out.extend(x for x in samples if contains(x) and cross(m, x))
        return tuple(dict.fromkeys(out))

    arena = Arena(contains, label, enables, successors, mu, samples, name)

    def canon_moves(ms):
        lefts = [m.pop() for m in ms if m.head() == "L"]
        rights = [m.pop() for m in ms if m.head() == "R"]
        cl = iter(ga._canon_moves(lefts))
        cr = iter(gb._canon_moves(rights))
        return [next(cl).push("L") if m.head() == "L" else next(cr).push("R") for m in ms]

    def forced(s):
        if len(s) == 0:
            return None
        h = s.move(len(s) - 1).head()
        if h == "L":
            return _mapped_forced(ga, lambda m: m.pop() if m.head() == "L" else None,
                                  lambda m: m.push("L"), s)
        return _mapped_forced(gb, lambda m: m.pop() if m.head() == "R" else None,
                              lambda m: m.push("R"), s)

    return arena, canon_moves, forced


def _side_project(s, tag):
    return project(s, lambda m: m.pop() if m.head() == tag else None)


def tensor(ga: DynamicGame, gb: DynamicGame) -> DynamicGame:
    name = f"({ga.name} x {gb.name})"
    mu = max(ga.mu, gb.mu)
    arena, canon_moves, forced = _two_sided(
        ga, gb,
        relabel_a=None,
        initials=lambda m: (
            ga.arena.enables(STAR, m.pop()) if m.head() == "L"
            else gb.arena.enables(STAR, m.pop())
        ),
        cross=lambda m, n: False,
        mu=mu,
        name=name,
    )

    def pos_last(s):
        if not legal_last(arena, s, mu):
            return False
        left, _ = _side_project(s, "L")
        right, _ = _side_project(s, "R")
        return ga.pos(left) and gb.pos(right)

    return DynamicGame(TensorE(ga.expr, gb.expr), arena, pos_last, canon_moves, forced, name)


def with_(ga: DynamicGame, gb: DynamicGame) -> DynamicGame:
    name = f"({ga.name} & {gb.name})"
    mu = max(ga.mu, gb.mu)
    arena, canon_moves, forced = _two_sided(
        ga, gb,
        relabel_a=None,
        initials=lambda m: (
            ga.arena.enables(STAR, m.pop()) if m.head() == "L"
            else gb.arena.enables(STAR, m.pop())
        ),
        cross=lambda m, n: False,
        mu=mu,
        name=name,
    )

    def pos_last(s):
        heads = {m.head() for m in s.moves()}
        if len(heads) > 1:
            return False
        if not legal_last(arena, s, mu):
            return False
        tag = next(iter(heads))
        sub, _ = _side_project(s, tag)
        return ga.pos(sub) if tag == "L" else gb.pos(sub)

    g = DynamicGame(WithE(ga.expr, gb.expr), arena, pos_last, canon_moves, forced, name)
    g.with_parts = (ga, gb)
    return g


def lollipop(ga: DynamicGame, gb: DynamicGame) -> DynamicGame:
    if not ga.normalized():
        ga = hide_game(ga, OMEGA)
    name = f"({ga.name} -o {gb.name})"
    mu = gb.mu
    arena, canon_moves, forced = _two_sided(
        ga, gb,
        relabel_a=lambda lab: lab.flip(),
        initials=lambda m: m.head() == "R" and gb.arena.enables(STAR, m.pop()),
        cross=lambda m, n: (
            m.head() == "R" and n.head() == "L"
            and gb.arena.enables(STAR, m.pop())
            and ga.arena.enables(STAR, n.pop())
        ),
        mu=mu,
        name=name,
    )

    def pos_last(s):
        if not legal_last(arena, s, mu):
            return False
        left, _ = _side_project(s, "L")
        right, _ = _side_project(s, "R")
        return ga.pos(left) and gb.pos(right)

    g = DynamicGame(LollipopE(ga.expr, gb.expr), arena, pos_last, canon_moves, forced, name)
    g.arrow_parts = (ga, gb)
    return g


# ---------------------------------------------------------------------------
# Pairing on a shared context

# Both components must look like C -o X after full hiding, with the shared
# context C on the L side.  Context moves keep their paths; the two
# codomains move under ("R","L") and ("R","R"); internal moves of either
# side are kept apart under ("i", 1|2).


def _pairing_maps(which):
    side = "L" if which == 1 else "R"

    def to_outer(m):
        h = m.head()
        if h == "L":
            return m
        if h == "R":
            return m.pop().push(side).push("R")
        return m.push(("i", which))

    def to_inner(m):
        h = m.head()
        if h == "L":
            return m
        if h == "R":
            rest = m.pop()
            if rest.head() == side:
                return rest.pop().push("R")
            return None
        if h == ("i", which):
            return m.pop()
        return None

    return to_outer, to_inner


def pairing(gl: DynamicGame, gr: DynamicGame) -> DynamicGame:
    name = f"<{gl.name}, {gr.name}>"
    mu = max(gl.mu, gr.mu)
    l_out, l_in = _pairing_maps(1)
    r_out, r_in = _pairing_maps(2)

    def locate(m):
        im = l_in(m)
        if im is not None and gl.arena.contains(im):
            return gl, im, l_in, l_out
        im = r_in(m)
        if im is not None and gr.arena.contains(im):
            return gr, im, r_in, r_out
        return None

    def contains(m):
        return locate(m) is not None

    def label(m):
        loc = locate(m)
        if loc is None:
            raise KeyError(m)
        return loc[0].arena.label(loc[1])

    def enables(m, n):
        if m is STAR:
            loc = locate(n)
            return loc is not None and loc[0].arena.enables(STAR, loc[1])
        for g, f in ((gl, l_in), (gr, r_in)):
            im, jn = f(m), f(n)
            if (im is not None and jn is not None
                    and g.arena.contains(im) and g.arena.contains(jn)
                    and g.arena.enables(im, jn)):
                return True
        return False

    samples = tuple(dict.fromkeys(
        [l_out(m) for m in gl.arena.samples] + [r_out(m) for m in gr.arena.samples]
    ))

    def successors(m):
        if m is STAR:
            return tuple(x for x in samples if enables(STAR, x))
        out = []
        for g, f, e in ((gl, l_in, l_out), (gr, r_in, r_out)):
            im = f(m)
            if im is not None and g.arena.contains(im):
                out.extend(e(x) for x in g.arena.successors(im))
        return tuple(dict.fromkeys(out))

    arena = Arena(contains, label, enables, successors, mu, samples, name)

    def side_of(moves):
        for m in moves:
            h = m.head()
            if h == ("i", 1):
                return 1
            if h == ("i", 2):
                return 2
            if h == "R":
                return 1 if m.pop().head() == "L" else 2
        return None

    def pos_last(s):
        if not legal_last(arena, s, mu):
            return False
        w = side_of(s.moves())
        if w is None:
            return len(s) == 0
        g, f = (gl, l_in) if w == 1 else (gr, r_in)
        sub, idx = project(s, f)
        return len(idx) == len(s) and g.pos(sub)

    def canon_moves(ms):
        if not ms:
            return []
        w = side_of(ms) or 1
        g, f, e = (gl, l_in, l_out) if w == 1 else (gr, r_in, r_out)
        inner = [f(m) for m in ms]
        if any(im is None for im in inner):
            return list(ms)
        return [e(x) for x in g._canon_moves(inner)]

    def forced(s):
        if len(s) == 0:
            return None
        w = side_of(s.moves())
        if w is None:
            return None
        g, f, e = (gl, l_in, l_out) if w == 1 else (gr, r_in, r_out)
        return _mapped_forced(g, f, e, s)

    g = DynamicGame(PairingE(gl.expr, gr.expr), arena, pos_last, canon_moves, forced, name)
    g.pair_parts = (gl, gr)
    g.pair_maps = ((l_out, l_in), (r_out, r_in))
    g.side_of = side_of
    return g


def _omega_decode(m):
    h = m.head()
    if isinstance(h, tuple) and h[0] == "w" and isinstance(h[1], int) and h[1] >= 0:
        return h[1], m.pop()
    return None


def omega_power(ga: DynamicGame, name=None, sample_width=3) -> DynamicGame:
    """Countably many side-by-side copies; a play stays inside one copy."""
    if not ga.normalized():
        raise ValueError("omega_power needs a normalized game")
    aa = ga.arena
    name = name or f"({ga.name})^w"

    def contains(m):
        d = _omega_decode(m)
        return d is not None and aa.contains(d[1])

    def label(m):
        d = _omega_decode(m)
        if d is None:
            raise KeyError(m)
        return aa.label(d[1])

    def enables(m, n):
        if m is STAR:
            d = _omega_decode(n)
            return d is not None and aa.enables(STAR, d[1])
        dm, dn = _omega_decode(m), _omega_decode(n)
        return (dm is not None and dn is not None and dm[0] == dn[0]
                and aa.enables(dm[1], dn[1]))

    samples = tuple(x.push(("w", i))
                    for i in range(sample_width) for x in aa.samples)

    def successors(m):
        if m is STAR:
            return tuple(x for x in samples if enables(STAR, x))
        d = _omega_decode(m)
        if d is None:
            return ()
        return tuple(x.push(("w", d[0])) for x in aa.successors(d[1]))

    arena = Arena(contains, label, enables, successors, ga.mu, samples, name)

    def strip(m):
        d = _omega_decode(m)
        return d[1] if d is not None else None

    def pos_last(s):
        comps = {_omega_decode(m)[0] for m in s.moves()}
        if len(comps) > 1:
            return False
        if not legal_last(arena, s, ga.mu):
            return False
        sub, _ = project(s, strip)
        return ga.pos(sub)

    def canon_moves(ms):
        if not ms:
            return []
        d = _omega_decode(ms[0])
        if d is None:
            return list(ms)
        i = d[0]
        inner = [_omega_decode(m)[1] for m in ms]
        return [x.push(("w", i)) for x in ga._canon_moves(inner)]

    def forced(s):
        if len(s) == 0:
            return None
        i = _omega_decode(s.move(0))[0]
        return _mapped_forced(ga, strip,
                              lambda m: m.push(("w", i)), s)

    g = DynamicGame(OmegaWithE(ga.expr), arena, pos_last, canon_moves, forced, name)
    g.omega_part = ga
    return g


def _omega_pairing_maps(i):
    def to_outer(m):
        if m.head() == "L":
            return m
        return m.pop().push(("w", i)).push("R")

    def to_inner(m):
        h = m.head()
        if h == "L":
            return m
        if h == "R":
            rest = m.pop()
            if rest.head() == ("w", i):
                return rest.pop().push("R")
        return None

    return to_outer, to_inner


def omega_pairing(part_fn, name=None, sample_width=3) -> DynamicGame:
    """Pairing of countably many normalized strategies over one context.

    part_fn(i) gives component i's game, shaped !C -o B_i with no
    internal moves; components are demanded lazily and memoized."""
    parts = {}

    def part(i):
        if i not in parts:
            g = part_fn(i)
            if not g.normalized():
                raise ValueError(f"omega_pairing component {i} has internal moves")
            parts[i] = g
        return parts[i]

    name = name or "<...>w"

    def component_of(m):
        h = m.head()
        if h == "L":
            return None
        if h == "R":
            hh = m.pop().head()
            if isinstance(hh, tuple) and hh[0] == "w":
                return hh[1]
        raise KeyError(m)

    def locate(m):
        h = m.head()
        if h == "L":
            g = part(0)
            return (g, m) if g.arena.contains(m) else None
        try:
            i = component_of(m)
        except KeyError:
            return None
        if i is None:
            return None
        _, f_in = _omega_pairing_maps(i)
        im = f_in(m)
        g = part(i)
        return (g, im) if im is not None and g.arena.contains(im) else None

    def contains(m):
        try:
            return locate(m) is not None
        except KeyError:
            return False

    def label(m):
        loc = locate(m)
        if loc is None:
            raise KeyError(m)
        return loc[0].arena.label(loc[1])

    def enables(m, n):
        if m is STAR:
            loc = locate(n)
            return loc is not None and loc[0].arena.enables(STAR, loc[1])
        cm = component_of(m) if m.head() != "L" else None
        cn = component_of(n) if n.head() != "L" else None
        idx = [i for i in (cm, cn) if i is not None] or [0]
        if len(set(idx)) > 1:
            return False
        i = idx[0]
        _, f_in = _omega_pairing_maps(i)
        im, jn = f_in(m), f_in(n)
        g = part(i)
        return (im is not None and jn is not None
                and g.arena.contains(im) and g.arena.contains(jn)
                and g.arena.enables(im, jn))

    samples = tuple(dict.fromkeys(
        _omega_pairing_maps(i)[0](m)
        for i in range(sample_width) for m in part(i).arena.samples))

    def successors(m):
        if m is STAR:
            return tuple(x for x in samples if enables(STAR, x))
        i = component_of(m) if m.head() != "L" else 0
        f_out, f_in = _omega_pairing_maps(i)
        im = f_in(m)
        if im is None or not part(i).arena.contains(im):
            return ()
        return tuple(f_out(x) for x in part(i).arena.successors(im))

    arena = Arena(contains, label, enables, successors, 0, samples, name)

    def side_of(moves):
        for m in moves:
            if m.head() == "R":
                return component_of(m)
        return None

    def pos_last(s):
        if not legal_last(arena, s, 0):
            return False
        w = side_of(s.moves())
        if w is None:
            return all(m.head() == "L" for m in s.moves()) and part(0).pos(s)
        f_out, f_in = _omega_pairing_maps(w)
        sub, idx = project(s, f_in)
        return len(idx) == len(s) and part(w).pos(sub)

    def canon_moves(ms):
        if not ms:
            return []
        w = side_of(ms)
        if w is None:
            w = 0
        f_out, f_in = _omega_pairing_maps(w)
        inner = [f_in(m) for m in ms]
        if any(im is None for im in inner):
            return list(ms)
        return [f_out(x) for x in part(w)._canon_moves(inner)]

    def forced(s):
        if len(s) == 0:
            return None
        w = side_of(s.moves())
        if w is None:
            return None
        f_out, f_in = _omega_pairing_maps(w)
        return _mapped_forced(part(w), f_in, f_out, s)

    g = DynamicGame(OmegaPairingE(part(0).expr), arena, pos_last, canon_moves,
                    forced, name)
    g.omega_part_fn = part
    g.omega_maps = _omega_pairing_maps
    g.side_of = side_of
    return g


# ---------------------------------------------------------------------------
# Bang


def _bang_split(m):
    h = m.head()
    if isinstance(h, tuple) and h[0] == "b":
        return h[1], m.pop()
    return None


def bang(ga: DynamicGame, copies: Optional[int] = None) -> DynamicGame:
    if copies is None:
        copies = DEFAULT_BOUNDS.max_copy_index
    name = f"!{ga.name}"
    aa = ga.arena

    def contains(m):
        loc = _bang_split(m)
        return loc is not None and loc[0] >= 0 and aa.contains(loc[1])

    def label(m):
        loc = _bang_split(m)
        if loc is None or not aa.contains(loc[1]):
            raise KeyError(m)
        return aa.label(loc[1])

    def enables(m, n):
        if m is STAR:
            loc = _bang_split(n)
            return loc is not None and aa.contains(loc[1]) and aa.enables(STAR, loc[1])
        lm, ln = _bang_split(m), _bang_split(n)
        if lm is None or ln is None or lm[0] != ln[0]:
            return False
        return aa.enables(lm[1], ln[1])

    samples = tuple(m.push(("b", i)) for i in range(copies + 1) for m in aa.samples)

    def successors(m):
        if m is STAR:
            return tuple(x.push(("b", i)) for i in range(copies + 1)
                         for x in aa.successors(STAR))
        loc = _bang_split(m)
        if loc is None:
            return ()
        return tuple(x.push(("b", loc[0])) for x in aa.successors(loc[1]))

    arena = Arena(contains, label, enables, successors, ga.mu, samples, name)

    def thread(s, i):
        return project(
            s, lambda m: (lambda loc: loc[1] if loc and loc[0] == i else None)(_bang_split(m))
        )

    def pos_last(s):
        if not legal_last(arena, s, ga.mu):
            return False
        loc = _bang_split(s.move(len(s) - 1))
        sub, _ = thread(s, loc[0])
        return ga.pos(sub)

    def canon_moves(ms):
        order = {}
        groups = {}
        for m in ms:
            i = _bang_split(m)[0]
            order.setdefault(i, len(order))
            groups.setdefault(i, []).append(m.pop())
        canons = {i: iter(ga._canon_moves(v)) for i, v in groups.items()}
        return [next(canons[_bang_split(m)[0]]).push(("b", order[_bang_split(m)[0]]))
                for m in ms]

    def forced(s):
        if len(s) == 0:
            return None
        loc = _bang_split(s.move(len(s) - 1))
        if loc is None:
            return None
        i = loc[0]
        return _mapped_forced(
            ga,
            lambda m: (lambda l: l[1] if l and l[0] == i else None)(_bang_split(m)),
            lambda m: m.push(("b", i)),
            s,
        )

    g = DynamicGame(BangE(ga.expr), arena, pos_last, canon_moves, forced, name)
    g.thread_project = thread
    g.bang_part = ga
    g.copies = copies
    return g


# ---------------------------------------------------------------------------
# Dagger (promotion)

# The component must look like !A -o B from outside: external moves under
# ("L", ("b", j)) or ("R", ...).  Thread i renames these to
# ("L", ("b", <i,j>)) and ("R", ("b", i), ...); internal moves gain ("c", i).


def dagger(ga: DynamicGame, copies: Optional[int] = None) -> DynamicGame:
    if copies is None:
        copies = DEFAULT_BOUNDS.max_copy_index
    name = f"({ga.name})+"
    aa = ga.arena

    def split(m):
        h = m.head()
        if h == "L":
            rest = m.pop()
            hb = rest.head()
            if isinstance(hb, tuple) and hb[0] == "b":
                i, j = cantor_unpair(hb[1])
                return i, rest.pop().push(("b", j)).push("L")
            return None
        if h == "R":
            rest = m.pop()
            hb = rest.head()
            if isinstance(hb, tuple) and hb[0] == "b":
                return hb[1], rest.pop().push("R")
            return None
        if isinstance(h, tuple) and h[0] == "c":
            return h[1], m.pop()
        return None

    def embed(i, m):
        """ga-move -> outer move in thread i (shape decided by ga's label)."""
        lab = aa.label(m)
        h = m.head()
        if lab.degree == 0 and h == "L":
            rest = m.pop()
            hb = rest.head()
            if not (isinstance(hb, tuple) and hb[0] == "b"):
                raise ValueError(f"promotion needs a !A -o B shaped component, got {m}")
            return rest.pop().push(("b", cantor_pair(i, hb[1]))).push("L")
        if lab.degree == 0 and h == "R":
            return m.pop().push(("b", i)).push("R")
        if lab.degree > 0:
            return m.push(("c", i))
        raise ValueError(f"promotion needs a !A -o B shaped component, got {m}")

    def contains(m):
        loc = split(m)
        if loc is None or loc[0] < 0:
            return False
        i, im = loc
        if not aa.contains(im):
            return False
        lab = aa.label(im)
        if m.head() in ("L", "R"):
            return lab.degree == 0
        return lab.degree > 0

    def label(m):
        if not contains(m):
            raise KeyError(m)
        return aa.label(split(m)[1])

    def enables(m, n):
        if m is STAR:
            return contains(n) and aa.enables(STAR, split(n)[1])
        if not (contains(m) and contains(n)):
            return False
        lm, ln = split(m), split(n)
        if lm[0] != ln[0]:
            return False
        return aa.enables(lm[1], ln[1])

    samples = tuple(dict.fromkeys(
        embed(i, m) for i in range(copies + 1) for m in aa.samples
    ))

    def successors(m):
        if m is STAR:
            return tuple(x for x in samples if enables(STAR, x))
        loc = split(m)
        if loc is None:
            return ()
        i, im = loc
        return tuple(embed(i, x) for x in aa.successors(im))

    arena = Arena(contains, label, enables, successors, ga.mu, samples, name)

    def thread(s, i):
        return project(
            s, lambda m: (lambda loc: loc[1] if loc and loc[0] == i else None)(split(m))
        )

    def pos_last(s):
        if not legal_last(arena, s, ga.mu):
            return False
        loc = split(s.move(len(s) - 1))
        sub, _ = thread(s, loc[0])
        return ga.pos(sub)

    def canon_moves(ms):
        order = {}
        groups = {}
        for m in ms:
            i = split(m)[0]
            order.setdefault(i, len(order))
            groups.setdefault(i, []).append(split(m)[1])
        canons = {i: iter(ga._canon_moves(v)) for i, v in groups.items()}
        return [embed(order[split(m)[0]], next(canons[split(m)[0]])) for m in ms]

    def forced(s):
        if len(s) == 0:
            return None
        loc = split(s.move(len(s) - 1))
        if loc is None:
            return None
        i = loc[0]
        return _mapped_forced(
            ga,
            lambda m: (lambda l: l[1] if l and l[0] == i else None)(split(m)),
            lambda m: embed(i, m),
            s,
        )

    g = DynamicGame(DaggerE(ga.expr), arena, pos_last, canon_moves, forced, name)
    g.thread_project = thread
    g.embed_thread = embed
    g.dagger_part = ga
    g.copies = copies
    return g


# ---------------------------------------------------------------------------
# Concatenation

# gj must look like A -o B and gk like B -o C after full hiding.  The two
# copies of B become internal at the fresh degree max(mu_j, mu_k) + 1; the
# second copy's initials justify the first copy's.


def concat(gj: DynamicGame, gk: DynamicGame) -> DynamicGame:
    name = f"({gj.name} ; {gk.name})"
    aj, ak = gj.arena, gk.arena
    mu = max(gj.mu, gk.mu) + 1

    def j_in(m):
        h = m.head()
        if h == "L":
            return m if aj.contains(m) and aj.label(m).degree == 0 else None
        if h == ("s", 1):
            im = m.pop().push("R")
            return im if aj.contains(im) and aj.label(im).degree == 0 else None
        if h == ("i", 1):
            im = m.pop()
            return im if aj.contains(im) and aj.label(im).degree > 0 else None
        return None

    def j_out(m):
        h = m.head()
        d = aj.label(m).degree
        if d == 0 and h == "L":
            return m
        if d == 0 and h == "R":
            return m.pop().push(("s", 1))
        if d > 0:
            return m.push(("i", 1))
        raise ValueError(f"concat first component needs an A -o B shape, got {m}")

    def k_in(m):
        h = m.head()
        if h == "R":
            return m if ak.contains(m) and ak.label(m).degree == 0 else None
        if h == ("s", 2):
            im = m.pop().push("L")
            return im if ak.contains(im) and ak.label(im).degree == 0 else None
        if h == ("i", 2):
            im = m.pop()
            return im if ak.contains(im) and ak.label(im).degree > 0 else None
        return None

    def k_out(m):
        h = m.head()
        d = ak.label(m).degree
        if d == 0 and h == "R":
            return m
        if d == 0 and h == "L":
            return m.pop().push(("s", 2))
        if d > 0:
            return m.push(("i", 2))
        raise ValueError(f"concat second component needs a B -o C shape, got {m}")

    J_HEADS = ("L", ("s", 1), ("i", 1))

    def locate(m):
        im = j_in(m)
        if im is not None:
            return gj, im
        im = k_in(m)
        if im is not None:
            return gk, im
        return None

    def contains(m):
        return locate(m) is not None

    def label(m):
        loc = locate(m)
        if loc is None:
            raise KeyError(m)
        lab = loc[0].arena.label(loc[1])
        if m.head() in (("s", 1), ("s", 2)):
            return lab.shift(mu)
        return lab

    def b_initial_path(p):
        return aj.enables(STAR, p.push("R"))

    def enables(m, n):
        if m is STAR:
            return n.head() == "R" and ak.enables(STAR, n)
        locm, locn = locate(m), locate(n)
        if locm is None or locn is None:
            return False
        same_side = (m.head() in J_HEADS) == (n.head() in J_HEADS)
        if same_side and locm[0] is locn[0]:
            return locm[0].arena.enables(locm[1], locn[1])
        if m.head() == ("s", 2) and n.head() == ("s", 1):
            return b_initial_path(m.pop()) and b_initial_path(n.pop())
        return False

    samples = tuple(dict.fromkeys(
        [j_out(m) for m in aj.samples] + [k_out(m) for m in ak.samples]
    ))

    def successors(m):
        if m is STAR:
            return tuple(x for x in samples if enables(STAR, x))
        loc = locate(m)
        if loc is None:
            return ()
        emb = j_out if loc[0] is gj else k_out
        out = [emb(x) for x in loc[0].arena.successors(loc[1])]
        if m.head() == ("s", 2) and b_initial_path(m.pop()):
            out.extend(x for x in samples
                       if x.head() == ("s", 1) and b_initial_path(x.pop()))
        return tuple(dict.fromkeys(out))

    arena = Arena(contains, label, enables, successors, mu, samples, name)

    def middle(s):
        return project(s, lambda m: m if m.head() in (("s", 1), ("s", 2)) else None)

    def pr_owner(m):
        """Owner of a middle move read as a copycat play: the first copy is
        the domain side, so its labels flip."""
        lab = aj.label(m.pop().push("R"))
        return ("P" if lab.owner == "O" else "O") if m.head() == ("s", 1) else lab.owner

    def pr_ok(s):
        sub, _ = middle(s)
        prev = None
        for m in sub.moves():
            cur = pr_owner(m)
            if prev is None and cur != "O":
                return False
            if prev is not None and cur == prev:
                return False
            prev = cur
        for k in range(2, len(sub) + 1, 2):
            pre = sub.prefix(k)
            one, _ = project(pre, lambda m: m.pop() if m.head() == ("s", 1) else None)
            two, _ = project(pre, lambda m: m.pop() if m.head() == ("s", 2) else None)
            if one.entries != two.entries:
                return False
        return True

    def pos_last(s):
        i = len(s) - 1
        m, p = s.entries[i]
        if not contains(m):
            return False
        if p is None:
            if not enables(STAR, m):
                return False
        elif not (0 <= p < i and enables(s.move(p), m)):
            return False
        sj, _ = project(s, j_in)
        if not gj.pos(sj):
            return False
        sk, _ = project(s, k_in)
        if not gk.pos(sk):
            return False
        return pr_ok(s)

    def canon_moves(ms):
        js = [j_in(m) for m in ms]
        jlist = [x for x in js if x is not None]
        klist = [k_in(m) for m, j in zip(ms, js) if j is None]
        cj = iter(gj._canon_moves(jlist))
        ck = iter(gk._canon_moves(klist))
        return [j_out(next(cj)) if j is not None else k_out(next(ck)) for j in js]

    def partner(s, u):
        m = s.move(u)
        h = m.head()
        if h not in (("s", 1), ("s", 2)):
            return None
        other = ("s", 2) if h == ("s", 1) else ("s", 1)
        want = m.pop().push(other)
        if u + 1 < len(s) and s.move(u + 1) == want:
            return u + 1
        if u - 1 >= 0 and s.move(u - 1) == want:
            return u - 1
        return None

    def forced(s):
        if len(s) == 0:
            return None
        i = len(s) - 1
        m, p = s.entries[i]
        h = m.head()
        if h in (("s", 1), ("s", 2)):
            sub, _ = middle(s)
            if len(sub) % 2 == 1:
                path = m.pop()
                other = ("s", 2) if h == ("s", 1) else ("s", 1)
                copy = path.push(other)
                if h == ("s", 2) and b_initial_path(path):
                    return copy, i
                if p is None:
                    return copy, None
                q = partner(s, p)
                return copy, q
            return None
        if h == ("i", 1):
            return _mapped_forced(gj, j_in, j_out, s)
        if h == ("i", 2):
            return _mapped_forced(gk, k_in, k_out, s)
        return None

    g = DynamicGame(ConcatE(gj.expr, gk.expr), arena, pos_last, canon_moves, forced, name)
    g.concat_parts = (gj, gk)
    g.project_first = lambda s: project(s, j_in)
    g.project_second = lambda s: project(s, k_in)
    g.project_middle = middle
    g.embed_first = j_out
    g.embed_second = k_out
    return g


# ---------------------------------------------------------------------------
# Hiding

# The hidden game's positions are images of positions: membership searches
# for a preimage, extending a cached witness by internal segments.


def hide_game(g: DynamicGame, d, bounds=DEFAULT_BOUNDS) -> DynamicGame:
    dd = clamp_depth(d, g.mu)
    if dd == 0:
        return g
    arena = g.hidden_arena(dd)
    name = arena.name

    witnesses = {JSeq(): [JSeq()]}

    def survivors(w):
        return [i for i in range(len(w))
                if not (0 < g.arena.label(w.move(i)).degree <= dd)]

    def try_append(w, m, q):
        """Search for internal runs of g extending w after which m can be
        played with external justifier q (an index in the hidden play)."""
        fuel = bounds.fuel
        seen = set()
        stack = [w]
        found = []
        while stack and fuel > 0:
            fuel -= 1
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            surv = survivors(cur)
            ptrs = [None] if g.arena.enables(STAR, m) else []
            ptrs.extend(j for j in range(len(cur)) if g.arena.enables(cur.move(j), m))
            for p in ptrs:
                cand = cur.snoc(m, p)
                if not g.pos(cand):
                    continue
                if p is None:
                    ext = None
                else:
                    e = external_justifier(cand, g.arena, len(cand) - 1, dd)
                    ext = surv.index(e) if e is not None else None
                if ext == q:
                    found.append(cand)
                    if len(found) >= 4:
                        return found
            # deeper runs are fallbacks; stop digging below a node that
            # already produced a witness
            if found:
                continue
            for im, ip in g.extensions(cur, bounds):
                lab = g.arena.label(im)
                if not (0 < lab.degree <= dd):
                    continue
                stack.append(cur.snoc(im, ip))
        return found

    def pos_last(s):
        i = len(s) - 1
        pre = s.prefix(i)
        ws = witnesses.get(pre)
        if not ws:
            return False
        m, q = s.entries[i]
        if not arena.contains(m):
            return False
        got = []
        for w in ws:
            got.extend(try_append(w, m, q))
            if len(got) >= 4:
                break
        if not got:
            return False
        witnesses.setdefault(s, [])
        for cand in got:
            if cand not in witnesses[s]:
                witnesses[s].append(cand)
        return True

    def seed_witness(hidden_play, preimage):
        """Register a known preimage (used by strategy-level hiding)."""
        surv = [i for i in range(len(preimage))
                if not (0 < g.arena.label(preimage.move(i)).degree <= dd)]
        for k in range(len(hidden_play) + 1):
            if k < len(hidden_play):
                cut = surv[k - 1] + 1 if k else 0
            else:
                cut = len(preimage)
            pre = hidden_play.prefix(k)
            w = preimage.prefix(cut)
            bucket = witnesses.setdefault(pre, [])
            if w not in bucket:
                bucket.append(w)

    def forced(s):
        # A pending copy survives hiding exactly when its partner did, so
        # delegating through any witness is sound.
        for w in witnesses.get(s) or ():
            f = g.forced_o(w)
            if f is None:
                continue
            m, p = f
            if 0 < g.arena.label(m).degree <= dd:
                return None
            cand = w.snoc(m, p)
            if not g.pos(cand):
                continue
            if p is None:
                return m, None
            e = external_justifier(cand, g.arena, len(cand) - 1, dd)
            surv = survivors(w)
            return m, (surv.index(e) if e is not None else None)
        return None

    h = DynamicGame(
        HideE(g.expr, dd), arena,
        pos_last=pos_last,
        canon_moves=g._canon_moves,
        forced_o=forced,
        name=name,
    )
    h.base = g
    h.depth = dd
    h.seed_witness = seed_witness
    h.witness = lambda s: (witnesses.get(s) or [None])[0]
    return h


# ---------------------------------------------------------------------------
# Retagging (currying adapters and friends)


def retag_game(g: DynamicGame, name, fwd, bwd) -> DynamicGame:
    """Image of g under a move bijection.  fwd: inner -> outer; bwd inverts
    and returns None on moves outside the image."""
    aa = g.arena

    def contains(m):
        im = bwd(m)
        return im is not None and aa.contains(im)

    def label(m):
        im = bwd(m)
        if im is None or not aa.contains(im):
            raise KeyError(m)
        return aa.label(im)

    def enables(m, n):
        if m is STAR:
            im = bwd(n)
            return im is not None and aa.contains(im) and aa.enables(STAR, im)
        im, jn = bwd(m), bwd(n)
        if im is None or jn is None:
            return False
        return aa.enables(im, jn)

    samples = tuple(dict.fromkeys(fwd(m) for m in aa.samples))

    def successors(m):
        if m is STAR:
            return tuple(fwd(x) for x in aa.successors(STAR))
        im = bwd(m)
        if im is None:
            return ()
        return tuple(fwd(x) for x in aa.successors(im))

    arena = Arena(contains, label, enables, successors, g.mu, samples, name)

    def pos_last(s):
        sub, idx = project(s, bwd)
        return len(idx) == len(s) and g.pos(sub)

    def canon_moves(ms):
        inner = [bwd(m) for m in ms]
        if any(im is None for im in inner):
            return list(ms)
        return [fwd(x) for x in g._canon_moves(inner)]

    def forced(s):
        sub, idx = project(s, bwd)
        if len(idx) != len(s):
            return None
        return _mapped_forced(g, bwd, fwd, s)

    h = DynamicGame(RetagE(g.expr, name), arena, pos_last, canon_moves, forced, name)
    h.base = g
    h.fwd = fwd
    h.bwd = bwd
    return h


# ---------------------------------------------------------------------------
# Subgames and validation


def is_subgame(h: DynamicGame, g: DynamicGame, bounds=DEFAULT_BOUNDS, limit=400):
    """Bounded check of the component relation.  Returns (ok, reason)."""
    if h.mu != g.mu:
        return False, f"depth bound differs: {h.mu} vs {g.mu}"
    for m in h.arena.samples:
        if not g.arena.contains(m):
            return False, f"move {m} missing from {g.name}"
        if h.arena.label(m) != g.arena.label(m):
            return False, f"label of {m} differs"
    sample = h.arena.samples
    for m in sample:
        if h.arena.enables(STAR, m) != g.arena.enables(STAR, m):
            return False, f"rootedness of {m} differs"
        for n in sample:
            if h.arena.enables(m, n) != g.arena.enables(m, n):
                return False, f"enabling {m} -> {n} differs"
    plays = enumerate_positions(h, bounds, limit)
    for s in plays:
        if not g.pos(s):
            return False, f"position not inherited: {[str(m) for m in s.moves()]}"
    cut = min(len(plays), 40)
    for s in plays[:cut]:
        for t in plays[:cut]:
            if len(s) != len(t):
                continue
            for d in range(0, h.mu + 1):
                if h.equiv(s, t, d) != g.equiv(s, t, d):
                    return False, "identification differs on a pair of positions"
    return True, "ok"


def validate_game(g: DynamicGame, bounds=DEFAULT_BOUNDS, limit=300):
    """Bounded audit of the game laws; returns a list of findings."""
    findings = []
    try:
        validate_arena(g.arena)
    except ArenaViolation as e:
        findings.append(f"arena: {e}")
    plays = enumerate_positions(g, bounds, limit)
    for s in plays:
        bad = next((k for k in range(len(s)) if not g.pos(s.prefix(k))), None)
        if bad is not None:
            findings.append(f"prefix closure fails at length {bad}")
            break
    # internal O-continuations are determined by the staged view of the past
    odd = [s for s in plays
           if len(s) % 2 == 1 and g.arena.label(s.move(len(s) - 1)).degree > 0]
    for s in odd:
        for t in odd:
            ds = g.arena.label(s.move(len(s) - 1)).degree
            dt = g.arena.label(t.move(len(t) - 1)).degree
            if ds != dt:
                continue
            for i in range(0, ds):
                hs = hide_jseq(s.prefix(len(s) - 1), g.arena, i) if i else s.prefix(len(s) - 1)
                ht = hide_jseq(t.prefix(len(t) - 1), g.arena, i) if i else t.prefix(len(t) - 1)
                if hs.entries != ht.entries:
                    continue
                if hide_jseq(s, g.arena, i).entries != hide_jseq(t, g.arena, i).entries:
                    findings.append(
                        f"internal continuation not determined at stage {i} after "
                        f"{[str(x) for x in s.moves()]}"
                    )
    # extension property of the identification, probed at settled states:
    # both plays must have no internal dialogue pending at the stage compared
    rng = random.Random(7)
    pool = [s for s in plays if len(s) >= 1]
    if pool:
        for _ in range(60):
            s = rng.choice(pool)
            t = rng.choice(pool)
            for d in range(0, g.mu + 1):
                if d and not (is_complete(s, g.arena, d) and is_complete(t, g.arena, d)):
                    continue
                if not g.equiv(s, t, d):
                    continue
                for m, p in g.extensions(s, bounds)[:4]:
                    sm = s.snoc(m, p)
                    matched = False
                    for n, q in g.extensions(t, bounds):
                        tn = t.snoc(n, q)
                        if d and not (is_complete(sm, g.arena, d)
                                      == is_complete(tn, g.arena, d)):
                            continue
                        if g.equiv(sm, tn, d):
                            matched = True
                            break
                    if not matched:
                        findings.append(
                            f"identification not extendable at depth {d} after "
                            f"{[str(x) for x in sm.moves()]}"
                        )
    return findings
