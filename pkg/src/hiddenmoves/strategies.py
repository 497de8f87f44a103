"""Strategies as next-move oracles over dynamic games.

A strategy couples a game with a deterministic response function on
odd-length positions.  Play sets exist only as bounded unfoldings driven
by probing external O-moves; internal O-moves are never probed, the
driver feeds them from the game's forced-copy discipline.

Constructions: copycat, dereliction, tensor, pairing, promotion,
currying (a pure retagging), concatenation (interaction without hiding),
hiding (which replays a strategy through its internal phases and exposes
only the surviving moves), and composition = concatenation plus full
hiding.

Equivalence of strategies is checked as a bounded lockstep bisimulation
up to a move-path renaming discovered incrementally; the renaming is
committed greedily, preferring literally equal paths.
"""

from __future__ import annotations

from .arena import (
    JSeq,
    MoveId,
    OMEGA,
    STAR,
    clamp_depth,
    external_justifier,
    hide_jseq,
    is_complete,
    p_view,
)
from .games import (
    DEFAULT_BOUNDS,
    DynamicGame,
    bang,
    cantor_unpair,
    concat,
    dagger,
    flat_game,
    hide_game,
    lollipop,
    omega_pairing,
    omega_power,
    pairing,
    project,
    retag_game,
    tensor,
    terminal_game,
    with_,
)


class Diverged(Exception):
    """An internal interaction ran out of fuel or lost its preimage."""


class Strategy:
    """A deterministic next-move oracle on a dynamic game.

    next maps an odd-length position to (MoveId, pointer) or None; every
    returned move must extend the position to a position again.  options,
    when set, enumerates the O-moves offered at an even position; it is
    trusted to return legal extensions and saves drivers from searching
    the game for them (hidden strategies know their preimages, the game
    alone does not).
    """

    def __init__(self, game: DynamicGame, next_fn, name="", meta=None, options=None):
        self.game = game
        self.next = next_fn
        self.name = name or game.name
        self.meta = meta if meta is not None else ("opaque", self.name)
        self.options = options

    def __repr__(self):
        return f"Strategy({self.name})"


# ---------------------------------------------------------------------------
# The interaction driver


def step_options(game: DynamicGame, s: JSeq, bounds=DEFAULT_BOUNDS):
    """O-moves offered at an even position: the pending internal copy, if
    any, plus the external probes."""
    out = []
    f = game.forced_o(s)
    if f is not None:
        out.append(f)
    for m, p in game.extensions(s, bounds, owner="O"):
        if game.arena.label(m).degree == 0:
            out.append((m, p))
    return out


def probe_options(sig: Strategy, s: JSeq, bounds=DEFAULT_BOUNDS):
    if sig.options is not None:
        return sig.options(s, bounds)
    return step_options(sig.game, s, bounds)


class PlayBook:
    """Bounded unfolding of a strategy: the even plays reached, plus the
    branches that were cut (no response, fuel, length)."""

    def __init__(self, plays, leaves):
        self.plays = plays
        self.leaves = leaves
        self._set = set(plays)

    def __iter__(self):
        return iter(self.plays)

    def __len__(self):
        return len(self.plays)

    def __contains__(self, s):
        return s in self._set

    def maximal(self):
        prefixes = {s.prefix(len(s) - 2) for s in self.plays if len(s)}
        return [s for s in self.plays if s not in prefixes]


def plays(sigma: Strategy, bounds=DEFAULT_BOUNDS) -> PlayBook:
    g = sigma.game
    out = [JSeq()]
    leaves = []
    seen = {JSeq()}
    frontier = [JSeq()]
    while frontier:
        nxt = []
        for s in frontier:
            if len(s) + 2 > bounds.max_play_len:
                leaves.append((s, "length bound"))
                continue
            try:
                opts = probe_options(sigma, s, bounds)
            except Diverged as exc:
                leaves.append((s, f"diverged: {exc}"))
                continue
            for m, p in opts:
                so = s.snoc(m, p)
                if sigma.options is None and not g.pos(so):
                    raise ValueError(f"{sigma.name}: offered O-move is not legal at {s}")
                try:
                    r = sigma.next(so)
                except Diverged as exc:
                    leaves.append((so, f"diverged: {exc}"))
                    continue
                if r is None:
                    leaves.append((so, "no response"))
                    continue
                sp = so.snoc(*r)
                if sigma.options is None and not g.pos(sp):
                    raise ValueError(f"{sigma.name}: response {r} is not legal after {so}")
                if sp not in seen:
                    seen.add(sp)
                    out.append(sp)
                    nxt.append(sp)
        frontier = nxt
    return PlayBook(out, leaves)


# ---------------------------------------------------------------------------
# Identity-shaped strategies


def copycat(ga: DynamicGame, name=None) -> Strategy:
    """Mirror every O-move into the other copy.  Mirrors of consecutive
    occurrences are paired, so a mirrored justifier is its pair."""
    if not ga.normalized():
        raise ValueError("copycat needs a normalized game")
    g = lollipop(ga, ga)

    def nxt(s):
        n = len(s) - 1
        m, p = s.entries[n]
        mm = m.pop().push("R" if m.head() == "L" else "L")
        return (mm, n) if p is None else (mm, p ^ 1)

    return Strategy(g, nxt, name or f"cp[{ga.name}]", ("copycat", ga.name))


def dereliction(ga: DynamicGame, name=None) -> Strategy:
    """Copycat against thread 0 of the replicated side."""
    if not ga.normalized():
        raise ValueError("dereliction needs a normalized game")
    g = lollipop(bang(ga), ga)

    def mirror(m):
        if m.head() == "R":
            return m.pop().push(("b", 0)).push("L")
        return m.pop().pop().push("R")

    def nxt(s):
        n = len(s) - 1
        m, p = s.entries[n]
        mm = mirror(m)
        return (mm, n) if p is None else (mm, p ^ 1)

    return Strategy(g, nxt, name or f"der[{ga.name}]", ("dereliction", ga.name))


# ---------------------------------------------------------------------------
# Flat-game strategies


def nat_game() -> DynamicGame:
    return flat_game(range(9), "N")


def numeral(n: int, ctx: DynamicGame = None, name=None) -> Strategy:
    """q -> n, over an inert replicated context (terminal by default)."""
    g = lollipop(bang(ctx if ctx is not None else terminal_game()), nat_game())

    def nxt(s):
        i = len(s) - 1
        m, p = s.entries[i]
        if m.head() == "R" and m.pop().base == "q":
            return MoveId(n).push("R"), i
        return None

    return Strategy(g, nxt, name or f"num[{n}]", ("numeral", n))


def num_fun(f, name) -> Strategy:
    """The strategy q -> q0, q q0 n0 -> f(n), on replicated input."""
    g = lollipop(bang(nat_game()), nat_game())

    def nxt(s):
        i = len(s) - 1
        m, p = s.entries[i]
        if m.head() == "R" and m.pop().base == "q":
            return MoveId("q").push(("b", 0)).push("L"), i
        if m.head() == "L" and isinstance(m.pop().pop().base, int):
            return MoveId(f(m.pop().pop().base)).push("R"), 0
        return None

    return Strategy(g, nxt, name, ("num_fun", name))


def num_fun_plain(f, name) -> Strategy:
    """As num_fun but on a single unreplicated input copy."""
    g = lollipop(nat_game(), nat_game())

    def nxt(s):
        i = len(s) - 1
        m, p = s.entries[i]
        if m.head() == "R" and m.pop().base == "q":
            return MoveId("q").push("L"), i
        if m.head() == "L" and isinstance(m.pop().base, int):
            return MoveId(f(m.pop().base)).push("R"), 0
        return None

    return Strategy(g, nxt, name, ("num_fun_plain", name))


# ---------------------------------------------------------------------------
# Routed constructions


def _routed(part_next, s, split_fn, embed_fn):
    sub, idx = project(s, split_fn)
    r = part_next(sub)
    if r is None:
        return None
    m, p = r
    if p is None:
        return embed_fn(m), None
    back = {v: k for k, v in idx.items()}
    return embed_fn(m), back[p]


def tensor_strat(phi: Strategy, psi: Strategy, name=None) -> Strategy:
    g = tensor(phi.game, psi.game)

    def nxt(s):
        tag = s.move(len(s) - 1).head()
        part = phi if tag == "L" else psi
        return _routed(
            part.next, s,
            lambda m: m.pop() if m.head() == tag else None,
            lambda m: m.push(tag),
        )

    return Strategy(g, nxt, name or f"({phi.name} x {psi.name})",
                    ("tensor", phi.meta, psi.meta))


def pairing_strat(phi: Strategy, psi: Strategy, name=None) -> Strategy:
    """One component per play, over the shared context."""
    g = pairing(phi.game, psi.game)
    (l_out, l_in), (r_out, r_in) = g.pair_maps

    def nxt(s):
        w = g.side_of(s.moves())
        if w == 2:
            return _routed(psi.next, s, r_in, r_out)
        return _routed(phi.next, s, l_in, l_out)

    return Strategy(g, nxt, name or f"<{phi.name}, {psi.name}>",
                    ("pairing", phi.meta, psi.meta))


def _dagger_thread(m: MoveId) -> int:
    h = m.head()
    if h == "L":
        return cantor_unpair(m.pop().head()[1])[0]
    if h == "R":
        return m.pop().head()[1]
    return h[1]


def promotion_strat(phi: Strategy, copies=None, name=None) -> Strategy:
    """Run an independent copy of phi in every replication thread."""
    g = dagger(phi.game, copies)

    def nxt(s):
        i = _dagger_thread(s.move(len(s) - 1))
        sub, idx = g.thread_project(s, i)
        r = phi.next(sub)
        if r is None:
            return None
        m, p = r
        if p is None:
            return g.embed_thread(i, m), None
        back = {v: k for k, v in idx.items()}
        return g.embed_thread(i, m), back[p]

    return Strategy(g, nxt, name or f"({phi.name})+", ("promotion", phi.meta))


# ---------------------------------------------------------------------------
# Currying: a pure retagging between the two readings of a context


def _curry_fwd(m: MoveId) -> MoveId:
    h = m.head()
    if h == "L":
        rest = m.pop()
        hb = rest.head()
        if not (isinstance(hb, tuple) and hb[0] == "b"):
            raise ValueError(f"currying needs a replicated pair domain, got {m}")
        body = rest.pop()
        if body.head() == "L":
            return body.pop().push(hb).push("L")
        if body.head() == "R":
            return body.pop().push(hb).push("L").push("R")
        raise ValueError(f"currying needs a paired domain, got {m}")
    if h == "R":
        return m.pop().push("R").push("R")
    return m


def _curry_bwd(m: MoveId):
    h = m.head()
    if h == "L":
        rest = m.pop()
        hb = rest.head()
        if not (isinstance(hb, tuple) and hb[0] == "b"):
            return None
        return rest.pop().push("L").push(hb).push("L")
    if h == "R":
        rest = m.pop()
        if rest.head() == "R":
            return rest.pop().push("R")
        if rest.head() == "L":
            rest2 = rest.pop()
            hb = rest2.head()
            if not (isinstance(hb, tuple) and hb[0] == "b"):
                return None
            return rest2.pop().push("R").push(hb).push("L")
        return None
    return m


def conjugate(phi: Strategy, retagged: DynamicGame, name=None) -> Strategy:
    """Replay phi across a retagging of its game."""

    def nxt(s):
        return _routed(phi.next, s, retagged.bwd, retagged.fwd)

    return Strategy(retagged, nxt, name or retagged.name, ("retag", phi.meta))


def curry(phi: Strategy, name=None) -> Strategy:
    nm = name or f"cur({phi.name})"
    for m in phi.game.arena.samples:
        _curry_fwd(m)  # shape check
    g2 = retag_game(phi.game, nm, _curry_fwd, _curry_bwd)
    return conjugate(phi, g2, nm)


def uncurry(phi: Strategy, name=None) -> Strategy:
    nm = name or f"uncur({phi.name})"

    def fwd(m):
        im = _curry_bwd(m)
        if im is None:
            raise ValueError(f"uncurrying needs a curried surface, got {m}")
        return im

    g2 = retag_game(phi.game, nm, fwd, _curry_fwd)
    return conjugate(phi, g2, nm)


# ---------------------------------------------------------------------------
# Cartesian structure: projections, evaluation, the empty strategy


def projection_strat(ga: DynamicGame, gb: DynamicGame, which: int, name=None) -> Strategy:
    """Dereliction against one component of a product domain."""
    if not (ga.normalized() and gb.normalized()):
        raise ValueError("projection needs normalized games")
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    side = "L" if which == 1 else "R"
    g = lollipop(bang(with_(ga, gb)), ga if which == 1 else gb)

    def nxt(s):
        n = len(s) - 1
        m, p = s.entries[n]
        if m.head() == "R":
            mm = m.pop().push(side).push(("b", 0)).push("L")
        else:
            mm = m.pop().pop().pop().push("R")
        return (mm, n) if p is None else (mm, p ^ 1)

    return Strategy(g, nxt, name or f"pr{which}[{ga.name},{gb.name}]",
                    ("projection", which, ga.name, gb.name))


def ev_strat(gb: DynamicGame, gc: DynamicGame, name=None) -> Strategy:
    """Apply the function component of the domain to the argument component.

    The function is run in replication thread 0; its request for input
    copy i is answered by opening thread i + 1 on the argument side."""
    if not (gb.normalized() and gc.normalized()):
        raise ValueError("ev needs normalized games")
    fn = lollipop(bang(gb), gc)
    g = lollipop(bang(with_(fn, gb)), gc)

    def mirror(m):
        if m.head() == "R":
            return m.pop().push("R").push("L").push(("b", 0)).push("L")
        t = m.pop().head()[1]
        y = m.pop().pop()
        if y.head() == "R":
            w = y.pop()
            return w.push(("b", t - 1)).push("L").push("L").push(("b", 0)).push("L")
        z = y.pop()
        if z.head() == "R":
            return z.pop().push("R")
        i = z.pop().head()[1]
        return z.pop().pop().push("R").push(("b", i + 1)).push("L")

    def nxt(s):
        n = len(s) - 1
        m, p = s.entries[n]
        mm = mirror(m)
        return (mm, n) if p is None else (mm, p ^ 1)

    return Strategy(g, nxt, name or f"ev[{gb.name},{gc.name}]",
                    ("ev", gb.name, gc.name))


def terminal_strat(ga: DynamicGame, name=None) -> Strategy:
    """The strategy with no responses; total because its game has no openings."""
    g = lollipop(bang(ga), terminal_game())
    return Strategy(g, lambda s: None, name or f"!_[{ga.name}]", ("terminal", ga.name))


def projection_path_strat(ctx: DynamicGame, tags, comp: DynamicGame,
                          name=None) -> Strategy:
    """Copycat against one component of a nested product context, reached
    through replication thread 0.  tags lists the product sides from the
    root of the context down to the component."""
    g = lollipop(bang(ctx), comp)
    k = len(tags)

    def wrap(x):
        for t in reversed(tags):
            x = x.push(t)
        return x.push(("b", 0)).push("L")

    def nxt(s):
        i = len(s) - 1
        m, p = s.entries[i]
        if m.head() == "R":
            mm = wrap(m.pop())
        else:
            mm = m
            for _ in range(k + 2):
                mm = mm.pop()
            mm = mm.push("R")
        return (mm, i) if p is None else (mm, p ^ 1)

    return Strategy(g, nxt, name or f"pr[{'.'.join(tags)}]",
                    ("projection_path", tuple(tags)))


def omega_pairing_strat(part_fn, name=None) -> Strategy:
    """Countable pairing over a shared context; components built on demand."""
    strats = {}

    def part(i):
        if i not in strats:
            strats[i] = part_fn(i)
        return strats[i]

    g = omega_pairing(lambda i: part(i).game, name)

    def nxt(s):
        w = g.side_of(s.moves())
        if w is None:
            w = 0
        f_out, f_in = g.omega_maps(w)
        return _routed(part(w).next, s, f_in, f_out)

    return Strategy(g, nxt, name or "<...>^w", ("omega_pairing",))


def theta_strat(name="theta") -> Strategy:
    """The case strategy: read the scrutinee, then copy the branch it names.

    The scrutinee is the left product component, read in replication
    thread 0; an answer n opens thread 1 on component n of the branch
    product and the branch's answer is copied out."""
    n = nat_game()
    g = lollipop(bang(with_(n, omega_power(n))), n)

    def nxt(s):
        i = len(s) - 1
        m, p = s.entries[i]
        if m.head() == "R" and m.pop().base == "q":
            return MoveId("q").push("L").push(("b", 0)).push("L"), i
        if m.head() == "L":
            y = m.pop().pop()
            if y.head() == "L" and isinstance(y.pop().base, int):
                k = y.pop().base
                return (MoveId("q").push(("w", k)).push("R")
                        .push(("b", 1)).push("L")), 0
            if y.head() == "R" and isinstance(y.pop().pop().base, int):
                return MoveId(y.pop().pop().base).push("R"), 0
        return None

    return Strategy(g, nxt, name, ("theta",))


# ---------------------------------------------------------------------------
# Concatenation, hiding, composition


J_SIDE = ("L", ("s", 1), ("i", 1))


def concat_strat(sig: Strategy, tau: Strategy, name=None) -> Strategy:
    """Interaction without hiding; the game's forced-copy discipline
    carries the middle communication, this oracle only routes."""
    g = concat(sig.game, tau.game)

    def nxt(s):
        if s.move(len(s) - 1).head() in J_SIDE:
            sub, idx = g.project_first(s)
            r = sig.next(sub)
            emb = g.embed_first
        else:
            sub, idx = g.project_second(s)
            r = tau.next(sub)
            emb = g.embed_second
        if r is None:
            return None
        m, p = r
        if p is None:
            return emb(m), None
        back = {v: k for k, v in idx.items()}
        return emb(m), back[p]

    return Strategy(g, nxt, name or f"({sig.name} ++ {tau.name})",
                    ("concat", sig.meta, tau.meta))


def hide_strategy(sig: Strategy, d, bounds=DEFAULT_BOUNDS, name=None) -> Strategy:
    """Expose only the moves surviving d steps of hiding; the oracle keeps
    a preimage interaction per hidden position and lets sig play through
    the erased phases."""
    g = sig.game
    dd = clamp_depth(d, g.mu)
    if dd == 0:
        return sig
    h = hide_game(g, dd, bounds)
    state = {(): JSeq()}

    def survivors(u):
        return [i for i in range(len(u))
                if not (0 < g.arena.label(u.move(i)).degree <= dd)]

    def extend_base(u, m, q):
        f = g.forced_o(u)
        if f is not None and f[0] == m:
            cands = [f[1]]
        else:
            cands = [None] if g.arena.enables(STAR, m) else []
            cands.extend(j for j in range(len(u)) if g.arena.enables(u.move(j), m))
        surv = survivors(u)
        for p in cands:
            cand = u.snoc(m, p)
            if not g.pos(cand):
                continue
            if p is None:
                e = None
            else:
                e = external_justifier(cand, g.arena, len(cand) - 1, dd)
                e = surv.index(e) if e is not None else None
            if e == q:
                return cand
        return None

    def run(u):
        """Advance sig until it emits a surviving move or goes silent."""
        fuel = bounds.fuel
        while True:
            if fuel <= 0:
                raise Diverged(f"fuel exhausted while hiding {sig.name}")
            if len(u) % 2 == 1:
                r = sig.next(u)
                if r is None:
                    return u, None
                u = u.snoc(*r)
                if not g.pos(u):
                    raise ValueError(f"{sig.name}: response {r} is not legal")
                if not (0 < g.arena.label(r[0]).degree <= dd):
                    return u, r[0]
            else:
                f = g.forced_o(u)
                if f is None or not (0 < g.arena.label(f[0]).degree <= dd):
                    return u, None
                u = u.snoc(*f)
            fuel -= 1

    def preimage(t):
        """The cached interaction behind an even hidden play, rebuilt by
        replaying t when missing."""
        hit = state.get(t.entries)
        if hit is not None:
            return hit
        u = JSeq()
        for k in range(0, len(t), 2):
            m, q = t.entries[k]
            u2 = extend_base(u, m, q)
            if u2 is None:
                raise Diverged(f"no preimage for O-move {m} at {t.prefix(k)}")
            u, r = run(u2)
            if r is None or r != t.entries[k + 1][0]:
                raise Diverged(f"preimage replay of {t.prefix(k + 2)} disagrees")
            state[t.prefix(k + 2).entries] = u
        return u

    def nxt(s):
        u = preimage(s.prefix(len(s) - 1))
        m, q = s.entries[len(s) - 1]
        u2 = extend_base(u, m, q)
        if u2 is None:
            raise Diverged(f"no preimage extension for {m}")
        u3, r = run(u2)
        if r is None:
            return None
        e = external_justifier(u3, g.arena, len(u3) - 1, dd)
        surv = survivors(u3.prefix(len(u3) - 1))
        hp = surv.index(e) if e is not None else None
        sp = s.snoc(r, hp)
        state[sp.entries] = u3
        h.seed_witness(sp, u3)
        return r, hp

    def options(s, bounds2):
        """Visible O-moves, read off the preimage instead of searching the
        hidden game for them."""
        u = preimage(s)
        surv = survivors(u)
        out = []
        f = g.forced_o(u)
        if f is not None and not (0 < g.arena.label(f[0]).degree <= dd):
            m, p = f
            cand = u.snoc(m, p)
            if p is None:
                out.append((m, None))
            else:
                e = external_justifier(cand, g.arena, len(cand) - 1, dd)
                out.append((m, surv.index(e) if e is not None else None))
        for m, p in base_options(u, bounds2):
            if g.arena.label(m).degree != 0:
                continue
            cand = u.snoc(m, p)
            if p is None:
                e = None
            else:
                e = external_justifier(cand, g.arena, len(cand) - 1, dd)
                e = surv.index(e) if e is not None else None
            if (m, e) not in out:
                out.append((m, e))
        return out

    def base_options(u, bounds2):
        if sig.options is not None:
            return sig.options(u, bounds2)
        return [(m, p) for m, p in g.extensions(u, bounds2, owner="O")]

    out = Strategy(h, nxt, name or f"hide{dd}({sig.name})",
                   ("hide", dd, sig.meta), options=options)
    out.hide_base = sig
    out.hide_depth = dd
    return out


def compose(sig: Strategy, tau: Strategy, bounds=DEFAULT_BOUNDS, name=None) -> Strategy:
    out = hide_strategy(concat_strat(sig, tau), OMEGA, bounds)
    if name:
        out.name = name
    return out


# ---------------------------------------------------------------------------
# Bounded equivalence


class EquivVerdict:
    """Equal, Distinguished(position, side), or Inconclusive(reason)."""

    def __init__(self, tag, position=None, side=None, reason=None, renaming=None):
        self.tag = tag
        self.position = position
        self.side = side
        self.reason = reason
        self.renaming = renaming

    def __bool__(self):
        return self.tag == "Equal"

    def __repr__(self):
        if self.tag == "Equal":
            return "Equal"
        if self.tag == "Distinguished":
            return f"Distinguished({self.position}, {self.side})"
        return f"Inconclusive({self.reason})"

    @staticmethod
    def equal(renaming=None):
        return EquivVerdict("Equal", renaming=renaming)

    @staticmethod
    def distinguished(position, side):
        return EquivVerdict("Distinguished", position=position, side=side)

    @staticmethod
    def inconclusive(reason):
        return EquivVerdict("Inconclusive", reason=reason)


def strat_equiv(sig: Strategy, tau: Strategy, bounds=DEFAULT_BOUNDS) -> EquivVerdict:
    """Lockstep bisimulation over the probe tree, up to a path renaming
    discovered on the way (committed greedily, preferring equal paths)."""
    tagmap = {}
    inv = {}

    def unify(ms, mt):
        if ms.base != mt.base:
            return False
        if ms.path in tagmap:
            return tagmap[ms.path] == mt.path
        if mt.path in inv:
            return False
        tagmap[ms.path] = mt.path
        inv[mt.path] = ms.path
        return True

    stack = [(JSeq(), JSeq())]
    while stack:
        s, t = stack.pop()
        if len(s) + 2 > bounds.max_play_len:
            continue
        try:
            os_ = probe_options(sig, s, bounds)
            ot_ = probe_options(tau, t, bounds)
        except Diverged as exc:
            return EquivVerdict.inconclusive(str(exc))
        used = set()
        for ms, ps in os_:
            hit = None
            fallback = None
            for k, (mt, pt) in enumerate(ot_):
                if k in used or pt != ps or mt.base != ms.base:
                    continue
                if ms.path in tagmap:
                    if tagmap[ms.path] == mt.path:
                        hit = k
                        break
                    continue
                if mt.path in inv:
                    continue
                if mt.path == ms.path:
                    hit = k
                    break
                if fallback is None:
                    fallback = k
            if hit is None:
                hit = fallback
            if hit is None:
                return EquivVerdict.distinguished(s.snoc(ms, ps), "left")
            used.add(hit)
            mt, pt = ot_[hit]
            unify(ms, mt)
            so, to = s.snoc(ms, ps), t.snoc(mt, pt)
            try:
                rs = sig.next(so)
                rt = tau.next(to)
            except Diverged as exc:
                return EquivVerdict.inconclusive(str(exc))
            if (rs is None) != (rt is None):
                side = "left" if rs is not None else "right"
                pos = so.snoc(*rs) if rs is not None else to.snoc(*rt)
                return EquivVerdict.distinguished(pos, side)
            if rs is None:
                continue
            if rs[1] != rt[1] or not unify(rs[0], rt[0]):
                return EquivVerdict.distinguished(so.snoc(*rs), "left")
            stack.append((so.snoc(*rs), to.snoc(*rt)))
        for k, (mt, pt) in enumerate(ot_):
            if k not in used:
                return EquivVerdict.distinguished(t.snoc(mt, pt), "right")
    return EquivVerdict.equal(dict(tagmap))


# ---------------------------------------------------------------------------
# Property report


def _view_key(g, s):
    """The content of the P-view at an odd position: moves plus pointers
    remapped to view slots."""
    view = p_view(s, g.arena)
    slot = {i: k for k, i in enumerate(view)}
    return tuple((s.move(i), slot.get(s.ptr(i))) for i in view)


def _odd_probes(sig, book, bounds):
    """(odd position, response) pairs behind a play book."""
    out = []
    for s in book:
        try:
            opts = probe_options(sig, s, bounds)
        except Diverged:
            continue
        for m, p in opts:
            so = s.snoc(m, p)
            try:
                out.append((so, sig.next(so)))
            except Diverged:
                out.append((so, "diverged"))
    return out


def check_strategy_properties(sig: Strategy, bounds=DEFAULT_BOUNDS) -> dict:
    """Bounded verdicts {holds-on-probes | violated(witness)} for the
    strategy conditions; totality and noetherianity are surrogates
    relative to the probe bounds."""
    g = sig.game
    a = g.arena
    book = plays(sig, bounds)
    probes = _odd_probes(sig, book, bounds)
    report = {}

    def verdict(witness):
        return ("violated", witness) if witness is not None else ("holds-on-probes", None)

    # next is a function, so determinism can only fail through unequal
    # responses at equal positions; recompute to catch impure oracles.
    det = None
    for so, r in probes:
        if r == "diverged":
            continue
        try:
            again = sig.next(so)
        except Diverged:
            again = "diverged"
        if again != r:
            det = {"position": so, "first": r, "second": again}
            break
    report["deterministic"] = verdict(det)

    ext = None
    mu = g.mu
    pairs = [(x, y) for i, x in enumerate(probes) for y in probes[i + 1:]]
    for (so, r), (to, q) in pairs:
        if r in (None, "diverged") or q in (None, "diverged"):
            continue
        sn, tn = so.snoc(*r), to.snoc(*q)
        for d in range(1, mu + 1):
            if not (is_complete(sn, a, d) and is_complete(tn, a, d)):
                continue
            if hide_jseq(so, a, d).entries != hide_jseq(to, a, d).entries:
                continue
            es = external_justifier(sn, a, len(sn) - 1, d)
            et = external_justifier(tn, a, len(tn) - 1, d)
            hs = [i for i in range(len(so))
                  if not (0 < a.label(so.move(i)).degree <= d)]
            ht = [i for i in range(len(to))
                  if not (0 < a.label(to.move(i)).degree <= d)]
            ves = hs.index(es) if es is not None else None
            vet = ht.index(et) if et is not None else None
            if r[0] != q[0] or ves != vet:
                ext = {"left": sn, "right": tn, "depth": d}
                break
        if ext:
            break
    report["externally_consistent"] = verdict(ext)

    val = None
    for (so, r), (to, q) in pairs:
        if r == "diverged" or q == "diverged":
            continue
        if len(so) != len(to) or not g.equiv(so, to, 0):
            continue
        if (r is None) != (q is None):
            val = {"left": so, "right": to}
            break
        if r is not None and not g.equiv(so.snoc(*r), to.snoc(*q), 0):
            val = {"left": so.snoc(*r), "right": to.snoc(*q)}
            break
    report["valid"] = verdict(val)

    inn = None
    seen_views = {}
    for so, r in probes:
        if r == "diverged":
            continue
        key = _view_key(g, so)
        view = p_view(so, a)
        slot = {i: k for k, i in enumerate(view)}
        resp = None if r is None else (r[0], slot.get(r[1]))
        if key in seen_views and seen_views[key][0] != resp:
            inn = {"position": so, "other": seen_views[key][1]}
            break
        seen_views.setdefault(key, (resp, so))
    report["innocent"] = verdict(inn)

    wb = None
    for so, r in probes:
        if r in (None, "diverged") or a.label(r[0]).kind != "A":
            continue
        view = p_view(so, a)
        if r[1] not in view:
            continue
        tail = view[view.index(r[1]) + 1:]
        for i in tail:
            if a.label(so.move(i)).kind != "Q":
                continue
            if not any(a.label(so.move(j)).kind == "A" and so.ptr(j) == i for j in tail):
                wb = {"position": so, "answer": r, "open_question": i}
                break
        if wb:
            break
    report["well_bracketed"] = verdict(wb)

    tot = None
    for pos, why in book.leaves:
        if why != "length bound":
            tot = {"position": pos, "reason": why}
            break
    report["total"] = verdict(tot)

    noe = None
    for s in book:
        chain = 0
        prev = None
        for k in range(1, len(s), 2):
            key = _view_key(g, s.prefix(k + 1))
            if prev is not None and len(key) > len(prev) and key[:len(prev)] == prev:
                chain += 1
            else:
                chain = 1
            prev = key
            if chain >= bounds.max_play_len:
                noe = {"position": s.prefix(k + 1), "chain": chain}
                break
        if noe:
            break
    report["noetherian"] = verdict(noe)

    return report


# ---------------------------------------------------------------------------
# Table rendering


def _tag_rank(tag):
    if tag == "L":
        return (0, 0)
    if tag == ("i", 1):
        return (1, 0)
    if tag == ("s", 1):
        return (2, 0)
    if tag == ("s", 2):
        return (3, 0)
    if tag == ("i", 2):
        return (4, 0)
    if tag == "R":
        return (5, 0)
    if isinstance(tag, tuple) and len(tag) == 2 and isinstance(tag[1], int):
        return (0, tag[1])
    return (6, 0)


def _tag_text(tag):
    if isinstance(tag, str):
        return tag
    return f"{tag[0]}{tag[1]}"


def play_columns(s: JSeq):
    cols = []
    for m in s.moves():
        if m.path not in cols:
            cols.append(m.path)
    cols.sort(key=lambda p: tuple(_tag_rank(t) for t in p))
    return cols


def move_text(game: DynamicGame, m: MoveId) -> str:
    deg = game.arena.label(m).degree
    body = str(m.base)
    return f"[{body}]_{deg}" if deg > 0 else body


def play_grid(game: DynamicGame, s: JSeq):
    """Rows (column index, cell text, pointer) against the sorted column
    list; comparing grids compares tables up to a renaming of tags."""
    cols = play_columns(s)
    return [(cols.index(m.path), move_text(game, m), s.ptr(i))
            for i, m in enumerate(s.moves())]


def render_play(game: DynamicGame, s: JSeq, show_pointers=False) -> str:
    cols = play_columns(s)
    heads = [".".join(_tag_text(t) for t in p) or "." for p in cols]
    cells = []
    for i, m in enumerate(s.moves()):
        text = move_text(game, m)
        if show_pointers and s.ptr(i) is not None:
            text += f"({s.ptr(i)})"
        cells.append((cols.index(m.path), text))
    widths = [max(len(heads[c]), max((len(t) for cc, t in cells if cc == c), default=0))
              for c in range(len(cols))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(heads, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for c, text in cells:
        lines.append("  ".join(
            (text if cc == c else "").ljust(w) for cc, w in enumerate(widths)))
    return "\n".join(lines)


def render_strategy(sig: Strategy, bounds=DEFAULT_BOUNDS, show_pointers=False) -> str:
    book = plays(sig, bounds)
    blocks = [render_play(sig.game, s, show_pointers) for s in book.maximal() if len(s)]
    return "\n\n".join(blocks) if blocks else "(empty)"
