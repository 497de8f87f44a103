"""Execution as hiding, one degree at a time.

Objects are normalized dynamic games.  A morphism keeps a concrete
strategy whose fully hidden surface lies inside !dom -o cod; composition
concatenates without hiding, so the interaction stays in the plays as
higher-degree internal moves.  Evaluation peels one degree; values are
the morphisms with nothing left to hide.  Equality of morphisms is taken
up to evaluation: evaluate both sides to values and compare the visible
trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arena import OMEGA
from .games import (
    DynamicGame,
    ProbeBounds,
    bang,
    is_subgame,
    lollipop,
    terminal_game,
    with_,
)
from .strategies import (
    EquivVerdict,
    Strategy,
    concat_strat,
    curry,
    dereliction,
    ev_strat,
    hide_strategy,
    numeral,
    pairing_strat,
    plays,
    projection_strat,
    promotion_strat,
    strat_equiv,
    terminal_strat,
)

# Morphism probing happens on nested interactions, so the budgets are
# tighter than the game-level defaults.
LAW_BOUNDS = ProbeBounds(max_play_len=24, numerals=(0, 1, 2), max_copy_index=2)


@dataclass
class Morphism:
    """A strategy presented as an arrow between normalized games."""

    dom: DynamicGame
    cod: DynamicGame
    strat: Strategy
    name: str = ""

    def __post_init__(self):
        if not self.dom.normalized():
            raise ValueError(f"domain {self.dom.name} is not normalized")
        if not self.cod.normalized():
            raise ValueError(f"codomain {self.cod.name} is not normalized")
        if not self.name:
            self.name = self.strat.name

    @property
    def mu(self) -> int:
        return self.strat.game.mu

    def is_value(self) -> bool:
        return self.strat.game.normalized()

    def surface(self) -> DynamicGame:
        return lollipop(bang(self.dom), self.cod)

    def validate(self, bounds=LAW_BOUNDS, deep=False, limit=120):
        """Probe that the fully hidden strategy lives inside !dom -o cod.

        The deep variant also compares position sets move by move; the
        default stays with sample moves plus the strategy's own plays,
        which is what keeps law checking tractable."""
        hidden = _fully_hidden(self.strat, bounds)
        surf = self.surface()
        if deep:
            return is_subgame(hidden.game, surf, bounds, limit)
        ha, sa = hidden.game.arena, surf.arena
        for m in ha.samples:
            if not sa.contains(m):
                return False, f"move {m} falls outside the surface"
            if ha.label(m) != sa.label(m):
                return False, f"label of {m} differs from the surface"
        for s in plays(hidden, bounds):
            if len(s) and not surf.pos(s):
                return False, f"play leaves the surface: {[str(m) for m in s.moves()]}"
        return True, "ok"

    def __repr__(self):
        return f"Morphism({self.dom.name} -> {self.cod.name}, {self.name})"


def _fully_hidden(sig: Strategy, bounds) -> Strategy:
    base = getattr(sig, "hide_base", None)
    if base is not None:
        return hide_strategy(base, OMEGA, bounds)
    return hide_strategy(sig, OMEGA, bounds)


# ---------------------------------------------------------------------------
# The structure maps


def identity(a: DynamicGame) -> Morphism:
    return Morphism(a, a, dereliction(a), f"id[{a.name}]")


def terminal_morphism(a: DynamicGame) -> Morphism:
    return Morphism(a, terminal_game(), terminal_strat(a))


def numeral_morphism(n: int, ctx: DynamicGame = None) -> Morphism:
    from .strategies import nat_game
    a = ctx if ctx is not None else terminal_game()
    return Morphism(a, nat_game(), numeral(n, ctx))


def compose_m(f: Morphism, g: Morphism, name=None) -> Morphism:
    """Concatenate through a promoted first leg; no hiding happens here."""
    if f.cod.name != g.dom.name:
        raise ValueError(f"cannot compose {f!r} with {g!r}")
    strat = concat_strat(promotion_strat(f.strat), g.strat,
                         name or f"({f.name} ; {g.name})")
    return Morphism(f.dom, g.cod, strat, name or f"({f.name} ; {g.name})")


def pair_m(f: Morphism, g: Morphism, name=None) -> Morphism:
    if f.dom.name != g.dom.name:
        raise ValueError(f"pairing needs a shared domain: {f!r} vs {g!r}")
    strat = pairing_strat(f.strat, g.strat, name or f"<{f.name}, {g.name}>")
    return Morphism(f.dom, with_(f.cod, g.cod), strat,
                    name or f"<{f.name}, {g.name}>")


def proj_m(a: DynamicGame, b: DynamicGame, which: int) -> Morphism:
    return Morphism(with_(a, b), a if which == 1 else b,
                    projection_strat(a, b, which))


def product_m(f: Morphism, g: Morphism, name=None) -> Morphism:
    """f x g on a product domain, componentwise through the projections."""
    p1 = proj_m(f.dom, g.dom, 1)
    p2 = proj_m(f.dom, g.dom, 2)
    return pair_m(compose_m(p1, f), compose_m(p2, g),
                  name or f"({f.name} x {g.name})")


def curry_m(f: Morphism, name=None) -> Morphism:
    """Reads a product-domain morphism as one into the function game."""
    parts = getattr(f.dom, "with_parts", None)
    if parts is None:
        raise ValueError(f"currying needs a product domain, got {f.dom.name}")
    a, b = parts
    strat = curry(f.strat, name or f"cur({f.name})")
    return Morphism(a, lollipop(bang(b), f.cod), strat,
                    name or f"cur({f.name})")


def ev_m(b: DynamicGame, c: DynamicGame) -> Morphism:
    fn = lollipop(bang(b), c)
    return Morphism(with_(fn, b), c, ev_strat(b, c))


# ---------------------------------------------------------------------------
# Evaluation


def evaluate_once(f: Morphism) -> Morphism:
    """Hide one degree of internality; domain and codomain are untouched.

    Hiding a hidden strategy one step deeper equals hiding the original
    one level further down, so repeated evaluation stays a single-level
    preimage search instead of a tower of them."""
    if f.is_value():
        return f
    base = getattr(f.strat, "hide_base", None)
    if base is not None:
        nxt = hide_strategy(base, f.strat.hide_depth + 1)
    else:
        nxt = hide_strategy(f.strat, 1)
    return Morphism(f.dom, f.cod, nxt, f"E({f.name})")


@dataclass
class EvalOutcome:
    morphism: Morphism
    steps: int
    diverged: bool = False

    def __iter__(self):
        return iter((self.morphism, self.steps))


def evaluate_to_value(f: Morphism, fuel: int = None) -> EvalOutcome:
    """Iterate single-step hiding until no internal moves remain.

    Every morphism here has a finite depth bound, so the iteration
    terminates within mu steps; divergence can only be reported when the
    caller supplies less fuel than that.
    """
    if fuel is None:
        fuel = f.mu
    steps = 0
    cur = f
    while not cur.is_value():
        if steps >= fuel:
            return EvalOutcome(cur, steps, diverged=True)
        cur = evaluate_once(cur)
        steps += 1
    return EvalOutcome(cur, steps)


def ext_equiv(f: Morphism, g: Morphism, bounds=LAW_BOUNDS,
              fuel: int = None) -> EquivVerdict:
    """Equality up to evaluation: compare the values both sides reach."""
    rf = evaluate_to_value(f, fuel)
    rg = evaluate_to_value(g, fuel)
    if rf.diverged and rg.diverged:
        return EquivVerdict("Inconclusive", None, None,
                            "both sides still have internal moves at the fuel bound")
    if rf.diverged or rg.diverged:
        side = f.name if rf.diverged else g.name
        return EquivVerdict("Distinguished", None, side,
                            "one side reaches a value and the other does not")
    return strat_equiv(rf.morphism.strat, rg.morphism.strat, bounds)


# ---------------------------------------------------------------------------
# The law suite


@dataclass
class BoCReport:
    """One replayable law check: which law, on whom, and what was seen."""

    axiom: str
    ok: bool
    subject: str
    checks: list = field(default_factory=list)

    def note(self, check: str, ok: bool, detail: str = ""):
        self.checks.append({"check": check, "ok": bool(ok), "detail": detail})
        self.ok = self.ok and bool(ok)

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "ok": self.ok,
                "subject": self.subject, "checks": list(self.checks)}


def _play_set(sig: Strategy, bounds) -> set:
    return {s.entries for s in plays(sig, bounds)}


def _verdict_note(rep: BoCReport, check: str, v: EquivVerdict, want="Equal"):
    detail = v.reason or ""
    if v.position is not None:
        detail = (detail + " @ " +
                  " ".join(str(m) for m in v.position.moves())).strip()
    rep.note(check, v.tag == want, f"{v.tag}: {detail}" if v.tag != want else "")


def _check_subject_reduction(f: Morphism, g: Morphism, bounds) -> BoCReport:
    fg = compose_m(f, g)
    rep = BoCReport("subject-reduction", True, fg.name)
    e = evaluate_once(fg)
    rep.note("endpoints fixed", e.dom is fg.dom and e.cod is fg.cod)
    ok, reason = e.validate(bounds)
    rep.note("still a morphism of the same hom", ok, reason if not ok else "")
    return rep


def _check_composition(f: Morphism, g: Morphism, bounds) -> BoCReport:
    fg = compose_m(f, g)
    rep = BoCReport("composition", True, fg.name)
    witness = next((str(m) for m in fg.strat.game.arena.samples
                    if fg.strat.game.arena.label(m).degree == fg.mu), None)
    rep.note("composite is not yet evaluated", fg.mu > 0 and witness is not None,
             f"internal move {witness} at degree {fg.mu}")
    if f.is_value() and g.is_value():
        r = evaluate_to_value(fg, fg.mu)
        rep.note("values compose to a convergent morphism",
                 not r.diverged and r.steps <= fg.mu,
                 f"{r.steps} steps of {fg.mu}")
        rep.note("the value reached is again a value", r.morphism.is_value())
    return rep


def _check_identities(f: Morphism, bounds) -> BoCReport:
    ida = identity(f.dom)
    rep = BoCReport("identities", True, ida.name)
    e = evaluate_once(ida)
    rep.note("identity is a value", ida.is_value())
    rep.note("evaluation fixes it",
             _play_set(e.strat, bounds) == _play_set(ida.strat, bounds))
    return rep


def _check_two_cells(f: Morphism, g: Morphism, h: Morphism, bounds) -> BoCReport:
    a = compose_m(compose_m(f, g), h)
    b = compose_m(f, compose_m(g, h))
    c = compose_m(identity(f.dom), a)
    rep = BoCReport("two-cells", True, f"{a.name} ~ {b.name} ~ {c.name}")
    v = evaluate_to_value(a).morphism
    _verdict_note(rep, "reflexive on values", ext_equiv(v, v, bounds))
    ab, ba = ext_equiv(a, b, bounds), ext_equiv(b, a, bounds)
    rep.note("symmetric", ab.tag == ba.tag, f"{ab.tag} vs {ba.tag}")
    bc, ac = ext_equiv(b, c, bounds), ext_equiv(a, c, bounds)
    trans_ok = not (ab.tag == "Equal" and bc.tag == "Equal") or ac.tag == "Equal"
    rep.note("transitive on the sample", trans_ok,
             f"ab={ab.tag} bc={bc.tag} ac={ac.tag}")
    return rep


def _check_associativity(f: Morphism, g: Morphism, h: Morphism, bounds) -> BoCReport:
    a = compose_m(compose_m(f, g), h)
    b = compose_m(f, compose_m(g, h))
    rep = BoCReport("associativity", True, f"{a.name} ~ {b.name}")
    _verdict_note(rep, "both orders evaluate alike", ext_equiv(a, b, bounds))
    return rep


def _check_unit(f: Morphism, bounds) -> BoCReport:
    rep = BoCReport("unit", True, f.name)
    _verdict_note(rep, "left unit",
                  ext_equiv(compose_m(identity(f.dom), f), f, bounds))
    _verdict_note(rep, "right unit",
                  ext_equiv(compose_m(f, identity(f.cod)), f, bounds))
    return rep


def _check_product(f: Morphism, g: Morphism, bounds) -> BoCReport:
    alpha, beta = f, compose_m(f, g)
    p = pair_m(alpha, beta)
    rep = BoCReport("product", True, p.name)
    pi1 = proj_m(alpha.cod, beta.cod, 1)
    pi2 = proj_m(alpha.cod, beta.cod, 2)
    _verdict_note(rep, "first projection of a pair",
                  ext_equiv(compose_m(p, pi1), alpha, bounds))
    _verdict_note(rep, "second projection of a pair",
                  ext_equiv(compose_m(p, pi2), beta, bounds))
    repack = pair_m(compose_m(p, pi1), compose_m(p, pi2))
    _verdict_note(rep, "surjective pairing", ext_equiv(repack, p, bounds))
    return rep


def _check_exponential(f: Morphism, g: Morphism, bounds) -> BoCReport:
    a, b, c = f.dom, f.cod, g.cod
    mu_m = compose_m(proj_m(a, b, 1), compose_m(f, g))
    lam = curry_m(mu_m)
    rep = BoCReport("exponential", True, lam.name)
    spread = pair_m(compose_m(proj_m(a, b, 1), lam),
                    compose_m(proj_m(a, b, 2), identity(b)))
    _verdict_note(rep, "beta: currying then applying",
                  ext_equiv(compose_m(spread, ev_m(b, c)), mu_m, bounds))
    nu = lam
    spread2 = pair_m(compose_m(proj_m(a, b, 1), nu),
                     compose_m(proj_m(a, b, 2), identity(b)))
    eta = curry_m(compose_m(spread2, ev_m(b, c)))
    _verdict_note(rep, "eta: applying then currying", ext_equiv(eta, nu, bounds))
    return rep


def check_ccboc_laws(triples, bounds=LAW_BOUNDS, laws=None) -> list:
    """Run the axioms and the cartesian-closed laws over sampled triples.

    Each triple is (f, g, h) with matching endpoints.  Laws that need a
    product or an exponential build them from the triple's codomains."""
    all_laws = ("subject-reduction", "composition", "identities", "two-cells",
                "associativity", "unit", "product", "exponential")
    wanted = tuple(laws) if laws is not None else all_laws
    out = []
    for f, g, h in triples:
        if "subject-reduction" in wanted:
            out.append(_check_subject_reduction(f, g, bounds))
        if "composition" in wanted:
            out.append(_check_composition(f, g, bounds))
        if "identities" in wanted:
            out.append(_check_identities(f, bounds))
        if "two-cells" in wanted:
            out.append(_check_two_cells(f, g, h, bounds))
        if "associativity" in wanted:
            out.append(_check_associativity(f, g, h, bounds))
        if "unit" in wanted:
            out.append(_check_unit(f, bounds))
        if "product" in wanted:
            out.append(_check_product(f, g, bounds))
        if "exponential" in wanted:
            out.append(_check_exponential(f, g, bounds))
    return out


def sample_triples(seed: int, count: int):
    """Deterministic composable triples over the terminal and number games."""
    import random

    from .strategies import nat_game, num_fun

    rng = random.Random(seed)
    n = nat_game()
    t = terminal_game()

    def arrow_nn(tag):
        k = rng.randrange(4)
        kind = rng.randrange(4)
        if kind == 0:
            return Morphism(n, n, num_fun(lambda x, k=k: x + k, f"add{k}.{tag}"))
        if kind == 1:
            return Morphism(n, n, num_fun(lambda x, k=k: (x * (k + 1)) % 9,
                                          f"mul{k + 1}.{tag}"))
        if kind == 2:
            return Morphism(n, n, num_fun(lambda x, k=k: max(x - k, 0),
                                          f"sub{k}.{tag}"))
        return identity(n)

    out = []
    for i in range(count):
        shape = rng.randrange(3)
        if shape == 0:
            f = numeral_morphism(rng.randrange(5))
            g, h = arrow_nn(f"g{i}"), arrow_nn(f"h{i}")
        elif shape == 1:
            f, g, h = arrow_nn(f"f{i}"), arrow_nn(f"g{i}"), arrow_nn(f"h{i}")
        else:
            f = compose_m(numeral_morphism(rng.randrange(5)), arrow_nn(f"p{i}"))
            g, h = arrow_nn(f"g{i}"), arrow_nn(f"h{i}")
        out.append((f, g, h))
    return out
