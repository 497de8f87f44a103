"""Interpretation of the typed language as games and strategies.

Types become normalized games, contexts become nested products, and a
typed term becomes a morphism out of its context game.  Application is
interpreted without hiding, so every application node contributes one
fresh internal degree; value forms (numerals, lambdas, case trees) are
evaluated away eagerly and denote strategies with no internal moves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .boc import (
    Morphism,
    compose_m,
    curry_m,
    ev_m,
    evaluate_to_value,
    numeral_morphism,
    pair_m,
    terminal_morphism,
)
from .games import DynamicGame, bang, lollipop, omega_power, terminal_game, with_
from .arena import JSeq
from .strategies import (
    Strategy,
    nat_game,
    omega_pairing_strat,
    probe_options,
    projection_path_strat,
    theta_strat,
)
from .syntax import (
    App,
    ArrowTy,
    Case,
    Family,
    IterApp,
    Lam,
    NatTy,
    Num,
    SymNum,
    TermError,
    Ty,
    Typed,
    Var,
    family_value,
    free_vars,
    fresh,
    show_term,
    subst,
)


@dataclass(frozen=True)
class SemType:
    """A type or context denotation; always a normalized game."""

    game: DynamicGame


_type_memo: dict = {}
_ctx_memo: dict = {}


def interp_type(ty: Ty) -> SemType:
    if ty in _type_memo:
        return _type_memo[ty]
    if isinstance(ty, NatTy):
        out = SemType(nat_game())
    elif isinstance(ty, ArrowTy):
        out = SemType(lollipop(bang(interp_type(ty.dom).game),
                               interp_type(ty.cod).game))
    else:
        raise TermError(f"unknown type {ty!r}")
    _type_memo[ty] = out
    return out


def interp_ctx(ctx) -> SemType:
    ctx = tuple(ctx)
    if ctx in _ctx_memo:
        return _ctx_memo[ctx]
    g = terminal_game()
    for _, ty in ctx:
        g = with_(g, interp_type(ty).game)
    out = SemType(g)
    _ctx_memo[ctx] = out
    return out


def _var_path(ctx, name):
    """Product sides from the context root down to the binding of name."""
    names = [x for x, _ in ctx]
    i = names.index(name)
    return ["L"] * (len(ctx) - 1 - i) + ["R"]


def interp_var(ctx, name: str) -> Morphism:
    ty = dict(ctx)[name]
    cg = interp_ctx(ctx).game
    ag = interp_type(ty).game
    return Morphism(cg, ag, projection_path_strat(cg, _var_path(ctx, name), ag),
                    name=f"var[{name}]")


def apply_sem(fun: Morphism, arg: Morphism, name=None) -> Morphism:
    """Application as pairing, promotion and concatenation; not hidden."""
    parts = getattr(fun.cod, "arrow_parts", None)
    if parts is None:
        raise TermError(f"applying a non-function denotation {fun.name}")
    a = parts[0].bang_part
    b = parts[1]
    return compose_m(pair_m(fun, arg), ev_m(a, b), name)


def _theta_morphism() -> Morphism:
    n = nat_game()
    return Morphism(with_(n, omega_power(n)), n, theta_strat())


def _numeral_value(ctx_game: DynamicGame, n: int) -> Morphism:
    raw = compose_m(terminal_morphism(ctx_game), numeral_morphism(n),
                    name=f"num[{n}]")
    return evaluate_to_value(raw).morphism


def _interp(ctx, t) -> Morphism:
    if isinstance(t, Num):
        return _numeral_value(interp_ctx(ctx).game, t.value)
    if isinstance(t, Var):
        return interp_var(ctx, t.name)
    if isinstance(t, Lam):
        v, body = t.var, t.body
        if any(x == v for x, _ in ctx):
            v2 = fresh(v, {x for x, _ in ctx} | free_vars(body))
            body = subst(body, v, Var(v2))
            v = v2
        inner = _interp(ctx + ((v, t.ty),), body)
        return curry_m(inner, name=f"lam[{v}]")
    if isinstance(t, App):
        return apply_sem(_interp(ctx, t.fn), _interp(ctx, t.arg),
                         name=show_term(t))
    if isinstance(t, Case):
        scrut = _interp(ctx, t.scrutinee)
        branches = _branches_morphism(ctx, t.family)
        composite = compose_m(pair_m(scrut, branches), _theta_morphism(),
                              name=show_term(t))
        return evaluate_to_value(composite).morphism
    if isinstance(t, IterApp):
        raise TermError("normalize iterator applications before interpreting")
    if isinstance(t, SymNum):
        raise TermError("branch schemas are interpreted per index")
    raise TermError(f"cannot interpret {t!r}")


def _branches_morphism(ctx, fam: Family) -> Morphism:
    cg = interp_ctx(ctx).game

    def branch(i: int) -> Strategy:
        m = _interp(ctx, family_value(fam, i))
        if not m.is_value():
            # replication components must be normalized; peeling the
            # branch first commutes with the outer evaluation
            m = evaluate_to_value(m).morphism
        return m.strat

    strat = omega_pairing_strat(branch, name="branches")
    return Morphism(cg, omega_power(nat_game()), strat, name="branches")


def interp_term(j: Typed) -> Morphism:
    """The denotation of a typechecked term over its context game."""
    return _interp(tuple(j.ctx), j.raw)


# ---------------------------------------------------------------------------
# Degree bookkeeping


def _inner_ctx(ctx, lam: Lam):
    if any(x == lam.var for x, _ in ctx):
        return tuple((x, a) for x, a in ctx if x != lam.var) + ((lam.var, lam.ty),)
    return ctx + ((lam.var, lam.ty),)


def degree_audit(m: Morphism, j: Typed) -> dict:
    """Compare internal depth bounds with execution counters, node by node.

    Every application node must sit at the internal degree given by its
    own counter, and the whole morphism's depth bound must equal the
    root counter."""
    nodes = []

    def walk(ctx, node: Typed, path):
        built = _interp(ctx, node.raw)
        if node.rule == "A":
            nodes.append({
                "path": path or "root",
                "exec": node.exec,
                "degree": built.mu,
                "ok": built.mu == node.exec,
            })
            walk(ctx, node.kids[0], path + "0")
            walk(ctx, node.kids[1], path + "1")
        elif node.rule == "L":
            walk(_inner_ctx(ctx, node.raw), node.kids[0], path + "0")
        return built

    built = walk(tuple(j.ctx), j, "")
    root = {"exec": j.exec, "degree": m.mu, "ok": m.mu == j.exec == built.mu}
    ok = root["ok"] and all(n["ok"] for n in nodes)
    return {"ok": ok, "root": root, "nodes": nodes}


# ---------------------------------------------------------------------------
# Interaction tables


@dataclass
class TraceRow:
    """One rendered move: which column it sits in, what was played, and
    the internal degree it will be hidden at (0 = stays visible)."""

    column: int
    value: object
    degree: int
    merged: bool = False

    def cell(self) -> str:
        v = str(self.value)
        return f"{v}@{self.degree}" if self.degree else v


@dataclass
class TraceTable:
    title: str
    columns: list
    rows: list = field(default_factory=list)

    def squashed(self):
        """(column, value, degree) triples; duplicate-free comparison key."""
        return [(r.column, str(r.value), r.degree) for r in self.rows]

    def render(self) -> str:
        width = max(6, *(len(str(c)) for c in self.columns)) + 2
        out = [self.title]
        out.append("".join(str(c).center(width) for c in self.columns))
        out.append("-" * (width * len(self.columns)))
        for r in self.rows:
            cells = [""] * len(self.columns)
            cells[r.column] = r.cell() + ("*" if r.merged else "")
            out.append("".join(c.center(width) for c in cells))
        return "\n".join(out)


def _strip_route(m):
    """The column identity of a move: its tag path with concatenation
    routing indices erased, so the two copies of one duplicated middle
    move land in the same column."""
    tags = []
    while m.tags:
        h = m.head()
        if isinstance(h, tuple) and h[0] == "s":
            tags.append(("s",))
        else:
            tags.append(h)
        m = m.pop()
    return tuple(tags)


def probe_play(sig: Strategy, script, bounds=None, fuel=400) -> JSeq:
    """Drive a strategy as the environment: open with the initial
    question, feed forced internal copies, and answer each external
    question with the next value from script."""
    from .games import DEFAULT_BOUNDS

    bounds = bounds or DEFAULT_BOUNDS
    g = sig.game
    s = JSeq()
    queue = list(script)
    for _ in range(fuel):
        if len(s) % 2 == 1:
            nxt = sig.next(s)
            if nxt is None:
                return s
            s = s.snoc(*nxt)
            continue
        forced = g.forced_o(s)
        if forced is not None:
            s = s.snoc(*forced)
            continue
        opts = probe_options(sig, s, bounds)
        if not opts:
            return s
        if len(s) == 0:
            s = s.snoc(*opts[0])
            continue
        if not queue:
            return s
        v = queue[0]
        best = None
        for m, p in opts:
            if g.arena.label(m).kind == "A" and m.base == v:
                if best is None or (p or 0) > (best[1] or 0):
                    best = (m, p)
        if best is None:
            return s
        queue.pop(0)
        s = s.snoc(*best)
    raise TermError("probe did not converge within fuel")


def interaction_table(sig: Strategy, script, title="", merge=True,
                      bounds=None, fuel=400) -> TraceTable:
    """The full interaction against a probing environment, internal
    moves kept; with merge, the two copies of each duplicated middle
    move collapse into a single row."""
    s = probe_play(sig, script, bounds=bounds, fuel=fuel)
    a = sig.game.arena
    cols, col_ix, rows = [], {}, []
    prev = None
    for m, _ in s.entries:
        key = _strip_route(m)
        deg = a.degree(m)
        if merge and prev == (key, m.base, deg) and deg > 0:
            rows[-1].merged = True
            prev = None
            continue
        if key not in col_ix:
            col_ix[key] = len(cols)
            cols.append(key)
        rows.append(TraceRow(col_ix[key], m.base, deg))
        prev = (key, m.base, deg)
    names = [_column_name(c, i) for i, c in enumerate(cols)]
    return TraceTable(title, names, rows)


def _column_name(key, i) -> str:
    parts = []
    for t in key:
        if t == "L":
            parts.append("L")
        elif t == "R":
            parts.append("R")
        elif isinstance(t, tuple) and t[0] == "b":
            parts.append(f"b{t[1]}")
        elif isinstance(t, tuple) and t[0] == "w":
            parts.append(f"w{t[1]}")
        else:
            parts.append(t[0] if isinstance(t, tuple) else str(t))
    return ".".join(parts) or f"c{i}"
