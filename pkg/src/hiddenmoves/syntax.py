"""A typed functional language with case families and execution counters.

Terms are simply typed over a natural number base type.  case carries a
countably infinite branch family, represented finitarily as numeric
overrides plus a default schema: the schema body mentions the branch
index through affine numeral expressions (SymNum, absolute in the
index) and through symbolic iterated application (IterApp).  Typing
assigns each node an execution number (applications count Max+1); the
operational step normalizes every application whose counter reached 1,
simultaneously, so counters drop by one per step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


class TermError(Exception):
    pass


# ---------------------------------------------------------------------------
# Types


class Ty:
    pass


@dataclass(frozen=True)
class NatTy(Ty):
    def __repr__(self):
        return "N"


@dataclass(frozen=True)
class ArrowTy(Ty):
    dom: Ty
    cod: Ty

    def __repr__(self):
        d = f"({self.dom!r})" if isinstance(self.dom, ArrowTy) else f"{self.dom!r}"
        return f"{d} => {self.cod!r}"


NAT = NatTy()


def arrow(*ts: Ty) -> Ty:
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = ArrowTy(t, out)
    return out


def flatten_ty(ty: Ty):
    """Argument types of A1 => ... => Ak => N, in order."""
    args = []
    while isinstance(ty, ArrowTy):
        args.append(ty.dom)
        ty = ty.cod
    return args


# ---------------------------------------------------------------------------
# Raw terms


class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Num(Term):
    value: int


@dataclass(frozen=True)
class SymNum(Term):
    """coef * var + const over a branch index, absolute in the index.

    coef >= 1; const may be negative as long as every index the family
    reaches keeps the value nonnegative.
    """

    coef: int
    var: str
    const: int


def symnum(coef, var, const) -> Term:
    if coef == 0:
        if const < 0:
            raise TermError(f"negative numeral {const}")
        return Num(const)
    return SymNum(coef, var, const)


@dataclass(frozen=True)
class Lam(Term):
    var: str
    ty: Ty
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class IterApp(Term):
    """fn applied count-fold to arg, then any post families applied in
    order by case; normalized once count is concrete."""

    fn: Term
    count: Term  # Num or SymNum
    arg: Term
    post: tuple = ()  # Family chain over the numeric result


@dataclass(frozen=True)
class Family:
    """Branch assignment n -> overrides[n], else body with the binder set
    to n (valid for n >= offset)."""

    overrides: tuple  # sorted ((n, Term), ...)
    binder: str
    offset: int
    body: Term

    def lookup(self, n: int) -> Optional[Term]:
        for k, t in self.overrides:
            if k == n:
                return t
        return None


@dataclass(frozen=True)
class Case(Term):
    scrutinee: Term
    family: Family


def family(overrides, binder, offset, body) -> Family:
    items = sorted(dict(overrides).items())
    for k, _ in items:
        if k < 0:
            raise TermError(f"negative branch index {k}")
    for n in range(offset):
        if not any(k == n for k, _ in items):
            raise TermError(f"branch {n} is below the default and not overridden")
    return Family(tuple(items), binder, offset, body)


# ---------------------------------------------------------------------------
# Variables, substitution, alpha


def _family_free_vars(f: Family) -> set:
    out = set()
    for _, b in f.overrides:
        out |= free_vars(b)
    out |= free_vars(f.body) - {f.binder}
    return out


def free_vars(t) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Num):
        return set()
    if isinstance(t, SymNum):
        return {t.var}
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, IterApp):
        out = free_vars(t.fn) | free_vars(t.count) | free_vars(t.arg)
        for p in t.post:
            out |= _family_free_vars(p)
        return out
    if isinstance(t, Case):
        return free_vars(t.scrutinee) | _family_free_vars(t.family)
    raise TypeError(t)


_fresh_counter = [0]


def fresh(base: str, avoid: set) -> str:
    base = base.rstrip("0123456789'") or "v"
    if base not in avoid:
        return base
    while True:
        _fresh_counter[0] += 1
        cand = f"{base}{_fresh_counter[0]}"
        if cand not in avoid:
            return cand


def subst(t, x: str, repl):
    """Capture-free substitution; binders are renamed on collision.  Index
    occurrences (SymNum) only accept numeral schemas."""
    if isinstance(t, Var):
        return repl if t.name == x else t
    if isinstance(t, Num):
        return t
    if isinstance(t, SymNum):
        if t.var != x:
            return t
        if isinstance(repl, Num):
            v = t.coef * repl.value + t.const
            if v < 0:
                raise TermError(f"branch schema hit negative value {v}")
            return Num(v)
        if isinstance(repl, SymNum):
            return symnum(t.coef * repl.coef, repl.var, t.coef * repl.const + t.const)
        raise TermError(f"index {x} substituted by a non-numeral {repl}")
    if isinstance(t, Lam):
        if t.var == x:
            return t
        if t.var in free_vars(repl):
            nv = fresh(t.var, free_vars(repl) | free_vars(t.body) | {x})
            body = subst(t.body, t.var, Var(nv))
            return Lam(nv, t.ty, subst(body, x, repl))
        return Lam(t.var, t.ty, subst(t.body, x, repl))
    if isinstance(t, App):
        return App(subst(t.fn, x, repl), subst(t.arg, x, repl))
    if isinstance(t, IterApp):
        return IterApp(subst(t.fn, x, repl), subst(t.count, x, repl),
                       subst(t.arg, x, repl),
                       tuple(_subst_family(p, x, repl) for p in t.post))
    if isinstance(t, Case):
        return Case(subst(t.scrutinee, x, repl), _subst_family(t.family, x, repl))
    raise TypeError(t)


def _subst_family(f: Family, x: str, repl) -> Family:
    ovs = tuple((k, subst(b, x, repl)) for k, b in f.overrides)
    if f.binder == x:
        return Family(ovs, f.binder, f.offset, f.body)
    if f.binder in free_vars(repl):
        nb = fresh(f.binder, free_vars(repl) | free_vars(f.body) | {x})
        body = subst(f.body, f.binder, symnum(1, nb, 0))
        return Family(ovs, nb, f.offset, subst(body, x, repl))
    return Family(ovs, f.binder, f.offset, subst(f.body, x, repl))


def instantiate(f: Family, n: int):
    """The n-th branch, uninstantiated schemas resolved by substitution."""
    hit = f.lookup(n)
    if hit is not None:
        return hit
    if n < f.offset:
        raise TermError(f"branch {n} missing below default offset {f.offset}")
    return subst(f.body, f.binder, Num(n))


def alpha_eq(s, t, env=()) -> bool:
    def look(x, side):
        for a, b in reversed(env):
            if (a if side == 0 else b) == x:
                return (b if side == 0 else a)
        return x

    if isinstance(s, Var) and isinstance(t, Var):
        return look(s.name, 0) == t.name and look(t.name, 1) == s.name
    if isinstance(s, Num) and isinstance(t, Num):
        return s.value == t.value
    if isinstance(s, SymNum) and isinstance(t, SymNum):
        return (s.coef, s.const) == (t.coef, t.const) and \
            look(s.var, 0) == t.var and look(t.var, 1) == s.var
    if isinstance(s, Lam) and isinstance(t, Lam):
        return s.ty == t.ty and alpha_eq(s.body, t.body, env + ((s.var, t.var),))
    if isinstance(s, App) and isinstance(t, App):
        return alpha_eq(s.fn, t.fn, env) and alpha_eq(s.arg, t.arg, env)
    if isinstance(s, IterApp) and isinstance(t, IterApp):
        if len(s.post) != len(t.post):
            return False
        return (alpha_eq(s.fn, t.fn, env) and alpha_eq(s.count, t.count, env)
                and alpha_eq(s.arg, t.arg, env)
                and all(_alpha_family(a, b, env) for a, b in zip(s.post, t.post)))
    if isinstance(s, Case) and isinstance(t, Case):
        return alpha_eq(s.scrutinee, t.scrutinee, env) and \
            _alpha_family(s.family, t.family, env)
    return False


def _alpha_family(fs: Family, ft: Family, env) -> bool:
    if [k for k, _ in fs.overrides] != [k for k, _ in ft.overrides]:
        return False
    if fs.offset != ft.offset:
        return False
    for (_, a), (_, b) in zip(fs.overrides, ft.overrides):
        if not alpha_eq(a, b, env):
            return False
    return alpha_eq(fs.body, ft.body, env + ((fs.binder, ft.binder),))


# ---------------------------------------------------------------------------
# Atomic values


def eta_var(x: str, ty: Ty) -> Term:
    """The value of a variable: eta-expand and wrap the spine in a case."""
    args = flatten_ty(ty)
    avoid = {x}
    names = []
    for i, a in enumerate(args):
        names.append(fresh(f"x{i + 1}", avoid))
        avoid.add(names[-1])
    spine: Term = Var(x)
    for nm, a in zip(names, args):
        spine = App(spine, eta_var(nm, a))
    y = fresh("y", avoid)
    out: Term = Case(spine, family({}, y, 0, symnum(1, y, 0)))
    for nm, a in reversed(list(zip(names, args))):
        out = Lam(nm, a, out)
    return out


def succ_term() -> Term:
    return Lam("x", NAT, Case(Var("x"), family({}, "y", 0, symnum(1, "y", 1))))


def pred_term() -> Term:
    fam = family({0: Num(0)}, "y", 1, symnum(1, "y", -1))
    return Lam("x", NAT, Case(Var("x"), fam))


def cond_term() -> Term:
    # branch 0 returns the first argument; every positive branch the second
    fam = family({0: eta_var("x", NAT)}, "w", 1, eta_var("y", NAT))
    return Lam("x", NAT, Lam("y", NAT, Lam("z", NAT, Case(Var("z"), fam))))


def itr_term(a: Ty) -> Term:
    fam = family({}, "z", 0,
                 IterApp(eta_var("f", ArrowTy(a, a)), symnum(1, "z", 0), eta_var("x", a)))
    return Lam("f", ArrowTy(a, a), Lam("x", a, Lam("y", NAT, Case(Var("y"), fam))))


# ---------------------------------------------------------------------------
# Parallel reduction and normal forms

# A case whose scrutinee is an affine schema over this family's own index
# is folded into the family: finitely many indices hit the inner
# overrides, the rest compose with the inner default.


def _absorb(f: Family) -> Family:
    b = f.body
    if not (isinstance(b, Case) and isinstance(b.scrutinee, SymNum)
            and b.scrutinee.var == f.binder):
        return f
    a, c = b.scrutinee.coef, b.scrutinee.const
    q = b.family
    new = dict(f.overrides)
    for m, t in q.overrides:
        if m >= c and (m - c) % a == 0:
            n = (m - c) // a
            if n >= f.offset and n not in new:
                new[n] = t
    k = f.offset
    while a * k + c < q.offset:
        if k not in new:
            raise TermError(f"branch {k} reaches below the inner default")
        k += 1
    body = subst(q.body, q.binder, symnum(a, f.binder, c))
    return family(new, f.binder, k, body)


def _prune(f: Family) -> Family:
    ovs = []
    off = f.offset
    for n, t in f.overrides:
        if n >= off:
            try:
                inst = subst(f.body, f.binder, Num(n))
            except TermError:
                inst = None
            if inst is not None and alpha_eq(t, inst):
                continue
        ovs.append((n, t))
    f2 = Family(tuple(ovs), f.binder, off, f.body)
    # pull the default downward over overrides it already explains
    changed = True
    while changed and f2.offset > 0:
        changed = False
        n = f2.offset - 1
        hit = f2.lookup(n)
        if hit is None:
            break
        inst = None
        try:
            inst = subst(f2.body, f2.binder, Num(n))
        except TermError:
            pass
        if inst is not None and alpha_eq(hit, inst):
            f2 = Family(tuple(kv for kv in f2.overrides if kv[0] != n),
                        f2.binder, n, f2.body)
            changed = True
    return f2


def _step_family(f: Family) -> Family:
    ovs = {k: parallel_step(t) for k, t in f.overrides}
    f2 = family(ovs, f.binder, f.offset, parallel_step(f.body))
    return _prune(_absorb(f2))


def _unfold_iter(fn, n: int, arg, post=()):
    out = arg
    for _ in range(n):
        out = App(fn, out)
    for p in post:
        out = Case(out, p)
    return out


def _compose_case(scr: Case, fam: Family) -> Case:
    """case(case(M)[P])[Q] becomes case(M)[x -> case(P_x)[Q]]."""
    inner = scr.family
    avoid = free_vars(scr) | {v for _, b in fam.overrides for v in free_vars(b)}
    avoid |= free_vars(fam.body) | {fam.binder}
    nb = fresh(inner.binder, avoid)
    ovs = {k: Case(b, fam) for k, b in inner.overrides}
    body = Case(subst(inner.body, inner.binder, symnum(1, nb, 0)), fam)
    return Case(scr.scrutinee, family(ovs, nb, inner.offset, body))


def parallel_step(t):
    """Contract every redex once, bottom-up; schemas reduce symbolically
    with the branch index as an opaque numeral."""
    if isinstance(t, (Var, Num, SymNum)):
        return t
    if isinstance(t, Lam):
        return Lam(t.var, t.ty, parallel_step(t.body))
    if isinstance(t, App):
        fn, arg = parallel_step(t.fn), parallel_step(t.arg)
        if isinstance(fn, Lam):
            return subst(fn.body, fn.var, arg)
        return App(fn, arg)
    if isinstance(t, IterApp):
        fn, cnt, arg = parallel_step(t.fn), t.count, parallel_step(t.arg)
        post = tuple(_step_family(p) for p in t.post)
        if isinstance(cnt, Num):
            return _unfold_iter(fn, cnt.value, arg, post)
        return IterApp(fn, cnt, arg, post)
    if isinstance(t, Case):
        scr = parallel_step(t.scrutinee)
        fam = _step_family(t.family)
        if isinstance(scr, Num):
            return instantiate(fam, scr.value)
        if isinstance(scr, Case):
            return _compose_case(scr, fam)
        if isinstance(scr, IterApp):
            return IterApp(scr.fn, scr.count, scr.arg, scr.post + (fam,))
        return Case(scr, fam)
    raise TypeError(t)


def redexes(t):
    """Paths of all contractible positions, root first."""
    out = []

    def walk(t, path):
        if isinstance(t, App):
            if isinstance(t.fn, Lam):
                out.append(path)
            walk(t.fn, path + (0,))
            walk(t.arg, path + (1,))
        elif isinstance(t, Lam):
            walk(t.body, path + (0,))
        elif isinstance(t, IterApp):
            if isinstance(t.count, Num):
                out.append(path)
            walk(t.fn, path + (0,))
            walk(t.arg, path + (2,))
        elif isinstance(t, Case):
            if isinstance(t.scrutinee, (Num, Case, IterApp)):
                out.append(path)
            walk(t.scrutinee, path + (0,))
            for k, b in t.family.overrides:
                walk(b, path + (("o", k),))
            walk(t.family.body, path + ("d",))

    walk(t, ())
    return out


def step_beta_theta(t, path=()):
    """Contract the single redex at path."""
    if path:
        sel, rest = path[0], path[1:]
        if isinstance(t, App):
            if sel == 0:
                return App(step_beta_theta(t.fn, rest), t.arg)
            return App(t.fn, step_beta_theta(t.arg, rest))
        if isinstance(t, Lam):
            return Lam(t.var, t.ty, step_beta_theta(t.body, rest))
        if isinstance(t, IterApp):
            if sel == 0:
                return IterApp(step_beta_theta(t.fn, rest), t.count, t.arg)
            return IterApp(t.fn, t.count, step_beta_theta(t.arg, rest))
        if isinstance(t, Case):
            f = t.family
            if sel == 0:
                return Case(step_beta_theta(t.scrutinee, rest), f)
            if sel == "d":
                return Case(t.scrutinee,
                            Family(f.overrides, f.binder, f.offset,
                                   step_beta_theta(f.body, rest)))
            _, k = sel
            ovs = tuple((m, step_beta_theta(b, rest) if m == k else b)
                        for m, b in f.overrides)
            return Case(t.scrutinee, Family(ovs, f.binder, f.offset, f.body))
        raise TermError(f"no subterm at {path}")
    if isinstance(t, App) and isinstance(t.fn, Lam):
        return subst(t.fn.body, t.fn.var, t.arg)
    if isinstance(t, Case) and isinstance(t.scrutinee, Num):
        return instantiate(t.family, t.scrutinee.value)
    if isinstance(t, Case) and isinstance(t.scrutinee, Case):
        return _compose_case(t.scrutinee, t.family)
    if isinstance(t, Case) and isinstance(t.scrutinee, IterApp):
        s = t.scrutinee
        return IterApp(s.fn, s.count, s.arg, s.post + (t.family,))
    if isinstance(t, IterApp) and isinstance(t.count, Num):
        return _unfold_iter(t.fn, t.count.value, t.arg, t.post)
    raise TermError(f"no redex at {path}")


def canonical(t):
    if isinstance(t, (Var, Num, SymNum)):
        return t
    if isinstance(t, Lam):
        return Lam(t.var, t.ty, canonical(t.body))
    if isinstance(t, App):
        return App(canonical(t.fn), canonical(t.arg))
    if isinstance(t, IterApp):
        return IterApp(canonical(t.fn), t.count, canonical(t.arg),
                       tuple(_canon_family(p) for p in t.post))
    if isinstance(t, Case):
        return Case(canonical(t.scrutinee), _canon_family(t.family))
    raise TypeError(t)


def _canon_family(f: Family) -> Family:
    f2 = family({k: canonical(b) for k, b in f.overrides},
                f.binder, f.offset, canonical(f.body))
    return _prune(f2)


def normal_form(t, fuel=1000):
    cur = canonical(t)
    for _ in range(fuel):
        nxt = canonical(parallel_step(cur))
        if alpha_eq(nxt, cur):
            return cur
        cur = nxt
    raise TermError("no normal form within fuel; normalization is expected to hold")


def family_value(f: Family, n: int):
    """The normalized n-th branch."""
    return normal_form(instantiate(f, n))


# ---------------------------------------------------------------------------
# Typing

VALUE_RULES = {"N", "C1", "L", "ITR"}
CONFIG_RULES = VALUE_RULES | {"A"}


@dataclass
class Typed:
    raw: Term
    ty: Ty
    exec: int
    rule: str
    kids: tuple
    ctx: tuple = ()

    @property
    def klass(self) -> str:
        rules = set()

        def walk(n):
            rules.add(n.rule)
            for k in n.kids:
                walk(k)

        walk(self)
        if rules <= VALUE_RULES:
            return "value"
        if rules <= CONFIG_RULES:
            return "configuration"
        return "general"


def _spine(t):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    return t, list(reversed(args))


def _check_family(ctx, f: Family, idx):
    kids = []
    for _, b in f.overrides:
        kids.append(_check(ctx, b, idx))
    kids.append(_check(ctx, f.body, idx | {f.binder}))
    for k in kids:
        if k.ty != NAT:
            raise TermError("case branches must produce numbers")
    return kids


def _check(ctx, t, idx=frozenset()) -> Typed:
    if isinstance(t, Num):
        if t.value < 0:
            raise TermError("negative numeral")
        return Typed(t, NAT, 0, "N", ())
    if isinstance(t, SymNum):
        if t.var not in idx:
            raise TermError(f"index {t.var} used outside its branch schema")
        return Typed(t, NAT, 0, "N", ())
    if isinstance(t, Var):
        raise TermError(
            f"bare variable {t.name} is not a term; use its value form @{t.name}")
    if isinstance(t, Lam):
        if any(x == t.var for x, _ in ctx):
            inner = tuple((x, a) for x, a in ctx if x != t.var) + ((t.var, t.ty),)
        else:
            inner = ctx + ((t.var, t.ty),)
        body = _check(inner, t.body, idx)
        return Typed(t, ArrowTy(t.ty, body.ty), body.exec, "L", (body,))
    if isinstance(t, App):
        head, args = _spine(t)
        if isinstance(head, Var):
            raise TermError(
                f"variable {head.name} may only head a case scrutinee")
        fn = _check(ctx, t.fn, idx)
        arg = _check(ctx, t.arg, idx)
        if not isinstance(fn.ty, ArrowTy):
            raise TermError(f"applying a non-function of type {fn.ty!r}")
        if fn.ty.dom != arg.ty:
            raise TermError(f"argument type {arg.ty!r} does not match {fn.ty.dom!r}")
        return Typed(t, fn.ty.cod, max(fn.exec, arg.exec) + 1, "A", (fn, arg))
    if isinstance(t, IterApp):
        fn = _check(ctx, t.fn, idx)
        cnt = _check(ctx, t.count, idx)
        arg = _check(ctx, t.arg, idx)
        if cnt.ty != NAT:
            raise TermError("iteration count must be a number")
        if not isinstance(fn.ty, ArrowTy) or fn.ty.dom != fn.ty.cod:
            raise TermError("iterated function must have type A => A")
        if arg.ty != fn.ty.dom:
            raise TermError("iterated argument type mismatch")
        kids = [fn, cnt, arg]
        if t.post and arg.ty != NAT:
            raise TermError("post families need a numeric iteration result")
        for p in t.post:
            kids.extend(_check_family(ctx, p, idx))
        return Typed(t, NAT if t.post else arg.ty, 0, "ITR", tuple(kids))
    if isinstance(t, Case):
        head, args = _spine(t.scrutinee)
        if isinstance(head, Var):
            ty = None
            for x, a in ctx:
                if x == head.name:
                    ty = a
            if ty is None:
                raise TermError(f"unbound variable {head.name}")
            doms = flatten_ty(ty)
            if len(doms) != len(args):
                raise TermError(
                    f"case head {head.name} applied to {len(args)} of {len(doms)} arguments")
            akids = [_check(ctx, a2, idx) for a2 in args]
            for k, d in zip(akids, doms):
                if k.ty != d:
                    raise TermError("case head argument type mismatch")
                if k.exec != 0:
                    raise TermError("case head arguments must have counter 0")
            fkids = _check_family(ctx, t.family, idx)
            if all(k.exec == 0 for k in fkids):
                return Typed(t, NAT, 0, "C1", tuple(akids) + tuple(fkids))
            raise TermError("case branches over a variable head must have counter 0")
        scr = _check(ctx, t.scrutinee, idx)
        if scr.ty != NAT:
            raise TermError("case scrutinee must be a number")
        fkids = _check_family(ctx, t.family, idx)
        return Typed(t, NAT, 0, "C2", (scr,) + tuple(fkids))
    raise TypeError(t)


def typecheck(ctx, t) -> Typed:
    ctx = tuple(ctx)
    names = [x for x, _ in ctx]
    if len(set(names)) != len(names):
        raise TermError("context variables must be distinct")
    out = _check(ctx, t)
    out.ctx = ctx
    return out


# ---------------------------------------------------------------------------
# Operational step


def op_step(tt: Typed):
    """Normalize every application whose counter is 1, simultaneously.
    Returns (next typed term, stepped flag)."""
    if tt.klass == "general":
        raise TermError("operational steps apply to configurations only")
    if tt.exec == 0:
        return tt, False

    def walk(n: Typed):
        if n.rule == "A" and n.exec == 1:
            return normal_form(n.raw)
        if n.exec == 0:
            return n.raw
        if n.rule == "L":
            return Lam(n.raw.var, n.raw.ty, walk(n.kids[0]))
        if n.rule == "A":
            return App(walk(n.kids[0]), walk(n.kids[1]))
        raise TermError(f"unexpected counter {n.exec} at rule {n.rule}")

    out = typecheck(tt.ctx, walk(tt))
    if out.exec != tt.exec - 1:
        raise TermError(
            f"counter dropped {tt.exec} -> {out.exec}; expected a single decrement")
    return out, True


def run_ops(tt: Typed):
    """The full chain of operational steps down to the value."""
    chain = [tt]
    while chain[-1].exec > 0:
        nxt, stepped = op_step(chain[-1])
        if not stepped:
            break
        chain.append(nxt)
    return chain


# ---------------------------------------------------------------------------
# Concrete syntax


_KEYWORDS = {"case", "succ", "pred", "cond", "itr", "iter", "N"}


def _lex(text: str):
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("=>", i):
            toks.append(("ARROW2", "=>", i))
            i += 2
            continue
        if text.startswith("->", i):
            toks.append(("ARROW", "->", i))
            i += 2
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("NUM", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            w = text[i:j]
            toks.append((w.upper() if w in _KEYWORDS else "IDENT", w, i))
            i = j
            continue
        if ch in "\\()[],.:@+-*;":
            toks.append((ch, ch, i))
            i += 1
            continue
        raise TermError(f"unexpected character {ch!r} at {i}")
    toks.append(("EOF", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text, ctx):
        self.toks = _lex(text)
        self.pos = 0
        self.scope = {x: a for x, a in ctx}
        self.indices = []  # active default binders, innermost last

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        k, v, at = self.toks[self.pos]
        if kind is not None and k != kind:
            raise TermError(f"expected {kind} at position {at}, found {v!r}")
        self.pos += 1
        return v

    # types

    def type_atom(self):
        k, v, at = self.peek()
        if k == "N":
            self.take()
            return NAT
        if k == "(":
            self.take()
            t = self.type_()
            self.take(")")
            return t
        raise TermError(f"expected a type at position {at}")

    def type_(self):
        t = self.type_atom()
        if self.peek()[0] == "ARROW2":
            self.take()
            return ArrowTy(t, self.type_())
        return t

    # terms

    def term(self):
        if self.peek()[0] == "\\":
            self.take()
            binders = []
            while self.peek()[0] == "IDENT":
                x = self.take()
                self.take(":")
                binders.append((x, self.type_()))
            if not binders:
                raise TermError("lambda without binders")
            self.take(".")
            saved = dict(self.scope)
            shadowed = [x for x, _ in binders if x in self.indices]
            if shadowed:
                raise TermError(f"lambda binder {shadowed[0]} shadows a branch index")
            for x, a in binders:
                self.scope[x] = a
            body = self.term()
            self.scope = saved
            for x, a in reversed(binders):
                body = Lam(x, a, body)
            return body
        return self.appchain()

    def appchain(self):
        out = self.atom()
        while self.peek()[0] in ("NUM", "IDENT", "(", "@", "CASE", "SUCC",
                                 "PRED", "COND", "ITR", "ITER"):
            out = App(out, self.atom())
        return out

    def affine_tail(self, coef, var):
        k = self.peek()[0]
        if k == "+":
            self.take()
            return symnum(coef, var, self.take("NUM"))
        if k == "-":
            self.take()
            return symnum(coef, var, -self.take("NUM"))
        return symnum(coef, var, 0)

    def atom(self):
        k, v, at = self.peek()
        if k == "NUM":
            self.take()
            if self.peek()[0] == "*":
                self.take()
            else:
                return Num(v)
            var = self.take("IDENT")
            if var not in self.indices:
                raise TermError(f"schema variable {var} is not a branch index")
            return self.affine_tail(v, var)
        if k == "@":
            self.take()
            x = self.take("IDENT")
            if x not in self.scope:
                raise TermError(f"@{x} needs {x} in scope")
            return eta_var(x, self.scope[x])
        if k == "IDENT":
            self.take()
            if v in self.indices:
                return self.affine_tail(1, v)
            if v not in self.scope:
                raise TermError(f"unbound variable {v} at position {at}")
            return Var(v)
        if k == "(":
            self.take()
            t = self.term()
            self.take(")")
            return t
        if k == "SUCC":
            self.take()
            return succ_term()
        if k == "PRED":
            self.take()
            return pred_term()
        if k == "COND":
            self.take()
            return cond_term()
        if k == "ITR":
            self.take()
            self.take("@")
            return itr_term(self.type_atom())
        if k == "ITER":
            self.take()
            self.take("(")
            fn = self.term()
            self.take(";")
            cnt = self.term()
            self.take(";")
            arg = self.term()
            post = []
            while self.peek()[0] == ";":
                self.take()
                post.append(self.branches())
            self.take(")")
            if not isinstance(cnt, (Num, SymNum)):
                raise TermError("iteration count must be a numeral schema")
            return IterApp(fn, cnt, arg, tuple(post))
        if k == "CASE":
            self.take()
            self.take("(")
            scr = self.term()
            self.take(")")
            return Case(scr, self.branches())
        raise TermError(f"unexpected token {v!r} at position {at}")

    def branches(self) -> Family:
        self.take("[")
        overrides = {}
        default = None
        while True:
            tk, tv, _ = self.peek()
            if tk == "NUM":
                self.take()
                self.take("ARROW")
                overrides[tv] = self.term()
            elif tk == "IDENT":
                binder = self.take()
                off = 0
                if self.peek()[0] == "+":
                    self.take()
                    off = self.take("NUM")
                self.take("ARROW")
                if binder in self.indices or binder in self.scope:
                    raise TermError(f"branch index {binder} shadows a name in scope")
                self.indices.append(binder)
                body = self.term()
                self.indices.pop()
                if off:
                    # pattern binder+off names the absolute index
                    body = subst(body, binder, symnum(1, binder, -off))
                default = (binder, off, body)
            else:
                raise TermError("expected a branch")
            if self.peek()[0] == ",":
                self.take()
                continue
            break
        self.take("]")
        if default is None:
            raise TermError("case needs a default branch")
        b, off, body = default
        return family(overrides, b, off, body)


def parse(text: str, ctx=()) -> Term:
    p = _Parser(text, ctx)
    out = p.term()
    p.take("EOF")
    return out


def parse_type(text: str) -> Ty:
    p = _Parser(text, ())
    out = p.type_()
    p.take("EOF")
    return out


# ---------------------------------------------------------------------------
# Printing


def _eta_match(t) -> Optional[str]:
    """Recognize the value form of a variable, printed @x."""
    binders = []
    while isinstance(t, Lam):
        binders.append((t.var, t.ty))
        t = t.body
    if not isinstance(t, Case):
        return None
    f = t.family
    if f.overrides or f.offset != 0 or f.body != SymNum(1, f.binder, 0):
        return None
    head, args = _spine(t.scrutinee)
    if not isinstance(head, Var) or len(args) != len(binders):
        return None
    for (x, _), a in zip(binders, args):
        if _eta_match(a) != x:
            return None
    return head.name


def show_type(ty: Ty) -> str:
    if isinstance(ty, NatTy):
        return "N"
    d = show_type(ty.dom)
    if isinstance(ty.dom, ArrowTy):
        d = f"({d})"
    return f"{d} => {show_type(ty.cod)}"


def _show(t, prec=0) -> str:
    ev = _eta_match(t)
    if ev is not None:
        return f"@{ev}"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, SymNum):
        a, y, b = t.coef, t.var, t.const
        head = y if a == 1 else f"{a}*{y}"
        if b == 0:
            return head
        return f"{head}+{b}" if b > 0 else f"{head}-{-b}"
    if isinstance(t, Lam):
        body = _show(t.body, 0)
        s = f"\\{t.var}:{show_type(t.ty)}. {body}"
        return f"({s})" if prec > 0 else s
    if isinstance(t, App):
        s = f"{_show(t.fn, 1)} {_show(t.arg, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, IterApp):
        segs = [_show(t.fn), _show(t.count), _show(t.arg)]
        segs.extend(_show_family(p) for p in t.post)
        return f"iter({'; '.join(segs)})"
    if isinstance(t, Case):
        return f"case({_show(t.scrutinee)}){_show_family(t.family)}"
    raise TypeError(t)


def _show_family(f: Family) -> str:
    parts = [f"{k} -> {_show(b)}" for k, b in f.overrides]
    body = f.body if f.offset == 0 else subst(f.body, f.binder,
                                              symnum(1, f.binder, f.offset))
    pat = f.binder if f.offset == 0 else f"{f.binder}+{f.offset}"
    parts.append(f"{pat} -> {_show(body)}")
    return f"[{', '.join(parts)}]"


def show_term(t) -> str:
    return _show(t, 0)


# ---------------------------------------------------------------------------
# Common programs


def double_term() -> Term:
    return parse("itr@N (\\x:N. succ (succ @x)) 0")
