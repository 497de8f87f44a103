import pytest
from hypothesis import given, settings, strategies as st

from hiddenmoves.syntax import (
    NAT, ArrowTy, arrow, flatten_ty, parse_type, show_type,
    Var, Num, SymNum, Lam, App, IterApp, Case, family, symnum,
    parse, show_term, alpha_eq, free_vars, subst, instantiate, family_value,
    parallel_step, normal_form, redexes, step_beta_theta,
    typecheck, op_step, run_ops, TermError,
    eta_var, succ_term, pred_term, cond_term, itr_term, double_term,
)


def nf(t):
    return normal_form(t)


def tc(t, ctx=()):
    return typecheck(ctx, t)


XN = (("x", NAT),)


# ---------------------------------------------------------------------------
# types


def test_arrow_right_assoc():
    t = parse_type("N => N => N")
    assert t == ArrowTy(NAT, ArrowTy(NAT, NAT))
    assert flatten_ty(t) == [NAT, NAT]
    assert show_type(t) == "N => N => N"
    u = parse_type("(N => N) => N")
    assert flatten_ty(u) == [ArrowTy(NAT, NAT)]
    assert parse_type(show_type(u)) == u


# ---------------------------------------------------------------------------
# parsing and printing


@pytest.mark.parametrize("src,ctx", [
    ("\\x:N. succ (succ @x)", ()),
    ("case(x)[0 -> 4, y+1 -> 2*y+3]", XN),
    ("pred (succ 4)", ()),
    ("itr@N succ 0", ()),
    ("cond (succ @x) @x", XN),
    ("(\\x:N. @x) 5", ()),
    ("case(x)[0 -> 0, 3 -> 1, y -> y]", XN),
])
def test_round_trip(src, ctx):
    t = parse(src, ctx)
    assert alpha_eq(parse(show_term(t), ctx), t)


def test_successor_desugars_to_case():
    want = Lam("x", NAT, Case(Var("x"), family({}, "y", 0, symnum(1, "y", 1))))
    assert alpha_eq(parse("succ"), want)
    assert alpha_eq(succ_term(), want)


def test_eta_value_of_base_variable():
    assert alpha_eq(parse("@x", XN), Case(Var("x"), family({}, "y", 0, symnum(1, "y", 0))))


def test_eta_value_of_function_variable():
    t = eta_var("f", ArrowTy(NAT, NAT))
    assert isinstance(t, Lam)
    body = t.body
    assert isinstance(body, Case)
    assert tc(t, (("f", ArrowTy(NAT, NAT)),)).klass == "value"


def test_parse_rejects_unbound():
    with pytest.raises(TermError):
        parse("@x")
    with pytest.raises(TermError):
        parse("y")


def test_parse_rejects_index_shadowing():
    with pytest.raises(TermError):
        parse("case(x)[y -> (\\y:N. @y) y]", XN)


def test_offset_pattern_binds_predecessor():
    t = parse("case(x)[0 -> 0, y+1 -> y]", XN)
    f = t.family
    assert f.offset == 1
    assert instantiate(f, 0) == Num(0)
    assert instantiate(f, 4) == Num(3)
    assert alpha_eq(parse(show_term(t), XN), t)


# ---------------------------------------------------------------------------
# typing


def test_numeral_types_at_zero():
    t = tc(Num(7))
    assert t.ty == NAT and t.exec == 0 and t.klass == "value"


def test_case_over_variable_head_is_a_value():
    t = tc(parse("case(x)[y -> y+1]", XN), XN)
    assert t.rule == "C1" and t.exec == 0 and t.klass == "value"


def test_case_over_reducible_scrutinee_resets_counter():
    t = tc(parse("case(succ 3)[y -> y]"))
    assert t.rule == "C2" and t.exec == 0 and t.klass == "general"


def test_application_counter_is_max_plus_one():
    s = parse("(\\x:N. @x) ((\\x:N. @x) ((\\x:N. @x) 1))")
    assert tc(s).exec == 3
    v1 = parse("\\x:N y:N. @y")
    t = App(App(v1, Num(3)), App(App(v1, Num(0)), App(parse("\\x:N. @x"), Num(1))))
    assert tc(t).exec == 3


def test_lambda_preserves_counter():
    t = tc(parse("\\x:N. succ (succ @x)"))
    assert t.rule == "L" and t.exec == 2 and t.klass == "configuration"


def test_unique_types():
    for src, ctx in [("itr@N succ 0", ()), ("cond (succ @x) @x", XN)]:
        a, b = tc(parse(src, ctx), ctx), tc(parse(src, ctx), ctx)
        assert a.ty == b.ty and a.exec == b.exec


def test_weakening_admissible():
    t = parse("succ 3")
    a = tc(t)
    b = tc(t, (("z", NAT), ("w", ArrowTy(NAT, NAT))))
    assert a.ty == b.ty and a.exec == b.exec


def test_bare_variable_rejected():
    with pytest.raises(TermError):
        tc(Var("x"), XN)


def test_variable_headed_application_rejected_outside_case():
    with pytest.raises(TermError):
        tc(App(Var("f"), Num(1)), (("f", ArrowTy(NAT, NAT)),))


def test_case_head_arguments_must_be_still():
    f2 = (("f", ArrowTy(NAT, NAT)),)
    good = Case(App(Var("f"), Num(1)), family({}, "y", 0, symnum(1, "y", 0)))
    assert tc(good, f2).rule == "C1"
    bad = Case(App(Var("f"), parse("succ 1")), family({}, "y", 0, symnum(1, "y", 0)))
    with pytest.raises(TermError):
        tc(bad, f2)


def test_type_mismatch_rejected():
    with pytest.raises(TermError):
        tc(parse("(\\x:N => N. 0) 3"))


def test_branches_must_be_numbers():
    t = Case(Var("x"), family({}, "y", 0, parse("\\z:N. @z")))
    with pytest.raises(TermError):
        tc(t, XN)


# ---------------------------------------------------------------------------
# reduction


def test_beta():
    assert nf(parse("(\\x:N. @x) 5")) == Num(5)


def test_successor_chain():
    assert nf(parse("succ (succ (succ 0))")) == Num(3)


def test_predecessor():
    assert nf(parse("pred 0")) == Num(0)
    assert nf(parse("pred 7")) == Num(6)
    assert nf(parse("pred (succ 4)")) == Num(4)


def test_conditional_picks_branches():
    assert nf(parse("cond 3 8 0")) == Num(3)
    assert nf(parse("cond 3 8 5")) == Num(8)


def test_iterator():
    assert nf(parse("itr@N succ 2 4")) == Num(6)
    assert nf(parse("itr@N pred 9 3")) == Num(6)


def test_case_composition_folds_families():
    t = parse("case((\\x:N. succ @x) 4)[y -> 2*y]")
    assert nf(t) == Num(10)
    open_t = parse("case(succ @x)[y -> 2*y]", XN)
    got = nf(open_t)
    want = parse("case(x)[y -> 2*y+2]", XN)
    assert alpha_eq(got, want)


def test_composition_keeps_overrides_aligned():
    # pred after succ: override 0 becomes unreachable
    t = parse("pred (succ @x)", XN)
    assert alpha_eq(nf(t), parse("case(x)[y -> y]", XN))


def test_symbolic_branch_hits_inner_override():
    # scrutinee 2y lands on the inner override only at y = 0
    f = family({}, "y", 0, Case(symnum(2, "y", 0),
                                family({0: Num(9)}, "w", 1, symnum(1, "w", -1))))
    c = Case(Var("x"), f)
    got = nf(c)
    assert alpha_eq(got, parse("case(x)[0 -> 9, y+1 -> 2*y+1]", XN))


def test_normal_forms_are_values():
    for src, ctx in [("itr@N succ 0", ()), ("succ (succ 2)", ()),
                     ("cond (succ @x) @x", XN), ("(\\x:N. succ @x) 3", ()),
                     ("pred (succ @x)", XN)]:
        v = tc(nf(parse(src, ctx)), ctx)
        assert v.klass == "value" and v.exec == 0


def test_subject_reduction_single_steps():
    for src, ctx in [("(\\x:N. succ @x) 3", ()), ("itr@N succ 2 4", ()),
                     ("cond (succ @x) @x", XN), ("pred (succ (succ 1))", ())]:
        t = parse(src, ctx)
        ty = tc(t, ctx).ty
        seen = 0
        while True:
            rs = redexes(t)
            if not rs:
                break
            t = step_beta_theta(t, rs[0])
            assert tc(t, ctx).ty == ty
            seen += 1
            assert seen < 200
        assert seen > 0


def test_diamond_rejoins():
    for src, ctx in [("(\\x:N. succ @x) (pred 3)", ()),
                     ("cond (succ @x) (pred @x)", XN),
                     ("(\\x:N. succ (succ @x)) ((\\x:N. @x) 2)", ())]:
        t = parse(src, ctx)
        rs = redexes(t)
        assert len(rs) >= 2
        a = nf(step_beta_theta(t, rs[0]))
        b = nf(step_beta_theta(t, rs[-1]))
        assert alpha_eq(a, b)
        assert alpha_eq(a, nf(t))


def test_parallel_step_contracts_everywhere_at_once():
    t = parse("(\\x:N. @x) ((\\y:N. @y) 1)")
    one = parallel_step(t)
    # both betas fire in a single pass
    assert isinstance(one, Case) and isinstance(one.scrutinee, Case)
    assert one.scrutinee.scrutinee == Num(1)
    assert nf(t) == Num(1)


def test_substitution_is_capture_free():
    t = parse("\\y:N. case(x)[w -> w]", XN)
    r = subst(t, "x", Var("y"))
    assert isinstance(r, Lam) and r.var != "y"


# ---------------------------------------------------------------------------
# the doubling program


def test_double_normal_form_is_an_iterated_family():
    d = double_term()
    td = tc(d)
    assert td.ty == ArrowTy(NAT, NAT) and td.klass == "configuration"
    v = nf(d)
    assert tc(v).klass == "value"
    assert isinstance(v, Lam) and isinstance(v.body, Case)


def test_double_branches_hold_even_numbers():
    fam = nf(double_term()).body.family
    for n in range(33):
        assert family_value(fam, n) == Num(2 * n)


def test_double_applied():
    assert nf(parse("itr@N (\\x:N. succ (succ @x)) 0 7")) == Num(14)


# ---------------------------------------------------------------------------
# operational steps


def test_op_step_decrements_all_counters():
    v1 = parse("\\x:N y:N. @y")
    t = App(App(v1, Num(3)), App(App(v1, Num(0)), App(parse("\\x:N. @x"), Num(1))))
    chain = run_ops(tc(t))
    assert [c.exec for c in chain] == [3, 2, 1, 0]
    assert chain[-1].raw == Num(1)


def test_op_step_replaces_ready_applications_simultaneously():
    t = parse("(\\x:N. @x) ((\\x:N. @x) 1)")
    first, stepped = op_step(tc(t))
    assert stepped
    # the inner application was ready; the outer was not
    assert isinstance(first.raw, App) and first.raw.arg == Num(1)


def test_op_step_on_value_is_flagged_noop():
    v = tc(nf(parse("succ 1")))
    out, stepped = op_step(v)
    assert not stepped and out is v


def test_op_step_rejects_general_terms():
    g = tc(parse("case(succ 3)[y -> y]"))
    assert g.klass == "general"
    with pytest.raises(TermError):
        op_step(g)


def test_pipeline_chain_matches_hand_reduction():
    dv = nf(double_term())
    p1 = App(Lam("x", NAT, App(dv, App(succ_term(), eta_var("x", NAT)))), Num(5))
    chain = run_ops(tc(p1))
    assert len(chain) == 4 and [c.exec for c in chain] == [3, 2, 1, 0]
    assert chain[-1].raw == Num(12)
    # the last configuration is a single application of values
    last = chain[-2].raw
    assert isinstance(last, App) and last.arg == Num(5)


def test_second_pipeline_chain():
    dv = nf(double_term())
    w = nf(App(dv, eta_var("x", NAT)))  # case(x) with doubled branches
    inner = Lam("x", NAT, App(succ_term(), w))
    p2 = App(Lam("y", NAT, App(succ_term(), App(inner, eta_var("y", NAT)))), Num(5))
    chain = run_ops(tc(p2))
    assert [c.exec for c in chain] == [4, 3, 2, 1, 0]
    assert chain[-1].raw == Num(12)


# ---------------------------------------------------------------------------
# property checks


_tys = st.sampled_from([NAT, ArrowTy(NAT, NAT)])


@st.composite
def _closed_programs(draw, depth=0):
    pick = draw(st.integers(0, 5 if depth < 2 else 2))
    if pick == 0:
        return Num(draw(st.integers(0, 5))), NAT
    if pick == 1:
        return succ_term(), ArrowTy(NAT, NAT)
    if pick == 2:
        return pred_term(), ArrowTy(NAT, NAT)
    if pick == 3:
        f, _ = draw(_closed_programs(depth=depth + 1))
        ft = typecheck((), f)
        if ft.ty == ArrowTy(NAT, NAT):
            n, _ = draw(_closed_programs(depth=depth + 1))
            if typecheck((), n).ty == NAT:
                return App(f, n), NAT
        return Num(0), NAT
    if pick == 4:
        body, bt = draw(_closed_programs(depth=depth + 1))
        return Lam("u", NAT, body), ArrowTy(NAT, bt)
    n = draw(st.integers(0, 3))
    k = draw(st.integers(0, 3))
    return parse(f"itr@N succ {n} {k}"), NAT


@settings(max_examples=60, deadline=None)
@given(_closed_programs())
def test_parallel_step_preserves_types(tn):
    t, _ = tn
    before = typecheck((), t)
    after = typecheck((), parallel_step(t))
    assert after.ty == before.ty


@settings(max_examples=60, deadline=None)
@given(_closed_programs())
def test_normal_forms_are_fixed_points(tn):
    t, _ = tn
    v = normal_form(t)
    assert alpha_eq(normal_form(v), v)
    assert typecheck((), v).klass == "value"


@settings(max_examples=40, deadline=None)
@given(_closed_programs())
def test_operational_chain_length_equals_counter(tn):
    t, _ = tn
    tt = typecheck((), t)
    if tt.klass == "general":
        return
    chain = run_ops(tt)
    assert len(chain) == tt.exec + 1
    assert [c.exec for c in chain] == list(range(tt.exec, -1, -1))
    assert alpha_eq(chain[-1].raw, normal_form(t))
