"""The category layer: morphisms, evaluation as hiding, and its laws."""

import json

import pytest

from hiddenmoves.boc import (
    LAW_BOUNDS,
    Morphism,
    check_ccboc_laws,
    compose_m,
    curry_m,
    ev_m,
    evaluate_once,
    evaluate_to_value,
    ext_equiv,
    identity,
    numeral_morphism,
    pair_m,
    proj_m,
    product_m,
    sample_triples,
    terminal_morphism,
)
from hiddenmoves.games import ProbeBounds, terminal_game
from hiddenmoves.strategies import nat_game, num_fun, plays
from hiddenmoves.syntax import App, Num, double_term, normal_form, succ_term, typecheck

N = nat_game()


def succ_m():
    return Morphism(N, N, num_fun(lambda n: n + 1, "succ"))


def double_m():
    return Morphism(N, N, num_fun(lambda n: 2 * n, "double"))


def value_table(m):
    """The visible q -> answer pairs of a value morphism over numerals."""
    out = {}
    for s in plays(m.strat, LAW_BOUNDS).maximal():
        ms = s.moves()
        if len(ms) == 2:
            out["q"] = ms[1].base
        elif len(ms) == 4:
            out[ms[2].base] = ms[3].base
    return out


# -- values and single steps


def test_identity_is_a_value_fixed_by_evaluation():
    i = identity(N)
    assert i.is_value()
    assert evaluate_once(i) is i


def test_numeral_morphism_needs_no_evaluation():
    m = numeral_morphism(7)
    assert m.is_value()
    r = evaluate_to_value(m)
    assert r.steps == 0 and not r.diverged
    assert value_table(m) == {"q": 7}


def test_terminal_morphism_has_only_the_empty_play():
    t = terminal_morphism(N)
    book = plays(t.strat)
    assert [len(s) for s in book] == [0]
    assert not book.leaves


def test_evaluate_once_peels_one_degree_and_keeps_the_hom():
    sd = compose_m(succ_m(), double_m())
    assert sd.mu == 1 and not sd.is_value()
    e = evaluate_once(sd)
    assert e.mu == 0
    assert e.dom is sd.dom and e.cod is sd.cod


def test_five_then_succ_then_double_reaches_twelve():
    prog = compose_m(compose_m(numeral_morphism(5), succ_m()), double_m())
    r = evaluate_to_value(prog)
    assert r.steps == 2 and not r.diverged
    assert value_table(r.morphism) == {"q": 12}


def test_evaluation_steps_match_the_execution_count():
    prog = compose_m(compose_m(numeral_morphism(5), succ_m()), double_m())
    term = App(normal_form(double_term()), App(succ_term(), Num(5)))
    assert typecheck((), term).exec == evaluate_to_value(prog).steps


def test_divergence_is_reported_only_below_the_depth_bound():
    prog = compose_m(compose_m(numeral_morphism(5), succ_m()), double_m())
    starved = evaluate_to_value(prog, fuel=1)
    assert starved.diverged and starved.steps == 1
    enough = evaluate_to_value(prog, fuel=prog.mu)
    assert not enough.diverged


def test_values_compose_to_a_convergent_morphism():
    fg = compose_m(succ_m(), double_m())
    r = evaluate_to_value(fg)
    assert not r.diverged and r.morphism.is_value()
    assert value_table(r.morphism) == {n: 2 * (n + 1) for n in range(9)}


# -- equality up to evaluation


def test_ext_equiv_distinguishes_composition_order():
    sd = compose_m(succ_m(), double_m())
    ds = compose_m(double_m(), succ_m())
    assert ext_equiv(sd, ds).tag == "Distinguished"


def test_ext_equiv_ignores_association():
    f, g, h = succ_m(), double_m(), succ_m()
    left = compose_m(compose_m(f, g), h)
    right = compose_m(f, compose_m(g, h))
    assert ext_equiv(left, right).tag == "Equal"


def test_ext_equiv_is_inconclusive_without_fuel():
    a = compose_m(succ_m(), double_m())
    b = compose_m(double_m(), succ_m())
    assert ext_equiv(a, b, fuel=0).tag == "Inconclusive"


def test_ext_equiv_separates_value_from_starved_composite():
    a = compose_m(identity(N), succ_m())
    assert ext_equiv(succ_m(), a, fuel=0).tag == "Distinguished"


# -- cartesian structure


def test_validate_accepts_simple_and_composite_morphisms():
    ok, reason = succ_m().validate()
    assert ok, reason
    ok, reason = compose_m(succ_m(), double_m()).validate()
    assert ok, reason


def test_projection_reads_one_component():
    p1 = proj_m(N, N, 1)
    assert p1.is_value()
    assert value_table(p1) == {n: n for n in range(9)}


def test_pairing_then_projections_recover_both_legs():
    p = pair_m(succ_m(), double_m())
    left = compose_m(p, proj_m(N, N, 1))
    right = compose_m(p, proj_m(N, N, 2))
    assert ext_equiv(left, succ_m()).tag == "Equal"
    assert ext_equiv(right, double_m()).tag == "Equal"


def test_pairing_projection_mismatch_is_detected():
    p = pair_m(succ_m(), double_m())
    swapped = compose_m(p, proj_m(N, N, 2))
    assert ext_equiv(swapped, succ_m()).tag == "Distinguished"


def test_product_of_morphisms_acts_componentwise():
    pm = product_m(succ_m(), double_m())
    back1 = compose_m(pm, proj_m(N, N, 1))
    want1 = compose_m(proj_m(N, N, 1), succ_m())
    assert ext_equiv(back1, want1).tag == "Equal"


def test_currying_then_applying_recovers_the_map():
    mu_m = compose_m(proj_m(N, N, 1), compose_m(succ_m(), double_m()))
    lam = curry_m(mu_m)
    spread = pair_m(compose_m(proj_m(N, N, 1), lam),
                    compose_m(proj_m(N, N, 2), identity(N)))
    applied = compose_m(spread, ev_m(N, N))
    r = evaluate_to_value(applied)
    assert r.steps == applied.mu and not r.diverged
    assert ext_equiv(applied, mu_m).tag == "Equal"


def test_curry_needs_a_product_domain():
    with pytest.raises(ValueError):
        curry_m(succ_m())


def test_compose_rejects_mismatched_endpoints():
    with pytest.raises(ValueError):
        compose_m(terminal_morphism(N), succ_m())


# -- the law suite


def test_reports_serialize_and_replay():
    reports = check_ccboc_laws(sample_triples(3, 1), LAW_BOUNDS,
                               laws=["composition", "identities"])
    blob = json.loads(json.dumps([r.to_dict() for r in reports]))
    assert {r["axiom"] for r in blob} == {"composition", "identities"}
    assert all(r["ok"] for r in blob)
    assert all(c["check"] for r in blob for c in r["checks"])


def test_axioms_hold_on_sampled_triples():
    reports = check_ccboc_laws(
        sample_triples(11, 4), LAW_BOUNDS,
        laws=["subject-reduction", "composition", "identities", "two-cells"])
    bad = [r.to_dict() for r in reports if not r.ok]
    assert not bad, bad


def test_cartesian_laws_hold_on_sampled_triples():
    tight = ProbeBounds(max_play_len=12, numerals=(0, 1), max_copy_index=1)
    reports = check_ccboc_laws(
        sample_triples(13, 2), tight,
        laws=["associativity", "unit", "product", "exponential"])
    bad = [r.to_dict() for r in reports if not r.ok]
    assert not bad, bad
