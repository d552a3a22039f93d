import itertools
from pathlib import Path

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dmt.parser import parse_prop, parse_term
from dmt.rewrite import (
    FuelExhausted,
    RuleKind,
    RulePolarity,
    normalize,
    validate_theory,
)
from dmt.syntax import And, App, Atom, Bottom, Forall, Implies, Or, Signature, Top, Var, alpha_eq, free_vars
from dmt.theories import (
    BUILTIN_SOURCES,
    Axiom,
    AxiomSet,
    builtin,
    close,
    format_axioms,
    load_axioms,
    orient,
    orients,
    parse_axioms,
    strip_foralls,
)
from dmt.theoryfile import format_theory, parse_theory
from oracles import eval_fol, eval_prop, from_tuple, one_step, structures, to_tuple
from strategies import ARITH_SIG, arith_props, arith_terms

DATA = Path(__file__).parent / "data"


# --- builtins ----------------------------------------------------------------


def _polarities(theory):
    return sorted(r.polarity.name for r in theory.rules)


def test_arith_has_six_rules():
    assert len(builtin("arith").rules) == 6


def test_arith_rule_set_is_exact():
    sig = builtin("arith").signature
    expected = {
        "plus0": ("0 + y", "y"),
        "plusS": ("S(x) + y", "S(x + y)"),
        "eq00": ("0 = 0", "true"),
        "eqS0": ("S(x) = 0", "false"),
        "eq0S": ("0 = S(y)", "false"),
        "eqSS": ("S(x) = S(y)", "x = y"),
    }
    got = {r.name: r for r in builtin("arith").rules}
    assert set(got) == set(expected)
    for name, (lhs, rhs) in expected.items():
        r = got[name]
        assert r.polarity is RulePolarity.UNPOLARIZED
        if r.kind is RuleKind.TERM:
            assert (r.lhs, r.rhs) == (parse_term(lhs, sig), parse_term(rhs, sig))
        else:
            assert r.lhs == parse_prop(lhs, sig) and alpha_eq(r.rhs, parse_prop(rhs, sig))


def test_union_polarized_has_one_negative_two_positive():
    assert _polarities(builtin("union_polarized")) == ["NEGATIVE_ONLY", "POSITIVE_ONLY", "POSITIVE_ONLY"]


def test_union_unpolarized_and_subset_are_single_rules():
    for name in ("union_unpolarized", "subset"):
        rules = builtin(name).rules
        assert len(rules) == 1 and rules[0].polarity is RulePolarity.UNPOLARIZED


def test_subset_rule_shape():
    r = builtin("subset").rules[0]
    sig = builtin("subset").signature
    assert r.lhs == Atom("sub", (Var("x"), Var("y")))
    assert alpha_eq(r.rhs, parse_prop("forall z. (in(z, x) => in(z, y))", sig))


def test_loop_rule_shape():
    r = builtin("loopPQ").rules[0]
    assert r.lhs == Atom("P") and r.rhs == Implies(Atom("P"), Atom("Q"))


@pytest.mark.parametrize("name", sorted(BUILTIN_SOURCES))
def test_builtins_validate(name):
    assert validate_theory(builtin(name)) == []


def test_loop_normalization_runs_out_of_fuel():
    with pytest.raises(FuelExhausted):
        normalize(Atom("P"), builtin("loopPQ"), fuel=500)


def test_unknown_builtin():
    with pytest.raises(KeyError, match="unknown builtin"):
        builtin("peano")


# --- orientation examples ------------------------------------------------------


def test_orient_arith_axioms_gives_the_two_addition_rules():
    theory, residual = orient(load_axioms(DATA / "arith_axioms.dma"))
    arith = builtin("arith")
    assert [(r.name, r.lhs, r.rhs, r.polarity) for r in theory.rules] == [
        (n, arith.rule(n).lhs, arith.rule(n).rhs, RulePolarity.UNPOLARIZED) for n in ("plus0", "plusS")]
    assert all(r.kind is RuleKind.TERM for r in theory.rules)
    assert residual.axioms == ()


def test_orient_triangles_gives_only_a_negative_rule():
    theory, residual = orient(load_axioms(DATA / "triangles.dma"))
    assert len(theory.rules) == 1
    r = theory.rules[0]
    assert r.polarity is RulePolarity.NEGATIVE_ONLY
    assert (r.lhs, r.rhs) == (Atom("Equilateral", (Var("x"),)), Atom("Isosceles", (Var("x"),)))
    assert not any(r.polarity is RulePolarity.UNPOLARIZED for r in theory.rules)
    assert residual.axioms == ()


def test_orient_subset_biconditional_is_one_unpolarized_rule():
    theory, _ = orient(load_axioms(DATA / "subset_axiom.dma"))
    (r,) = theory.rules
    expected = builtin("subset").rules[0]
    assert r.polarity is RulePolarity.UNPOLARIZED
    assert r.lhs == expected.lhs and alpha_eq(r.rhs, expected.rhs)


def test_converse_implication_is_positive_only():
    ax = parse_axioms("pred E 1\npred I 1\naxiom back : forall x. (I(x) & I(x) => E(x))")
    (r,) = orient(ax)[0].rules
    assert r.polarity is RulePolarity.POSITIVE_ONLY
    assert r.lhs == Atom("E", (Var("x"),))


def test_atom_to_atom_implication_prefers_the_negative_reading():
    ax = parse_axioms("pred E 1\npred I 1\naxiom fwd : forall x. (I(x) => E(x))")
    (r,) = orient(ax)[0].rules
    assert r.polarity is RulePolarity.NEGATIVE_ONLY and r.lhs == Atom("I", (Var("x"),))


def test_unorientable_axioms_stay_residual():
    text = """
    fun 0 0
    fun + 2
    pred = 2
    pred p 1
    pred q 1
    infix + 6 left
    infix = 4 none
    axiom comm : forall x y. x + y = y + x
    axiom either : forall x. p(x) | q(x)
    axiom extra : forall x. (p(x) => q(y))
    axiom ok : forall y. 0 + y = y
    """
    axioms = parse_axioms(text)
    theory, residual = orient(axioms)
    assert [r.name for r in theory.rules] == ["ok"]
    assert [a.name for a in residual.axioms] == ["comm", "either", "extra"]
    by_name = {a.name: a for a in axioms.axioms}
    assert all(a is by_name[a.name] for a in residual.axioms)


def test_axioms_are_closed_on_ingest():
    axioms = parse_axioms("pred p 1\naxiom a : p(x)\naxiom b : forall x. p(x)")
    a, b = axioms.axioms
    assert a.prop == Forall("x", Atom("p", (Var("x"),))) and not a.closed
    assert b.closed
    assert all(not free_vars(ax.prop) for ax in axioms.axioms)


def test_axiom_file_round_trip():
    axioms = load_axioms(DATA / "arith_axioms.dma")
    again = parse_axioms(format_axioms(axioms))
    assert [a.name for a in again.axioms] == [a.name for a in axioms.axioms]
    assert all(alpha_eq(x.prop, y.prop) for x, y in zip(again.axioms, axioms.axioms))


def test_oriented_theory_prints_as_a_theory_file():
    theory, _ = orient(load_axioms(DATA / "arith_axioms.dma"))
    again = parse_theory(format_theory(theory), "again")
    assert [(r.lhs, r.rhs) for r in again.rules] == [(r.lhs, r.rhs) for r in theory.rules]


def test_size_measure_cases():
    x, y = Var("x"), Var("y")

    def plus(a, b):
        return App("+", (a, b))

    def S(a):
        return App("S", (a,))

    assert orients(plus(App("0"), y), y)
    assert orients(plus(S(x), y), S(plus(x, y)))
    assert not orients(S(plus(x, y)), plus(S(x), y))
    assert not orients(plus(x, y), plus(y, x))
    assert not orients(x, plus(x, App("0")))
    assert orients(plus(x, App("0")), x)
    assert not orients(plus(x, App("0")), plus(x, x))  # duplicates x


# --- properties ----------------------------------------------------------------

REL = {"p": 1, "q": 1, "r": 2}
REL_SIG = Signature(predicates=REL)
DOMAIN = (0, 1)
MODELS = structures(REL, DOMAIN)
XY = ("x", "y")

_vars = st.sampled_from([Var(v) for v in XY + ("z",)])
_rel_atoms = st.one_of(
    st.builds(lambda v: Atom("p", (v,)), _vars),
    st.builds(lambda v: Atom("q", (v,)), _vars),
    st.builds(lambda a, b: Atom("r", (a, b)), _vars, _vars),
)


def _rel_props():
    leaf = st.one_of(_rel_atoms, st.just(Top()), st.just(Bottom()))
    return st.recursive(leaf, lambda ch: st.one_of(
        st.builds(And, ch, ch), st.builds(Or, ch, ch), st.builds(Implies, ch, ch),
        st.builds(Forall, st.just("z"), ch)), max_leaves=5)


@st.composite
def rel_axioms(draw):
    p, a = draw(_rel_atoms), draw(_rel_props())
    shape = draw(st.sampled_from(["iff", "iff_rev", "imp", "imp_rev", "free"]))
    body = {
        "iff": lambda: And(Implies(p, a), Implies(a, p)),
        "iff_rev": lambda: And(Implies(a, p), Implies(p, a)),
        "imp": lambda: Implies(p, a),
        "imp_rev": lambda: Implies(a, p),
        "free": lambda: a,
    }[shape]()
    return Axiom("ax", close(body))


def _reading(rule):
    if rule.polarity is RulePolarity.UNPOLARIZED:
        return And(Implies(rule.lhs, rule.rhs), Implies(rule.rhs, rule.lhs))
    if rule.polarity is RulePolarity.NEGATIVE_ONLY:
        return Implies(rule.lhs, rule.rhs)
    return Implies(rule.rhs, rule.lhs)


def _envs(p):
    vs = sorted(free_vars(p))
    for values in itertools.product(DOMAIN, repeat=len(vs)):
        yield dict(zip(vs, values))


@settings(max_examples=300, deadline=None)
@given(rel_axioms())
def test_property_orient_reading_matches_axiom(ax):
    theory, residual = orient(AxiomSet("t", (ax,), REL_SIG))
    assert len(theory.rules) + len(residual.axioms) == 1
    if residual.axioms:
        assert residual.axioms[0] is ax
        return
    (rule,) = theory.rules
    body, reading = strip_foralls(ax.prop), _reading(rule)
    for m in MODELS:
        for env in _envs(body):
            assert eval_fol(body, DOMAIN, m, env) == eval_fol(reading, DOMAIN, m, env)


@settings(max_examples=300, deadline=None)
@given(rel_axioms())
def test_property_orient_rules_are_well_formed(ax):
    theory, _ = orient(AxiomSet("t", (ax,), REL_SIG))
    for r in theory.rules:
        assert isinstance(r.lhs, Atom)
        assert free_vars(r.rhs) <= free_vars(r.lhs)
    assert validate_theory(theory) == []


# True equations over 0, S, +: a term paired with one of its reducts under
# the addition rules (by brute force), in either direction.
@st.composite
def _arith_eq(draw):
    t = to_tuple(draw(arith_terms(XY, 6)))
    u = t
    for _ in range(draw(st.integers(1, 4))):
        nxt = sorted(one_step(u))
        if not nxt:
            break
        u = draw(st.sampled_from(nxt))
    pair = (from_tuple(t), from_tuple(u))
    return pair[::-1] if draw(st.booleans()) else pair


@settings(max_examples=200, deadline=None)
@given(st.lists(_arith_eq(), min_size=1, max_size=4), arith_props(max_leaves=4))
def test_property_oriented_equations_preserve_ground_truth(eqs, prop):
    axioms = AxiomSet("eqs", tuple(Axiom(f"e{i}", close(Atom("=", tu))) for i, tu in enumerate(eqs)), ARITH_SIG)
    theory, _ = orient(axioms)
    assert {r.name for r in theory.rules} == {a.name for a, tu in zip(axioms.axioms, eqs) if orients(*tu)}
    for r in theory.rules:
        assert r.kind is RuleKind.TERM and isinstance(r.lhs, App)
    try:
        nf = normalize(prop, theory, fuel=2000)
    except FuelExhausted:
        assume(False)
    assert eval_prop(nf) == eval_prop(prop)


def test_size_tie_is_broken_one_way_only():
    ax = parse_axioms("fun S 1\nfun + 2\npred = 2\ninfix + 6 left\ninfix = 4 none\n"
                      "axiom push : forall x y. S(x) + y = S(x + y)\n"
                      "axiom pull : forall x y. S(x + y) = S(x) + y")
    theory, residual = orient(ax)
    assert [r.name for r in theory.rules] == ["push"]
    assert [a.name for a in residual.axioms] == ["pull"]
