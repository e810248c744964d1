import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from idiom.dsl import parse_term
from idiom.errors import ArityCapExceeded, DivergenceError
from idiom.terms import (App, Const, Lam, Var, alpha_eq, apps, compact_names, compose_nm,
                         is_normal, lams, normalize_term, substitute)

T = parse_term
COMP = T("\\f g x -> f (g x)")


def nf(t, eta=True):
    return normalize_term(t, eta)


# ---------- substitution ----------

def test_substitute_renames_to_avoid_capture():
    assert substitute(T("\\y -> x"), "x", Var("y")) == Lam("y'", Var("y"))


def test_substitute_identity_case():
    assert substitute(Var("x"), "x", Const("id")) == Const("id")


def test_substitute_shadowed_binder_is_noop():
    assert substitute(T("\\x -> x"), "x", Var("g")) == T("\\x -> x")


def test_substitute_keeps_other_free_variables():
    out = substitute(T("\\y -> f x y"), "x", T("y z"))
    assert alpha_eq(out, T("\\w -> f (y z) w"))
    assert out.fv == {"f", "y", "z"}


# ---------- normalization ----------

def test_compose_of_identities_normalizes_to_identity():
    assert alpha_eq(nf(apps(COMP, Const("id"), Const("id"))), T("\\x -> x"))


def test_beta_step():
    assert nf(T("(\\f -> f x) id")) == Var("x")


def test_eta_step():
    assert nf(T("\\x -> add 1 x")) == T("add 1")
    assert nf(T("\\x -> add 1 x"), eta=False) == T("\\x -> add 1 x")


def test_projections_reduce():
    assert nf(T("fst (a, b)")) == Var("a")
    assert nf(T("snd ((\\p -> p) (a, b))")) == Var("b")
    assert nf(T("fst p")) == T("fst p")


def test_id_is_unfolded():
    assert nf(Const("id")) == T("\\x -> x")
    assert is_normal(T("\\x -> x"))
    assert not is_normal(Const("id"))


def test_eta_does_not_fire_when_variable_occurs():
    t = T("\\x -> f x x")
    assert nf(t) == t


def test_divergence_is_reported():
    omega = T("(\\x -> x x) (\\x -> x x)")
    with pytest.raises(DivergenceError):
        normalize_term(omega, budget=500)


# ---------- alpha equivalence ----------

def test_alpha_eq_examples():
    assert alpha_eq(T("\\x -> x"), T("\\y -> y"))
    assert not alpha_eq(T("\\x y -> x"), T("\\x y -> y"))
    assert not alpha_eq(T("\\x -> y"), T("\\y -> y"))
    assert not alpha_eq(Const(1), Const("id"))


def test_alpha_eq_of_composed_identities():
    # compose_nm(id, id, 0, 1) is \x -> id (id x); written out by hand here
    by_hand = nf(Lam("x", App(Const("id"), App(Const("id"), Var("x")))))
    assert alpha_eq(nf(compose_nm(Const("id"), Const("id"), 0, 1)), T("\\z -> z"))
    assert alpha_eq(by_hand, T("\\z -> z"))


# ---------- generalized composition ----------

def test_compose_unary_is_ordinary_composition():
    assert alpha_eq(compose_nm(Var("f"), Var("g"), 0, 1), T("\\x -> f (g x)"))


def test_compose_zero_zero_is_application():
    assert compose_nm(Var("f"), Var("y"), 0, 0) == T("f y")


def test_compose_identities_one_two():
    assert alpha_eq(compose_nm(Const("id"), Const("id"), 1, 2), T("\\a b c -> a (b c)"))


def test_compose_respects_arity_cap():
    with pytest.raises(ArityCapExceeded):
        compose_nm(Var("f"), Var("g"), 10, 7)
    compose_nm(Var("f"), Var("g"), 10, 6)


def test_compose_avoids_free_variable_names():
    t = compose_nm(Var("x1"), Var("y1"), 1, 1)
    assert alpha_eq(t, T("\\a b -> x1 a (y1 b)"))


@pytest.mark.parametrize("n", range(5))
@pytest.mark.parametrize("m", range(5))
def test_compose_by_definition(n, m):
    # applying the composite to fresh arguments must give f as (g bs)
    a = [Var(f"a{i}") for i in range(n)]
    b = [Var(f"b{i}") for i in range(m)]
    lhs = nf(apps(compose_nm(Var("f"), Var("g"), n, m), *a, *b), eta=False)
    expected = apps(Var("f"), *a, apps(Var("g"), *b))
    assert lhs == expected


@pytest.mark.parametrize("n", range(4))
@pytest.mark.parametrize("k", range(4))
def test_composition_coefficient_identity(n, k):
    # ((_ o _) o_0^n f) o_n^k g  ==  f o_n^(k+1) g
    f, g = Var("f"), Var("g")
    lhs = compose_nm(compose_nm(COMP, f, 0, n), g, n, k)
    assert alpha_eq(nf(lhs), nf(compose_nm(f, g, n, k + 1)))


@pytest.mark.parametrize("k", range(5))
def test_unary_composition_coefficient_identity(k):
    # (f o _) o_0^k g  ==  f o_0^(k+1) g
    f, g = Var("f"), Var("g")
    lhs = compose_nm(App(COMP, f), g, 0, k)
    assert alpha_eq(nf(lhs), nf(compose_nm(f, g, 0, k + 1)))


@pytest.mark.parametrize("n", range(5))
def test_pure_argument_coefficient_identity(n):
    # (\k -> k x) o_0^n f  ==  f o_n^0 x
    f, x = Var("f"), Var("x")
    lhs = compose_nm(T("\\k -> k x"), f, 0, n)
    assert alpha_eq(nf(lhs), nf(compose_nm(f, x, n, 0)))


def test_compact_names_is_alpha_equivalent():
    t = T("\\x1 x1' -> f x1 (\\y'' -> y'' x1')")
    c = compact_names(t)
    assert alpha_eq(t, c)
    assert c == T("\\a b -> f a (\\c -> c b)")


# ---------- properties on generated untyped terms ----------

NAMES = ["x", "y", "z"]
atoms = st.one_of(
    st.sampled_from(NAMES).map(Var),
    st.sampled_from(["id", "fst", "snd", "pair", "add"]).map(Const),
    st.integers(0, 3).map(Const),
)
terms = st.recursive(
    atoms,
    lambda sub: st.one_of(
        st.tuples(sub, sub).map(lambda p: App(*p)),
        st.tuples(st.sampled_from(NAMES), sub).map(lambda p: Lam(*p)),
    ),
    max_leaves=12,
)


def _try_nf(t, eta=True):
    try:
        return normalize_term(t, eta, budget=3000)
    except (DivergenceError, RecursionError):
        assume(False)


@settings(max_examples=300, deadline=None)
@given(terms, st.booleans())
def test_normalization_is_idempotent(t, eta):
    once = _try_nf(t, eta)
    assert alpha_eq(normalize_term(once, eta), once)


@settings(max_examples=300, deadline=None)
@given(terms)
def test_normalization_is_stable_under_renaming(t):
    assert alpha_eq(_try_nf(t), _try_nf(compact_names(t)))


@settings(max_examples=300, deadline=None)
@given(terms, st.sampled_from(NAMES), terms)
def test_substitution_commutes_with_normalization(t, x, s):
    direct = _try_nf(substitute(t, x, s), eta=False)
    staged = _try_nf(substitute(_try_nf(t, eta=False), x, _try_nf(s, eta=False)), eta=False)
    assert alpha_eq(direct, staged)


@settings(max_examples=300, deadline=None)
@given(terms, st.sampled_from(NAMES), terms)
def test_substitution_free_variables(t, x, s):
    out = substitute(t, x, s)
    if x in t.fv:
        assert out.fv <= (t.fv - {x}) | s.fv
    else:
        assert out == t


def test_lams_and_apps_helpers():
    assert lams(["a", "b"], Var("a")) == T("\\a b -> a")
    assert apps(Var("f"), Var("a"), Var("b")) == T("f a b")
