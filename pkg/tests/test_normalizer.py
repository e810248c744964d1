import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idiom.dsl import parse_expr, parse_term
from idiom.errors import ArityCapExceeded, DivergenceError
from idiom.expr import Ap, EffectVar, Fmap, LiftA, Pure, count_lifts, effect_leaves, expr_alpha_eq
from idiom.normalizer import (RewriteStep, Settings, apply_law, canonicalize, desugar,
                              equivalent, expand_lift, fuse, validate_trace)
from idiom.oracle import Generator, TypedGenSpec
from idiom.terms import ID, IDENTITY, alpha_eq, compose_nm, normalize_term

E, T = parse_expr, parse_term
u, v, w = map(EffectVar, "uvw")
f, g, x = T("f"), T("g"), T("x")


def gen(seed, depth=3, arity=3):
    return Generator(TypedGenSpec(max_depth=depth, max_arity=arity, seed=seed)).case().expr


# ---------- desugar ----------

def test_desugar_ap_of_pure():
    out, steps = desugar(Ap(Pure(ID), u))
    assert out == LiftA(2, ID, (LiftA(0, ID, ()), u))
    assert [s.law for s in steps] == ["desugar-ap", "desugar-pure"]


def test_desugar_pure():
    assert desugar(Pure(x))[0] == LiftA(0, x, ())


def test_desugar_fmap_of_ap():
    out, steps = desugar(Fmap(f, Ap(u, v)))
    assert out == LiftA(1, f, (LiftA(2, ID, (u, v)),))
    assert steps[0].position == () and steps[1].position == (0,)


# ---------- fuse ----------

def test_fuse_homomorphism_case():
    out, steps = fuse(LiftA(2, ID, (LiftA(0, f, ()), LiftA(0, x, ()))))
    assert out.arity == 0 and alpha_eq(normalize_term(out.head), T("f x"))
    assert [s.label for s in steps] == ["composition(0,0,1)", "composition(0,0,0)"]


def test_fuse_interchange_case():
    out, _ = fuse(LiftA(2, ID, (u, LiftA(0, x, ()))))
    assert out.args == (u,)
    assert alpha_eq(normalize_term(out.head), T("\\f -> f x"))


def test_fuse_second_functor_case():
    out, steps = fuse(LiftA(1, f, (LiftA(1, g, (v,)),)))
    assert out == LiftA(1, compose_nm(f, g, 0, 1), (v,))
    assert steps[0].params == (0, 1, 0)


def test_fuse_rejects_unknown_strategy():
    with pytest.raises(ValueError):
        fuse(u, strategy="outermost")


def test_fuse_respects_arity_cap():
    e = E("liftA2 f (liftA2 g u v) (liftA2 h w u)")
    with pytest.raises(ArityCapExceeded):
        canonicalize(e, settings=Settings(arity_cap=3))
    assert canonicalize(e)[0].leaves == ("u", "v", "w", "u")


# ---------- canonicalize / equivalent ----------

def test_canonical_identity_law():
    form, trace = canonicalize(E("pure id <*> u"))
    assert alpha_eq(form.head, IDENTITY) and form.leaves == ("u",)
    assert trace.laws()[-1] == "head-normalize"


def test_canonical_bare_variable_wraps():
    form, trace = canonicalize(E("u"))
    assert alpha_eq(form.head, IDENTITY) and form.leaves == ("u",)
    assert trace.laws() == ["wrap-effectvar", "head-normalize"]


def test_canonical_composition_law():
    form, _ = canonicalize(E("pure (\\f g x -> f (g x)) <*> u <*> v <*> w"))
    assert alpha_eq(form.head, T("\\a b c -> a (b c)"))
    assert form.leaves == ("u", "v", "w")


@pytest.mark.parametrize("a,b,verdict", [
    ("pure (\\f -> f x) <*> u", "u <*> pure x", "equal"),
    ("pure f <*> pure x", "pure (f x)", "equal"),
    ("u <*> v", "v <*> u", "distinct"),
    ("liftA1 f u", "liftA1 g u", "distinct"),
    ("fmap f (fmap g u)", "fmap (\\x -> f (g x)) u", "equal"),
    ("u <*> u", "u <*> v", "distinct"),
])
def test_equivalent_examples(a, b, verdict):
    assert equivalent(E(a), E(b)).verdict == verdict


def test_eta_flag_changes_verdict():
    a, b = E("liftA1 (\\x -> f x) u"), E("liftA1 f u")
    assert equivalent(a, b).equal
    assert not equivalent(a, b, eta=False).equal


def test_divergent_head_is_reported():
    e = E("pure ((\\x -> x x) (\\x -> x x))")
    with pytest.raises(DivergenceError):
        canonicalize(e, settings=Settings(step_budget=1000))


# ---------- expand_lift ----------

def test_expand_examples():
    assert expand_lift(LiftA(0, x, ())) == Pure(x)
    assert expand_lift(LiftA(2, f, (u, v))) == Ap(Ap(Pure(f), u), v)
    assert expand_lift(LiftA(1, ID, (u,))) == Ap(Pure(ID), u)


def test_expand_is_recursive():
    out = expand_lift(E("fmap g (liftA1 f u)"))
    assert out == Fmap(g, Ap(Pure(f), u))


# ---------- replay ----------

def test_apply_law_rejects_wrong_claims():
    e = E("liftA1 f u")
    bogus = RewriteStep("composition", (), e, e, (0, 0, 0))
    with pytest.raises(Exception):
        apply_law(bogus)


def test_tampered_trace_fails_validation():
    _, trace = canonicalize(E("pure f <*> u <*> v"))
    steps = list(trace.steps)
    s = steps[-2]
    steps[-2] = RewriteStep(s.law, s.position, s.before, E("liftA2 g u v"), s.params)
    bad = type(trace)(trace.initial, tuple(steps), trace.final, trace.eta)
    assert validate_trace(trace)
    assert not validate_trace(bad)


# ---------- properties over generated expressions ----------

SEEDS = st.integers(0, 2**40)


@settings(max_examples=200, deadline=None)
@given(SEEDS)
def test_every_step_revalidates(seed):
    _, trace = canonicalize(gen(seed))
    assert validate_trace(trace)


@settings(max_examples=200, deadline=None)
@given(SEEDS)
def test_step_count_bound(seed):
    desugared, _ = desugar(gen(seed))
    _, steps = fuse(desugared)
    lifts = count_lifts(desugared)
    expected = lifts - 1 if isinstance(desugared, LiftA) else lifts
    assert len(steps) == expected


@settings(max_examples=200, deadline=None)
@given(SEEDS)
def test_leaf_preservation(seed):
    e = gen(seed)
    assert list(canonicalize(e)[0].leaves) == effect_leaves(e)


@settings(max_examples=200, deadline=None)
@given(SEEDS, st.booleans())
def test_strategies_agree(seed, eta):
    e = gen(seed)
    left, _ = canonicalize(e, eta)
    right, _ = canonicalize(e, eta, strategy="rightmost")
    assert left.leaves == right.leaves
    assert left.head == right.head or alpha_eq(left.head, right.head)


@settings(max_examples=200, deadline=None)
@given(SEEDS)
def test_expansion_round_trip(seed):
    form, _ = canonicalize(gen(seed))
    again, _ = canonicalize(expand_lift(form.as_lift()))
    assert again.same_as(form)


@settings(max_examples=100, deadline=None)
@given(SEEDS)
def test_canonical_head_is_normal(seed):
    form, _ = canonicalize(gen(seed))
    assert alpha_eq(normalize_term(form.head), form.head)
    assert expr_alpha_eq(canonicalize(form.as_lift())[0].as_lift(), form.as_lift())
