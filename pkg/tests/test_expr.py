import pytest

from idiom.dsl import parse_expr, parse_term
from idiom.errors import InvalidPosition
from idiom.expr import (Ap, CanonicalForm, EffectVar, LiftA, Pure, count_lifts, effect_leaves,
                        expr_alpha_eq, lift, positions, replace_at, subexpr_at)
from idiom.oracle import Generator, TypedGenSpec

E = parse_expr


def test_subexpr_at_root_and_child():
    e = E("u <*> (v <*> w)")
    assert subexpr_at(e, ()) == e
    assert subexpr_at(e, (1, 0)) == EffectVar("v")


def test_replace_at_builds_new_tree():
    e = E("u <*> v")
    assert replace_at(e, (1,), E("pure x")) == E("u <*> pure x")
    assert e == E("u <*> v")


def test_bad_positions_raise():
    e = E("liftA1 f u")
    with pytest.raises(InvalidPosition):
        subexpr_at(e, (1,))
    with pytest.raises(InvalidPosition):
        replace_at(e, (0, 0), EffectVar("v"))


def test_liftA_arity_must_match():
    with pytest.raises(ValueError):
        LiftA(2, parse_term("f"), (EffectVar("u"),))


def test_leaves_and_lift_count():
    e = E("liftA2 f u (liftA1 g (v <*> u))")
    assert effect_leaves(e) == ["u", "v", "u"]
    assert count_lifts(e) == 2
    assert lift(parse_term("f"), EffectVar("u")) == E("liftA1 f u")


def test_alpha_eq_on_heads():
    assert expr_alpha_eq(E("pure (\\x -> x)"), E("pure (\\y -> y)"))
    assert not expr_alpha_eq(E("pure (\\x -> x)"), E("liftA0 (\\y -> y)"))


def test_canonical_form_prints_with_compact_names():
    cf = CanonicalForm(parse_term("\\x1 y1 -> f x1 y1"), ("u", "v"))
    assert str(cf) == "liftA2 (\\a b -> f a b) u v"
    assert cf.same_as(CanonicalForm(parse_term("\\p q -> f p q"), ("u", "v")))
    assert not cf.same_as(CanonicalForm(parse_term("\\p q -> f p q"), ("v", "u")))


@pytest.mark.parametrize("seed", range(60))
def test_replace_with_own_subterm_is_identity(seed):
    e = Generator(TypedGenSpec(seed=seed)).case().expr
    for p in positions(e):
        assert replace_at(e, p, subexpr_at(e, p)) == e


def test_positions_are_preorder():
    e = Ap(Pure(parse_term("f")), EffectVar("u"))
    assert list(positions(e)) == [(), (0,), (1,)]
