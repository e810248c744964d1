"""Applicative expressions over a symbolic functor, addressed by child paths."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import InvalidPosition
from .terms import Term, alpha_eq


@dataclass(frozen=True)
class EffectVar:
    name: str

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Pure:
    term: Term

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Ap:
    fun: "ApExpr"
    arg: "ApExpr"

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Fmap:
    term: Term
    arg: "ApExpr"

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class LiftA:
    arity: int
    head: Term
    args: tuple

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        if self.arity != len(self.args):
            raise ValueError(f"liftA{self.arity} given {len(self.args)} arguments")

    def __str__(self):
        return pretty(self)


ApExpr = Union[EffectVar, Pure, Ap, Fmap, LiftA]
Position = tuple  # path of child indices from the root


def lift(head: Term, *args: ApExpr) -> LiftA:
    return LiftA(len(args), head, tuple(args))


def children(e: ApExpr) -> tuple:
    if isinstance(e, Ap):
        return (e.fun, e.arg)
    if isinstance(e, Fmap):
        return (e.arg,)
    if isinstance(e, LiftA):
        return e.args
    return ()


def with_children(e: ApExpr, kids) -> ApExpr:
    kids = tuple(kids)
    if isinstance(e, Ap):
        return Ap(*kids)
    if isinstance(e, Fmap):
        return Fmap(e.term, kids[0])
    if isinstance(e, LiftA):
        return LiftA(e.arity, e.head, kids)
    return e


def subexpr_at(e: ApExpr, p) -> ApExpr:
    for depth, i in enumerate(p):
        kids = children(e)
        if not 0 <= i < len(kids):
            raise InvalidPosition(f"no child {i} at {list(p[:depth])} in {pretty(e)}")
        e = kids[i]
    return e


def replace_at(e: ApExpr, p, r: ApExpr) -> ApExpr:
    if not p:
        return r
    kids = list(children(e))
    i = p[0]
    if not 0 <= i < len(kids):
        raise InvalidPosition(f"no child {i} in {pretty(e)}")
    kids[i] = replace_at(kids[i], p[1:], r)
    return with_children(e, kids)


def positions(e: ApExpr, prefix=()):
    """All valid positions in pre-order."""
    yield prefix
    for i, c in enumerate(children(e)):
        yield from positions(c, prefix + (i,))


def effect_leaves(e: ApExpr) -> list[str]:
    """Effect variable occurrences, left to right."""
    if isinstance(e, EffectVar):
        return [e.name]
    out = []
    for c in children(e):
        out.extend(effect_leaves(c))
    return out


def count_lifts(e: ApExpr) -> int:
    return int(isinstance(e, LiftA)) + sum(count_lifts(c) for c in children(e))


def expr_alpha_eq(a: ApExpr, b: ApExpr) -> bool:
    """Structural equality with lambda terms compared up to alpha-renaming."""
    if type(a) is not type(b):
        return False
    if isinstance(a, EffectVar):
        return a.name == b.name
    if isinstance(a, (Pure, Fmap)) and not alpha_eq(a.term, b.term):
        return False
    if isinstance(a, LiftA) and (a.arity != b.arity or not alpha_eq(a.head, b.head)):
        return False
    ka, kb = children(a), children(b)
    return len(ka) == len(kb) and all(expr_alpha_eq(x, y) for x, y in zip(ka, kb))


def map_terms(e: ApExpr, fn) -> ApExpr:
    """Apply ``fn`` to every lambda term embedded in ``e``."""
    if isinstance(e, Pure):
        return Pure(fn(e.term))
    if isinstance(e, Fmap):
        return Fmap(fn(e.term), map_terms(e.arg, fn))
    if isinstance(e, LiftA):
        return LiftA(e.arity, fn(e.head), tuple(map_terms(a, fn) for a in e.args))
    if isinstance(e, Ap):
        return Ap(map_terms(e.fun, fn), map_terms(e.arg, fn))
    return e


@dataclass(frozen=True)
class CanonicalForm:
    """A single ``liftAn head u1 .. un`` over effect variables."""

    head: Term
    leaves: tuple

    def as_lift(self) -> LiftA:
        return LiftA(len(self.leaves), self.head, tuple(EffectVar(n) for n in self.leaves))

    def same_as(self, other: "CanonicalForm") -> bool:
        return self.leaves == other.leaves and alpha_eq(self.head, other.head)

    def __str__(self):
        from .terms import compact_names
        return pretty(LiftA(len(self.leaves), compact_names(self.head),
                            tuple(EffectVar(n) for n in self.leaves)))


def pretty(e: ApExpr) -> str:
    from .dsl import print_expr
    return print_expr(e)
