"""Untyped lambda calculus with integer literals and a few primitives.

Pairs are encoded with the constants ``pair``, ``fst`` and ``snd``.  The
primitive ``id`` is treated as an abbreviation for ``\\x -> x`` by the
normalizer, so normal forms never mention it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import ArityCapExceeded, DivergenceError

PRIMITIVES = frozenset({"id", "fst", "snd", "pair", "add", "neg"})

DEFAULT_STEP_BUDGET = 10**6
DEFAULT_ARITY_CAP = 16


@dataclass(frozen=True)
class Var:
    name: str
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fv", frozenset((self.name,)))


@dataclass(frozen=True)
class Lam:
    binder: str
    body: "Term"
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fv", self.body.fv - {self.binder})


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fv", self.fun.fv | self.arg.fv)


@dataclass(frozen=True)
class Const:
    lit: Union[int, str]
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.lit, str) and self.lit not in PRIMITIVES:
            raise ValueError(f"unknown primitive {self.lit!r}")
        object.__setattr__(self, "fv", frozenset())


Term = Union[Var, Lam, App, Const]

ID = Const("id")
FST = Const("fst")
SND = Const("snd")
PAIR = Const("pair")
IDENTITY = Lam("x", Var("x"))


def apps(head: Term, *args: Term) -> Term:
    """Curried application ``head a1 ... an``."""
    for a in args:
        head = App(head, a)
    return head


def lams(binders, body: Term) -> Term:
    for b in reversed(list(binders)):
        body = Lam(b, body)
    return body


def mk_pair(a: Term, b: Term) -> Term:
    return App(App(PAIR, a), b)


def unwind(t: Term) -> tuple[Term, list[Term]]:
    """Split an application spine into its head and argument list."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def free_vars(t: Term) -> frozenset:
    return t.fv


def fresh_name(base: str, avoid) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute(t: Term, x: str, s: Term) -> Term:
    """Capture-avoiding substitution ``t[x := s]``."""
    if x not in t.fv:
        return t
    if isinstance(t, Var):
        return s
    if isinstance(t, App):
        return App(substitute(t.fun, x, s), substitute(t.arg, x, s))
    if isinstance(t, Lam):
        if t.binder in s.fv:
            new = fresh_name(t.binder, s.fv | t.body.fv | {x})
            body = substitute(t.body, t.binder, Var(new))
            return Lam(new, substitute(body, x, s))
        return Lam(t.binder, substitute(t.body, x, s))
    return t


def alpha_eq(a: Term, b: Term) -> bool:
    return _alpha(a, b, {}, {}, 0)


def _alpha(a, b, env_a, env_b, depth) -> bool:
    if isinstance(a, Var) and isinstance(b, Var):
        ia, ib = env_a.get(a.name), env_b.get(b.name)
        if ia is None and ib is None:
            return a.name == b.name
        return ia == ib
    if isinstance(a, Lam) and isinstance(b, Lam):
        return _alpha(a.body, b.body, {**env_a, a.binder: depth},
                      {**env_b, b.binder: depth}, depth + 1)
    if isinstance(a, App) and isinstance(b, App):
        return (_alpha(a.fun, b.fun, env_a, env_b, depth)
                and _alpha(a.arg, b.arg, env_a, env_b, depth))
    if isinstance(a, Const) and isinstance(b, Const):
        return type(a.lit) is type(b.lit) and a.lit == b.lit
    return False


# ---------- reduction ----------

class _Budget:
    __slots__ = ("left", "limit")

    def __init__(self, limit: int):
        self.left = self.limit = limit

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise DivergenceError(f"no normal form within {self.limit} reduction steps")


def _is_pair(t: Term):
    head, args = unwind(t)
    if isinstance(head, Const) and head.lit == "pair" and len(args) == 2:
        return args
    return None


def _whnf(t: Term, budget: _Budget) -> Term:
    stack: list[Term] = []
    while True:
        if isinstance(t, App):
            stack.append(t.arg)
            t = t.fun
        elif isinstance(t, Lam) and stack:
            budget.tick()
            t = substitute(t.body, t.binder, stack.pop())
        elif isinstance(t, Const) and t.lit == "id":
            budget.tick()
            t = IDENTITY
            if not stack:
                break
        elif isinstance(t, Const) and t.lit in ("fst", "snd") and stack:
            p = _whnf(stack[-1], budget)
            parts = _is_pair(p)
            if parts is None:
                stack[-1] = p
                break
            budget.tick()
            stack.pop()
            t = parts[0] if t.lit == "fst" else parts[1]
        else:
            break
    for a in reversed(stack):
        t = App(t, a)
    return t


def _nf(t: Term, budget: _Budget) -> Term:
    t = _whnf(t, budget)
    if isinstance(t, Lam):
        return Lam(t.binder, _nf(t.body, budget))
    head, args = unwind(t)
    return apps(head, *(_nf(a, budget) for a in args))


def _eta(t: Term) -> Term:
    if isinstance(t, Lam):
        body = _eta(t.body)
        if (isinstance(body, App) and body.arg == Var(t.binder)
                and t.binder not in body.fun.fv):
            return body.fun
        return Lam(t.binder, body)
    if isinstance(t, App):
        return App(_eta(t.fun), _eta(t.arg))
    return t


def normalize_term(t: Term, eta: bool = True, budget: int = DEFAULT_STEP_BUDGET) -> Term:
    """Normal-order beta(-eta) normal form.

    Besides beta, the reduction knows ``id`` (unfolded to ``\\x -> x``) and
    the projections ``fst (pair a b) = a``, ``snd (pair a b) = b``.
    Raises DivergenceError once more than ``budget`` steps were taken.
    """
    b = _Budget(budget)
    t = _nf(t, b)
    if not eta:
        return t
    while True:
        reduced = _eta(t)
        if reduced == t:
            return t
        t = _nf(reduced, b)


def is_normal(t: Term, eta: bool = True) -> bool:
    return normalize_term(t, eta) == t


def compose_nm(f: Term, g: Term, n: int, m: int, *, arity_cap: int = DEFAULT_ARITY_CAP,
               budget: int = DEFAULT_STEP_BUDGET) -> Term:
    """Generalized composition: ``\\a1..an b1..bm -> f a1..an (g b1..bm)``.

    With ``m == 0`` this plugs ``g`` itself into the (n+1)st argument of ``f``.
    The result is beta normalized.
    """
    if n < 0 or m < 0:
        raise ValueError("arities must be non-negative")
    if n + m > arity_cap:
        raise ArityCapExceeded(f"composition arity {n + m} exceeds cap {arity_cap}")
    avoid = set(f.fv | g.fv)
    xs, ys = [], []
    for i in range(n):
        xs.append(fresh_name(f"x{i + 1}", avoid))
        avoid.add(xs[-1])
    for i in range(m):
        ys.append(fresh_name(f"y{i + 1}", avoid))
        avoid.add(ys[-1])
    inner = apps(g, *map(Var, ys))
    body = apps(f, *map(Var, xs), inner)
    return normalize_term(lams(xs + ys, body), eta=False, budget=budget)


_KEYWORDS = PRIMITIVES | {"pure", "fmap", "liftA"}


def compact_names(t: Term) -> Term:
    """Rename binders to a, b, c, ... in binding order (presentation only)."""
    taken = set(t.fv)
    supply = _name_supply(taken)

    def go(t, ren):
        if isinstance(t, Var):
            return Var(ren.get(t.name, t.name))
        if isinstance(t, Lam):
            new = next(supply)
            return Lam(new, go(t.body, {**ren, t.binder: new}))
        if isinstance(t, App):
            return App(go(t.fun, ren), go(t.arg, ren))
        return t

    return go(t, {})


def _name_supply(taken):
    letters = "abcdeghijklmnopqrstvwxyz"
    suffix = ""
    n = 0
    while True:
        for c in letters:
            name = c + suffix
            if name not in taken and name not in _KEYWORDS:
                yield name
        n += 1
        suffix = str(n)
