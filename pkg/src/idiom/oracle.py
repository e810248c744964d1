"""Concrete applicative instances and an evaluator used as independent semantics.

The evaluator only knows ``pure`` and ``<*>`` for each instance; ``fmap`` and
``liftA`` are first unfolded into those, so it shares no rewriting logic with
the normalizer beyond :func:`expand_lift`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Union

from .errors import StuckError, UnboundEffectVar
from .expr import Ap, ApExpr, EffectVar, Fmap, LiftA, Pure
from .normalizer import expand_lift
from .terms import App, Const, Lam, Term, Var, apps, mk_pair

# ---------- values ----------


@dataclass(frozen=True)
class IntVal:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class PairVal:
    first: "Value"
    second: "Value"

    def __str__(self):
        return f"({self.first}, {self.second})"


@dataclass(frozen=True)
class Closure:
    binder: str
    body: Term
    env: tuple  # sorted (name, Value) pairs, restricted to free variables

    def __str__(self):
        return "<closure>"


@dataclass(frozen=True)
class Prim:
    """A primitive constant, possibly partially applied."""

    name: str
    args: tuple = ()

    def __str__(self):
        return "<primitive>"


@dataclass(frozen=True)
class Native:
    """A host function standing in for a symbolic head such as ``f``."""

    name: str
    arity: int
    fn: Callable = field(compare=False, repr=False)
    args: tuple = ()

    def __str__(self):
        return "<function>"


Value = Union[IntVal, PairVal, Closure, Prim, Native]

_PRIM_ARITY = {"id": 1, "fst": 1, "snd": 1, "neg": 1, "pair": 2, "add": 2}


def eval_term(t: Term, env: dict | None = None) -> Value:
    """Call-by-value evaluation of a closed-under-``env`` lambda term."""
    env = env or {}
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise StuckError(f"unbound term variable {t.name!r}") from None
    if isinstance(t, Const):
        if isinstance(t.lit, int):
            return IntVal(t.lit)
        return Prim(t.lit)
    if isinstance(t, Lam):
        captured = tuple(sorted((k, env[k]) for k in t.fv if k in env))
        missing = [k for k in t.fv if k not in env]
        if missing:
            raise StuckError(f"unbound term variable {missing[0]!r}")
        return Closure(t.binder, t.body, captured)
    return apply_value(eval_term(t.fun, env), eval_term(t.arg, env))


def apply_value(f: Value, x: Value) -> Value:
    if isinstance(f, Closure):
        return eval_term(f.body, {**dict(f.env), f.binder: x})
    if isinstance(f, Prim):
        args = f.args + (x,)
        if len(args) < _PRIM_ARITY[f.name]:
            return Prim(f.name, args)
        return _run_prim(f.name, args)
    if isinstance(f, Native):
        args = f.args + (x,)
        if len(args) < f.arity:
            return Native(f.name, f.arity, f.fn, args)
        return f.fn(*args)
    raise StuckError(f"cannot apply non-function {f}")


def _run_prim(name, args):
    if name == "id":
        return args[0]
    if name == "pair":
        return PairVal(*args)
    if name in ("fst", "snd"):
        if not isinstance(args[0], PairVal):
            raise StuckError(f"{name} of non-pair {args[0]}")
        return args[0].first if name == "fst" else args[0].second
    if not all(isinstance(a, IntVal) for a in args):
        raise StuckError(f"{name} of non-integer argument")
    if name == "neg":
        return IntVal(-args[0].value)
    return IntVal(args[0].value + args[1].value)


# ---------- instances ----------


@dataclass(frozen=True)
class Identity:
    value: Value

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Option:
    value: Value | None  # None means absent

    def __str__(self):
        return "none" if self.value is None else f"some {self.value}"


@dataclass(frozen=True)
class ListEff:
    items: tuple

    def __str__(self):
        return "[" + ", ".join(map(str, self.items)) + "]"


@dataclass(frozen=True)
class Writer:
    log: str
    value: Value

    def __str__(self):
        return f"({_quote(self.log)}, {self.value})"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


Effect = Union[Identity, Option, ListEff, Writer]


def _option_ap(f: Option, x: Option) -> Option:
    if f.value is None or x.value is None:
        return Option(None)
    return Option(apply_value(f.value, x.value))


@dataclass(frozen=True)
class Instance:
    name: str
    pure_v: Callable
    ap_v: Callable


INSTANCES = {
    "identity": Instance(
        "identity", Identity,
        lambda f, x: Identity(apply_value(f.value, x.value))),
    "option": Instance("option", Option, _option_ap),
    "list": Instance(
        "list", lambda v: ListEff((v,)),
        lambda fs, xs: ListEff(tuple(apply_value(f, x) for f in fs.items for x in xs.items))),
    "writer": Instance(
        "writer", lambda v: Writer("", v),
        lambda f, x: Writer(f.log + x.log, apply_value(f.value, x.value))),
}


def eval_expr(e: ApExpr, inst: Instance | str, env: dict, term_env: dict | None = None):
    """Evaluate ``e`` in ``inst`` with effect variables bound by ``env``."""
    if isinstance(inst, str):
        inst = INSTANCES[inst]
    term_env = term_env or {}

    def go(e):
        if isinstance(e, EffectVar):
            try:
                return env[e.name]
            except KeyError:
                raise UnboundEffectVar(f"effect variable {e.name!r} is unbound") from None
        if isinstance(e, Pure):
            return inst.pure_v(eval_term(e.term, term_env))
        if isinstance(e, Ap):
            f = go(e.fun)
            return inst.ap_v(f, go(e.arg))
        if isinstance(e, Fmap):
            return go(Ap(Pure(e.term), e.arg))
        if isinstance(e, LiftA):
            return go(expand_lift(e))
        raise TypeError(f"not an applicative expression: {e!r}")

    return go(e)


# ---------- simple types ----------

INT = "int"


def fn(*types):
    """``fn(a, b, c)`` is the curried type a -> b -> c."""
    t = types[-1]
    for a in reversed(types[:-1]):
        t = ("->", a, t)
    return t


def pair_t(a, b):
    return ("*", a, b)


PAIR = pair_t(INT, INT)


def show_type(t) -> str:
    if t == INT:
        return "int"
    op, a, b = t
    if op == "*":
        return f"({show_type(a)}, {show_type(b)})"
    left = show_type(a)
    if isinstance(a, tuple) and a[0] == "->":
        left = f"({left})"
    return f"{left} -> {show_type(b)}"


def _arg_types(t):
    out = []
    while isinstance(t, tuple) and t[0] == "->":
        out.append(t[1])
        t = t[2]
    return out, t


def sample_value(t, rng: random.Random, name: str = "h") -> Value:
    """A random value of simple type ``t``; functions become order-sensitive natives."""
    if t == INT:
        return IntVal(rng.randint(-5, 9))
    if t[0] == "*":
        return PairVal(sample_value(t[1], rng, name), sample_value(t[2], rng, name))
    params, result = _arg_types(t)
    coeffs = [rng.randint(1, 7) for _ in params]
    offset = rng.randint(-3, 3)

    def run(*xs):
        acc = offset
        for c, x in zip(coeffs, xs):
            acc = acc * 11 + c * _fold(x)
        return _shape(result, acc)

    return Native(f"{name}{coeffs}{offset}", len(params), run)


def _fold(v: Value) -> int:
    if isinstance(v, IntVal):
        return v.value
    if isinstance(v, PairVal):
        return 13 * _fold(v.first) + _fold(v.second)
    raise StuckError(f"native function received {v}")


def _shape(t, acc: int):
    if t == INT:
        return IntVal(acc)
    return PairVal(_shape(t[1], acc), _shape(t[2], acc + 1))


def sample_effect(inst: str, t, rng: random.Random, name: str, list_room: list | None = None):
    """Random effect of element type ``t``.  ``list_room`` bounds list products."""
    if inst == "identity":
        return Identity(sample_value(t, rng, name))
    if inst == "option":
        return Option(sample_value(t, rng, name) if rng.random() < 0.85 else None)
    if inst == "writer":
        return Writer(f"{name}{rng.randint(0, 9)};", sample_value(t, rng, name))
    if inst == "list":
        room = list_room[0] if list_room else 4
        r = rng.random()
        size = 0 if r < 0.08 else 2 if (r < 0.55 and room >= 2) else 1
        if list_room and size:
            list_room[0] //= size
        return ListEff(tuple(sample_value(t, rng, name) for _ in range(size)))
    raise KeyError(inst)


def sample_env(effects: dict, terms: dict, inst: str, rng: random.Random,
               list_cap: int = 64):
    """Random environments for effect variables and free term variables."""
    room = [list_cap]
    env = {n: sample_effect(inst, t, rng, n, room) for n, t in sorted(effects.items())}
    term_env = {n: sample_value(t, rng, n) for n, t in sorted(terms.items())}
    return env, term_env


# ---------- typed random expressions ----------


@dataclass(frozen=True)
class TypedGenSpec:
    max_depth: int = 3
    max_arity: int = 3
    seed: int = 0
    term_depth: int = 2
    max_leaves: int = 6


@dataclass
class GenCase:
    expr: ApExpr
    type: object
    effects: dict  # effect variable -> element type
    terms: dict    # free term variable -> type


EFFECT_TYPES = (INT, PAIR, fn(INT, INT))
_ARG_TYPES = (INT, INT, PAIR)
_BINDERS = "abcdehkmnpqrst"
_FREE_INTS = ("x", "y", "z")


class Generator:
    """Simply-typed random applicative expressions, deterministic in the seed."""

    def __init__(self, spec: TypedGenSpec):
        if spec.max_arity > 4:
            raise ValueError("max_arity is limited to 4")
        self.spec = spec
        self.rng = random.Random(spec.seed)
        self.generated = 0
        self.with_effects = 0

    @property
    def effect_rate(self) -> float:
        """Observed fraction of generated expressions mentioning an effect variable."""
        return self.with_effects / self.generated if self.generated else 0.0

    def case(self, result_type=None) -> GenCase:
        rng = self.rng
        self._effects: dict = {}
        self._terms: dict = {}
        self._leaves = self.spec.max_leaves
        t = result_type or rng.choice((INT, INT, PAIR))
        e = self._expr(t, self.spec.max_depth)
        self.generated += 1
        if self._effects:
            self.with_effects += 1
        return GenCase(e, t, dict(self._effects), dict(self._terms))

    def _expr(self, t, depth) -> ApExpr:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.25:
            if t in EFFECT_TYPES and self._leaves > 0 and rng.random() < 0.7:
                return self._effect_var(t)
            return Pure(self._term(t, [], self.spec.term_depth))
        kind = rng.choice(("ap", "fmap", "lift", "lift"))
        if kind == "ap":
            s = rng.choice(_ARG_TYPES)
            return Ap(self._expr(fn(s, t), depth - 1), self._expr(s, depth - 1))
        if kind == "fmap":
            s = rng.choice(_ARG_TYPES)
            return Fmap(self._term(fn(s, t), [], self.spec.term_depth), self._expr(s, depth - 1))
        n = rng.randint(0, self.spec.max_arity)
        ss = [rng.choice(_ARG_TYPES) for _ in range(n)]
        head = self._term(fn(*ss, t), [], self.spec.term_depth)
        return LiftA(n, head, tuple(self._expr(s, depth - 1) for s in ss))

    def _effect_var(self, t) -> EffectVar:
        self._leaves -= 1
        same = [n for n, ty in self._effects.items() if ty == t]
        if same and self.rng.random() < 0.3:
            return EffectVar(self.rng.choice(same))
        i = len(self._effects)
        name = "uvw"[i % 3] + (str(i // 3) if i >= 3 else "")
        self._effects[name] = t
        return EffectVar(name)

    def _fresh(self, ctx) -> str:
        used = {n for n, _ in ctx}
        for b in _BINDERS:
            if b not in used:
                return b
        return f"b{len(ctx)}"

    def _term(self, t, ctx, depth) -> Term:
        rng = self.rng
        if t == INT:
            options = [lambda: Const(rng.randint(0, 9))]
            options += [lambda n=n: Var(n) for n, ty in ctx if ty == INT] * 2
            options.append(self._free_int)
            if depth > 0:
                options += [
                    lambda: apps(Const("add"), self._term(INT, ctx, depth - 1),
                                 self._term(INT, ctx, depth - 1)),
                    lambda: App(Const("neg"), self._term(INT, ctx, depth - 1)),
                    lambda: App(Const(rng.choice(("fst", "snd"))),
                                self._term(PAIR, ctx, depth - 1)),
                    lambda: App(self._term(fn(INT, INT), ctx, depth - 1),
                                self._term(INT, ctx, depth - 1)),
                ]
            return rng.choice(options)()
        if t[0] == "*":
            pairs = [n for n, ty in ctx if ty == t]
            if pairs and rng.random() < 0.4:
                return Var(rng.choice(pairs))
            return mk_pair(self._term(t[1], ctx, depth - 1), self._term(t[2], ctx, depth - 1))
        _, a, b = t
        r = rng.random()
        if a == b and r < 0.1:
            return Const("id")
        if t == fn(INT, INT) and r < 0.25:
            return rng.choice((App(Const("add"), self._term(INT, ctx, 0)), Const("neg")))
        if t == fn(INT, INT, INT) and r < 0.3:
            return Const("add")
        if t == fn(INT, INT, PAIR) and r < 0.3:
            return Const("pair")
        x = self._fresh(ctx)
        return Lam(x, self._term(b, ctx + [(x, a)], depth))

    def _free_int(self) -> Term:
        name = self.rng.choice(_FREE_INTS)
        self._terms[name] = INT
        return Var(name)


def generate(spec: TypedGenSpec) -> ApExpr:
    return Generator(spec).case().expr


def generate_case(spec: TypedGenSpec) -> GenCase:
    return Generator(spec).case()

