"""Executable catalogue of applicative and multifunctor laws.

Each law is checked twice: symbolically, by comparing canonical forms, and
semantically, by evaluating both sides in every oracle instance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from .dsl import parse_expr, parse_term
from .expr import ApExpr, EffectVar, LiftA, expr_alpha_eq, map_terms
from .normalizer import (DESUGAR_LAWS, DerivationTrace, Equivalence, Settings, canonicalize,
                         desugar, equivalent, expand_lift)
from .oracle import INSTANCES, INT, eval_expr, fn, sample_env
from .terms import IDENTITY, Var, alpha_eq, apps, lams, normalize_term


@dataclass(frozen=True)
class LawCase:
    name: str
    lhs_text: str
    rhs_text: str
    source: str
    effects: dict = field(default_factory=dict, compare=False)  # effect var -> element type
    terms: dict = field(default_factory=dict, compare=False)    # free term var -> type

    @cached_property
    def lhs(self) -> ApExpr:
        return parse_expr(self.lhs_text)

    @cached_property
    def rhs(self) -> ApExpr:
        return parse_expr(self.rhs_text)


@dataclass
class LawResult:
    case: LawCase
    equivalence: Equivalence
    oracle_ok: bool | None = None
    oracle_checks: int = 0
    failure: str = ""

    @property
    def ok(self) -> bool:
        return self.equivalence.equal and self.oracle_ok is not False

    @property
    def verdict(self) -> str:
        return self.equivalence.verdict

    @property
    def steps(self) -> int:
        return (len(self.equivalence.left_trace.steps)
                + len(self.equivalence.right_trace.steps))


def oracle_agree(lhs: ApExpr, rhs: ApExpr, effects: dict, terms: dict, samples: int,
                 seed: int = 0, instances=tuple(INSTANCES)):
    """Evaluate both sides on ``samples`` random environments per instance.

    Returns ``(ok, checks, message)``.
    """
    rng = random.Random(seed)
    checks = 0
    for inst in instances:
        for _ in range(samples):
            env, term_env = sample_env(effects, terms, inst, rng)
            a = eval_expr(lhs, inst, env, term_env)
            b = eval_expr(rhs, inst, env, term_env)
            checks += 1
            if a != b:
                shown = ", ".join(f"{k} = {v}" for k, v in env.items())
                return False, checks, f"{inst}: {a} /= {b} with {shown}"
    return True, checks, ""


def check_law(case: LawCase, eta: bool = True, oracle_samples: int = 0,
              seed: int = 0) -> LawResult:
    eq = equivalent(case.lhs, case.rhs, settings=Settings(eta=eta))
    result = LawResult(case, eq)
    if not eq.equal:
        result.failure = f"{eq.left} /= {eq.right}"
    if oracle_samples:
        ok, n, msg = oracle_agree(case.lhs, case.rhs, case.effects, case.terms,
                                  oracle_samples, seed)
        result.oracle_ok, result.oracle_checks = ok, n
        result.failure = result.failure or msg
    return result


# ---------- corpus ----------

I2 = fn(INT, INT)
I3 = fn(INT, INT, INT)
I4 = fn(INT, INT, INT, INT)
COMP = "(\\c d e -> c (d e))"


def _arity_fn(n):
    return fn(*([INT] * (n + 1)))


def _ints(*names):
    return {n: INT for n in names}


APPLICATIVE = [
    LawCase("identity", "pure id <*> u", "u", "applicative", _ints("u")),
    LawCase("composition", "pure (\\f g x -> f (g x)) <*> u <*> v <*> w",
            "u <*> (v <*> w)", "applicative", {"u": I2, "v": I2, "w": INT}),
    LawCase("homomorphism", "pure f <*> pure x", "pure (f x)", "applicative",
            terms={"f": I2, "x": INT}),
    LawCase("interchange", "u <*> pure x", "pure (\\f -> f x) <*> u", "applicative",
            {"u": I2}, {"x": INT}),
]

DERIVED = [
    LawCase("second-functor-law", "fmap f (fmap g u)", "fmap (\\x -> f (g x)) u", "functor",
            _ints("u"), {"f": I2, "g": I2}),
    LawCase("fmap-via-ap", "fmap f u", "pure f <*> u", "functor", _ints("u"), {"f": I2}),
    LawCase("liftA2-via-ap", "liftA2 f u v", "pure f <*> u <*> v", "interdefinable",
            _ints("u", "v"), {"f": I3}),
    LawCase("ap-via-liftA2", "h <*> u", "liftA2 (\\f x -> f x) h u", "interdefinable",
            {"h": I2, "u": INT}),
]

# the point-free laws get one trailing effect argument so that arities match
TRUNCATED = [
    LawCase("trunc-homomorphism-1", "liftA1 f (liftA0 x)", "liftA0 (f x)", "truncated",
            terms={"f": I2, "x": INT}),
    LawCase("trunc-homomorphism-2", "liftA2 f (liftA0 x) v", "liftA1 (f x) v", "truncated",
            _ints("v"), {"f": I3, "x": INT}),
    LawCase("trunc-exchange", "liftA2 f u (liftA0 y)", "liftA1 (\\x -> f x y) u",
            "truncated", _ints("u"), {"f": I3, "y": INT}),
    LawCase("trunc-functor-left", "liftA2 f (liftA1 g u) v", f"liftA2 ({COMP} f g) u v",
            "truncated", _ints("u", "v"), {"f": I3, "g": I2}),
    LawCase("trunc-functor-right", "liftA2 f u (liftA1 h v)",
            f"liftA2 (\\x -> {COMP} (f x) h) u v", "truncated",
            _ints("u", "v"), {"f": I3, "h": I2}),
    LawCase("trunc-fmap-of-lift2", "liftA1 f (liftA2 g u v)",
            f"liftA2 (\\x -> {COMP} f (g x)) u v", "truncated",
            _ints("u", "v"), {"f": I2, "g": I3}),
    LawCase("trunc-assoc-left", "liftA2 f (liftA2 g u v) w",
            "liftA2 (\\x (y, z) -> f (g x y) z) u (liftA2 (\\a b -> (a, b)) v w)",
            "truncated", _ints("u", "v", "w"), {"f": I3, "g": I3}),
    LawCase("trunc-assoc-right", "liftA2 f u (liftA2 g v w)",
            f"liftA2 (\\(x, y) -> {COMP} (f x) (g y)) (liftA2 (\\a b -> (a, b)) u v) w",
            "truncated", _ints("u", "v", "w"), {"f": I3, "g": I3}),
]


def _pure_argument_cases():
    out = []
    for n in range(4):
        us = [f"u{i}" for i in range(1, n + 1)]
        xs = [f"a{i}" for i in range(1, n + 1)]
        lhs = " ".join([f"liftA{n + 1} f", *us, "(pure x)"])
        if n == 0:
            lhs, rhs = "fmap f (pure x)", "pure (f x)"
        else:
            rhs = " ".join([f"liftA{n} (\\{' '.join(xs)} -> f {' '.join(xs)} x)", *us])
        out.append(LawCase(f"pure-argument-{n}", lhs, rhs, "multifunctor",
                           _ints(*us), {"f": _arity_fn(n + 1), "x": INT}))
    for n in range(1, 4):
        xs = [f"x{i}" for i in range(1, n + 1)]
        lhs = " ".join([f"liftA{n} f", *(f"(pure {x})" for x in xs)])
        out.append(LawCase(f"iterated-pure-{n}", lhs, f"pure (f {' '.join(xs)})",
                           "multifunctor", {}, {"f": _arity_fn(n), **_ints(*xs)}))
    return out


MULTIFUNCTOR = [
    LawCase("multifunctor-identity", "liftA1 id u", "u", "multifunctor", _ints("u")),
    *_pure_argument_cases(),
    LawCase("pure-first-argument", "liftA3 f (pure x) v w", "liftA2 (f x) v w",
            "multifunctor", _ints("v", "w"), {"f": I4, "x": INT}),
]


def builtin_corpus() -> list[LawCase]:
    return APPLICATIVE + DERIVED + TRUNCATED + MULTIFUNCTOR


# ---------- composition law matrix ----------

def composition_sides(n: int, k: int, m: int):
    """Both sides of the composition law at shape (n, k, m), built literally.

    ``liftA(n+1+m) f us (liftAk g vs) ws`` and ``liftA(n+k+m) (f o g) us vs ws``.
    """
    us = tuple(EffectVar(f"u{i}") for i in range(1, n + 1))
    vs = tuple(EffectVar(f"v{i}") for i in range(1, k + 1))
    ws = tuple(EffectVar(f"w{i}") for i in range(1, m + 1))
    inner = LiftA(k, Var("g"), vs)
    lhs = LiftA(n + 1 + m, Var("f"), us + (inner,) + ws)
    xs = [f"a{i}" for i in range(1, n + 1)]
    ys = [f"b{i}" for i in range(1, k + 1)]
    head = lams(xs + ys, apps(Var("f"), *map(Var, xs), apps(Var("g"), *map(Var, ys))))
    rhs = LiftA(n + k + m, head, us + vs + ws)
    effects = _ints(*(e.name for e in us + vs + ws))
    terms = {"f": _arity_fn(n + 1 + m), "g": INT if k == 0 else _arity_fn(k)}
    return lhs, rhs, effects, terms


def _lam_text(binders, body: str) -> str:
    return f"(\\{' '.join(binders)} -> {body})" if binders else f"({body})"


def _law_shape(label: str, n: int, k: int):
    """The named special law at a matrix cell, stated in its own surface form."""
    us = [f"u{i}" for i in range(1, n + 1)]
    vs = [f"v{i}" for i in range(1, k + 1)]
    xs = [f"a{i}" for i in range(1, n + 1)]
    ys = [f"b{i}" for i in range(1, k + 1)]
    if label == "homomorphism":
        return "fmap f (pure g)", "pure (f g)"
    if label == "second functor law":
        return "fmap f (fmap g v1)", "fmap (\\x -> f (g x)) v1"
    if label == "pure argument":
        return (" ".join([f"liftA{n + 1} f", *us, "(pure g)"]),
                " ".join([f"liftA{n}", _lam_text(xs, " ".join(["f", *xs, "g"])), *us]))
    if label == "unary composition":
        inner = " ".join([f"liftA{k} g", *vs])
        body = "f (" + " ".join(["g", *ys]) + ")"
        return f"liftA1 f ({inner})", " ".join([f"liftA{k}", _lam_text(ys, body), *vs])
    raise ValueError(label)


def cell_laws(n: int, k: int, m: int) -> tuple:
    """Names of the special laws that a matrix cell instantiates."""
    if m:
        return ()
    names = []
    if (n, k) == (0, 0):
        names.append("homomorphism")
    if (n, k) == (0, 1):
        names.append("second functor law")
    if k == 0:
        names.append("pure argument")
    if n == 0:
        names.append("unary composition")
    return tuple(names)


@dataclass
class MatrixCell:
    n: int
    k: int
    m: int
    laws: tuple
    symbolic: bool
    oracle: bool
    named_law: bool | None  # None when the cell has no special name
    message: str = ""

    @property
    def label(self) -> str:
        if self.laws:
            return self.laws[0]
        return "frame" if self.m else "composition"

    @property
    def ok(self) -> bool:
        return self.symbolic and self.oracle and self.named_law is not False


def composition_matrix(max_n: int = 3, max_k: int = 3, max_m: int = 3, *, samples: int = 10,
                    eta: bool = True, seed: int = 0) -> list[MatrixCell]:
    """Check the composition law for every shape up to the given bounds.

    Both sides are unfolded into pure/<*> form first, so the symbolic check
    exercises re-deriving the multifunctor law from the applicative one.
    """
    if max(max_n, max_k, max_m) > 3:
        raise ValueError("matrix bounds are limited to 3")
    settings = Settings(eta=eta)
    cells = []
    for n in range(max_n + 1):
        for k in range(max_k + 1):
            for m in range(max_m + 1):
                lhs, rhs, effects, terms = composition_sides(n, k, m)
                left, _ = canonicalize(expand_lift(lhs), settings=settings)
                right, _ = canonicalize(expand_lift(rhs), settings=settings)
                symbolic = left.same_as(right)
                oracle, _, msg = oracle_agree(lhs, rhs, effects, terms, samples,
                                              seed=seed + 64 * n + 8 * k + m)
                laws = cell_laws(n, k, m)
                named = None
                for law in laws:
                    a, b = (canonicalize(parse_expr(s), settings=settings)[0]
                            for s in _law_shape(law, n, k))
                    named = (named is not False) and a.same_as(b) and a.same_as(left)
                cells.append(MatrixCell(n, k, m, laws, symbolic, oracle, named,
                                        msg or ("" if symbolic else f"{left} /= {right}")))
    return cells


# ---------- frame property ----------

def to_lift_root(e: ApExpr) -> LiftA:
    """Turn the root of ``e`` into a liftA node without touching its children."""
    if isinstance(e, LiftA):
        return e
    if isinstance(e, EffectVar):
        return LiftA(1, IDENTITY, (e,))
    _, steps = desugar(e)
    return steps[0].after  # desugaring rewrites the root first


def append_args(e: LiftA, extra) -> LiftA:
    return LiftA(e.arity + len(extra), e.head, e.args + tuple(extra))


# ---------- replay of hand derivations ----------

@dataclass(frozen=True)
class Derivation:
    name: str
    lhs: str
    rhs: str
    head: str  # expected canonical head
    steps: tuple  # (expression text, justification) as written by hand


DERIVATIONS = (
    Derivation("identity", "pure id <*> u", "u", "\\x -> x", (
        ("pure id <*> u", ""),
        ("liftA2 id (pure id) u", "definition"),
        ("liftA1 (id id) u", "composition"),
        ("liftA1 id u", ""),
        ("u", "identity"),
    )),
    Derivation("composition", "pure (\\f g x -> f (g x)) <*> u <*> v <*> w",
               "u <*> (v <*> w)", "\\a b c -> a (b c)", (
        ("pure (\\f g x -> f (g x)) <*> u <*> v <*> w", ""),
        ("liftA2 id (pure (\\f g x -> f (g x))) u <*> v <*> w", "definition"),
        ("liftA1 (\\f g x -> f (g x)) u <*> v <*> w", "composition"),
        ("liftA2 id (liftA1 (\\f g x -> f (g x)) u) v <*> w", "definition"),
        ("liftA2 (\\f g x -> f (g x)) u v <*> w", "composition"),
        ("liftA2 id (liftA2 (\\f g x -> f (g x)) u v) w", "definition"),
        ("liftA3 (\\f g x -> f (g x)) u v w", "composition"),
        ("liftA3 (\\f g x -> id f (id g x)) u v w", ""),
        ("liftA2 id u (liftA2 id v w)", "composition"),
        ("u <*> (v <*> w)", "definition"),
    )),
    Derivation("homomorphism", "pure f <*> pure x", "pure (f x)", "f x", (
        ("pure f <*> pure x", ""),
        ("liftA2 id (pure f) (pure x)", "definition"),
        ("liftA1 (id f) (pure x)", "composition"),
        ("liftA1 f (pure x)", ""),
        ("liftA0 (f x)", "composition"),
        ("pure (f x)", ""),
    )),
    Derivation("interchange", "u <*> pure x", "pure (\\f -> f x) <*> u", "\\f -> f x", (
        ("u <*> pure x", ""),
        ("liftA2 id u (liftA0 x)", "definition"),
        ("liftA1 (\\f -> f x) u", "composition"),
        ("pure (\\f -> f x) <*> u", "composition"),
    )),
)

REPLAY_LAWS = frozenset(DESUGAR_LAWS) | {"composition", "wrap-effectvar", "head-normalize"}


def _shape_key(e: ApExpr, eta: bool) -> ApExpr:
    desugared, _ = desugar(e)
    return map_terms(desugared, lambda t: normalize_term(t, eta))


@dataclass
class ReplayStep:
    text: str
    justification: str
    matched: str  # "lhs[i]" / "rhs[i]" or "" when no engine state matches


@dataclass
class ReplayReport:
    derivation: Derivation
    lhs_trace: DerivationTrace
    rhs_trace: DerivationTrace
    steps: list
    equal: bool
    head_ok: bool
    laws_ok: bool

    @property
    def ok(self) -> bool:
        return self.equal and self.head_ok and self.laws_ok

    @property
    def unmatched(self) -> list:
        return [s for s in self.steps if not s.matched]

    def render(self) -> str:
        d = self.derivation
        lines = [f"derivation {d.name}: {d.lhs}  ==  {d.rhs}"]
        width = max(len(s.text) for s in self.steps)
        for s in self.steps:
            just = f"by {s.justification}" if s.justification else ""
            where = s.matched or "unmatched"
            lines.append(f"  {s.text.ljust(width)}  {just:<16} [{where}]")
        lines.append("  engine lhs: " + ", ".join(self.lhs_trace.laws()))
        lines.append("  engine rhs: " + ", ".join(self.rhs_trace.laws()))
        lines.append(f"  canonical: {self.lhs_trace.final}")
        lines.append(f"  verdict: {'equal' if self.equal else 'distinct'}"
                     f"; head {'ok' if self.head_ok else 'MISMATCH'}"
                     f"; laws {'ok' if self.laws_ok else 'UNEXPECTED'}")
        return "\n".join(lines)


def replay(d: Derivation, eta: bool = True) -> ReplayReport:
    settings = Settings(eta=eta)
    lf, lt = canonicalize(parse_expr(d.lhs), settings=settings)
    rf, rt = canonicalize(parse_expr(d.rhs), settings=settings)
    states = [(f"lhs[{i}]", _shape_key(s, eta)) for i, s in enumerate(lt.states())]
    states += [(f"rhs[{i}]", _shape_key(s, eta)) for i, s in enumerate(rt.states())]
    steps = []
    for text, why in d.steps:
        key = _shape_key(parse_expr(text), eta)
        where = next((tag for tag, s in states if expr_alpha_eq(s, key)), "")
        steps.append(ReplayStep(text, why, where))
    head_ok = alpha_eq(lf.head, normalize_term(parse_term(d.head), eta))
    laws_ok = all(s.law in REPLAY_LAWS for s in lt.steps + rt.steps)
    return ReplayReport(d, lt, rt, steps, lf.same_as(rf), head_ok, laws_ok)


def replay_derivations(eta: bool = True) -> list[ReplayReport]:
    return [replay(d, eta) for d in DERIVATIONS]
