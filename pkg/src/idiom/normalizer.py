"""Rewrite engine: desugar to liftA form, fuse nested lifts, normalize the head.

Every rewrite is recorded as a :class:`RewriteStep` holding full before/after
snapshots, so a trace can be replayed and re-validated step by step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ArityCapExceeded, IdiomError
from .expr import (Ap, ApExpr, CanonicalForm, EffectVar, Fmap, LiftA, Pure, children,
                   expr_alpha_eq, replace_at, subexpr_at, with_children)
from .terms import (DEFAULT_ARITY_CAP, DEFAULT_STEP_BUDGET, ID, IDENTITY,
                    compose_nm, normalize_term)

DESUGAR_LAWS = ("desugar-pure", "desugar-fmap", "desugar-ap")


@dataclass(frozen=True)
class RewriteStep:
    law: str
    position: tuple
    before: ApExpr
    after: ApExpr
    params: tuple = ()  # (n, k, m) for composition

    @property
    def label(self) -> str:
        if self.law == "composition":
            return "composition({},{},{})".format(*self.params)
        return self.law


@dataclass(frozen=True)
class DerivationTrace:
    initial: ApExpr
    steps: tuple
    final: CanonicalForm
    eta: bool

    def laws(self) -> list[str]:
        return [s.label for s in self.steps]

    def states(self) -> list[ApExpr]:
        return [self.initial] + [s.after for s in self.steps]


@dataclass(frozen=True)
class Settings:
    eta: bool = True
    arity_cap: int = DEFAULT_ARITY_CAP
    step_budget: int = DEFAULT_STEP_BUDGET


# ---------- desugaring ----------

def _desugar_node(e: ApExpr):
    if isinstance(e, Pure):
        return "desugar-pure", LiftA(0, e.term, ())
    if isinstance(e, Fmap):
        return "desugar-fmap", LiftA(1, e.term, (e.arg,))
    if isinstance(e, Ap):
        return "desugar-ap", LiftA(2, ID, (e.fun, e.arg))
    return None


def _first_surface(e: ApExpr, path=()):
    if isinstance(e, (Pure, Fmap, Ap)):
        return path
    for i, c in enumerate(children(e)):
        p = _first_surface(c, path + (i,))
        if p is not None:
            return p
    return None


def desugar(e: ApExpr):
    """Rewrite pure/fmap/<*> into liftA0/liftA1/liftA2 id, outermost first."""
    steps = []
    while (pos := _first_surface(e)) is not None:
        law, node = _desugar_node(subexpr_at(e, pos))
        after = replace_at(e, pos, node)
        steps.append(RewriteStep(law, pos, e, after))
        e = after
    return e, steps


# ---------- fusion ----------

def _find_redex(e: ApExpr, rightmost: bool, path=()):
    if not isinstance(e, LiftA):
        return None
    order = range(e.arity - 1, -1, -1) if rightmost else range(e.arity)
    for i in order:
        found = _find_redex(e.args[i], rightmost, path + (i,))
        if found is not None:
            return found
    inner = [i for i, a in enumerate(e.args) if isinstance(a, LiftA)]
    if inner:
        return path, (inner[-1] if rightmost else inner[0])
    return None


def fuse_at(node: LiftA, i: int, settings: Settings = Settings()) -> tuple[LiftA, tuple]:
    """Absorb argument ``i`` (itself a liftA) of ``node`` into its head."""
    inner = node.args[i]
    if not isinstance(inner, LiftA):
        raise IdiomError(f"argument {i} is not a liftA node")
    n, k, m = i, inner.arity, node.arity - i - 1
    if n + k + m > settings.arity_cap:
        raise ArityCapExceeded(f"fused arity {n + k + m} exceeds cap {settings.arity_cap}")
    head = compose_nm(node.head, inner.head, n, k, arity_cap=settings.arity_cap,
                      budget=settings.step_budget)
    args = node.args[:i] + inner.args + node.args[i + 1:]
    return LiftA(n + k + m, head, args), (n, k, m)


def fuse(e: ApExpr, settings: Settings = Settings(), strategy: str = "leftmost"):
    """Apply the composition law until no liftA has a liftA argument."""
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    steps = []
    while (found := _find_redex(e, strategy == "rightmost")) is not None:
        pos, i = found
        node, params = fuse_at(subexpr_at(e, pos), i, settings)
        after = replace_at(e, pos, node)
        steps.append(RewriteStep("composition", pos, e, after, params))
        e = after
    return e, steps


# ---------- pipeline ----------

def canonicalize(e: ApExpr, eta: bool = True, *, settings: Settings | None = None,
                 strategy: str = "leftmost"):
    """Return ``(CanonicalForm, DerivationTrace)`` for ``e``."""
    if settings is None:
        settings = Settings(eta=eta)
    initial = e
    e, steps = desugar(e)
    e, fused = fuse(e, settings, strategy)
    steps += fused
    if isinstance(e, EffectVar):
        after = LiftA(1, IDENTITY, (e,))
        steps.append(RewriteStep("wrap-effectvar", (), e, after))
        e = after
    head = normalize_term(e.head, settings.eta, settings.step_budget)
    after = LiftA(e.arity, head, e.args)
    steps.append(RewriteStep("head-normalize", (), e, after))
    form = CanonicalForm(head, tuple(a.name for a in e.args))
    return form, DerivationTrace(initial, tuple(steps), form, settings.eta)


@dataclass(frozen=True)
class Equivalence:
    equal: bool
    left: CanonicalForm
    right: CanonicalForm
    left_trace: DerivationTrace = field(repr=False)
    right_trace: DerivationTrace = field(repr=False)

    @property
    def verdict(self) -> str:
        return "equal" if self.equal else "distinct"


def equivalent(a: ApExpr, b: ApExpr, eta: bool = True, *,
               settings: Settings | None = None) -> Equivalence:
    if settings is None:
        settings = Settings(eta=eta)
    fa, ta = canonicalize(a, settings=settings)
    fb, tb = canonicalize(b, settings=settings)
    return Equivalence(fa.same_as(fb), fa, fb, ta, tb)


def expand_lift(e: ApExpr) -> ApExpr:
    """Replace every liftA by pure and <*>: ``liftA(n+1) f us v = liftAn f us <*> v``."""
    if isinstance(e, LiftA):
        out = Pure(e.head)
        for a in e.args:
            out = Ap(out, expand_lift(a))
        return out
    return with_children(e, [expand_lift(c) for c in children(e)])


# ---------- replay ----------

def apply_law(step: RewriteStep, settings: Settings = Settings()) -> ApExpr:
    """Re-apply the law named by ``step`` to ``step.before``."""
    before = step.before
    node = subexpr_at(before, step.position)
    if step.law in DESUGAR_LAWS:
        result = _desugar_node(node)
        if result is None or result[0] != step.law:
            raise IdiomError(f"{step.law} does not apply at {list(step.position)}")
        return replace_at(before, step.position, result[1])
    if step.law == "composition":
        n, k, m = step.params
        if not (isinstance(node, LiftA) and node.arity == n + 1 + m
                and isinstance(node.args[n], LiftA) and node.args[n].arity == k):
            raise IdiomError(f"composition({n},{k},{m}) does not apply at {list(step.position)}")
        fused, _ = fuse_at(node, n, settings)
        return replace_at(before, step.position, fused)
    if step.law == "wrap-effectvar":
        if not isinstance(node, EffectVar):
            raise IdiomError("wrap-effectvar needs an effect variable")
        return replace_at(before, step.position, LiftA(1, IDENTITY, (node,)))
    if step.law == "head-normalize":
        if not isinstance(node, LiftA):
            raise IdiomError("head-normalize needs a liftA node")
        head = normalize_term(node.head, settings.eta, settings.step_budget)
        return replace_at(before, step.position, LiftA(node.arity, head, node.args))
    raise IdiomError(f"unknown law {step.law!r}")


def validate_trace(trace: DerivationTrace, settings: Settings | None = None) -> bool:
    """Check that every step re-validates and that the steps chain."""
    if settings is None:
        settings = Settings(eta=trace.eta)
    current = trace.initial
    for step in trace.steps:
        if not expr_alpha_eq(step.before, current):
            return False
        if not expr_alpha_eq(apply_law(step, settings), step.after):
            return False
        current = step.after
    final = trace.final.as_lift()
    return isinstance(current, LiftA) and expr_alpha_eq(current, final)

