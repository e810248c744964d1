"""Concrete syntax for applicative expressions (``.idm`` files).

Grammar::

    expr     := aexpr ('<*>' aexpr)*
    aexpr    := 'pure' termAtom | 'fmap' termAtom aexpr
              | 'liftA' NAT termAtom aexpr* | IDENT | '(' expr ')'
    term     := '\\' pat+ '->' term | termAtom+
    termAtom := IDENT | NAT | 'id' | 'fst' | 'snd' | 'add' | 'neg' | 'pair'
              | '(' term (',' term)? ')'
    pat      := IDENT | '(' IDENT ',' IDENT ')'

``liftA2`` is accepted as a fused spelling of ``liftA 2``; ``λ`` and ``⊛``
are aliases of ``\\`` and ``<*>``.  Comments run from ``--`` to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ArityCapExceeded, IdiomError
from .expr import Ap, ApExpr, EffectVar, Fmap, LiftA, Pure
from .terms import (DEFAULT_ARITY_CAP, FST, PRIMITIVES, SND, App, Const, Lam, Term, Var,
                    fresh_name, mk_pair, substitute, unwind)


@dataclass(frozen=True)
class SourceSpan:
    begin: int  # byte offsets into the UTF-8 input
    end: int
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


class ParseError(IdiomError):
    def __init__(self, message: str, span: SourceSpan, expected=()):
        self.message = message
        self.span = span
        self.expected = tuple(sorted(expected))
        text = f"{span}: {message}"
        if self.expected:
            text += " (expected " + ", ".join(self.expected) + ")"
        super().__init__(text)


class ArityMismatch(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<ap><\*>|⊛)
  | (?P<arrow>->)
  | (?P<lam>\\|λ)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
  | (?P<nat>[0-9]+)
  | (?P<ident>[a-z][A-Za-z0-9']*)
""", re.VERBOSE)

_EXPR_KEYWORDS = {"pure", "fmap", "liftA"}
_LIFT_RE = re.compile(r"liftA([0-9]+)")

# display names for the expected-token sets in error messages
_SHOW = {"ap": "'<*>'", "arrow": "'->'", "lam": "'\\'", "lparen": "'('", "rparen": "')'",
         "comma": "','", "nat": "number", "ident": "identifier", "eof": "end of input"}


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    byte_pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(byte_pos, byte_pos + len(text[pos].encode()), line,
                              pos - line_start + 1)
            raise ParseError(f"unexpected character {text[pos]!r}", span,
                             {"expression", "term"})
        lexeme = m.group()
        nbytes = len(lexeme.encode())
        kind = m.lastgroup
        if kind != "ws":
            span = SourceSpan(byte_pos, byte_pos + nbytes, line, pos - line_start + 1)
            if kind == "ident":
                if _LIFT_RE.fullmatch(lexeme):
                    kind = "liftn"
                elif lexeme in _EXPR_KEYWORDS or lexeme in PRIMITIVES:
                    kind = lexeme
            tokens.append(Token(kind, lexeme, span))
        for i, ch in enumerate(lexeme):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
        byte_pos += nbytes
    tokens.append(Token("eof", "", SourceSpan(byte_pos, byte_pos, line, pos - line_start + 1)))
    return tokens


_AEXPR_START = {"pure", "fmap", "liftA", "liftn", "ident", "lparen"}
_ATOM_START = {"ident", "nat", "lparen"} | PRIMITIVES


class _Parser:
    def __init__(self, text: str, arity_cap: int):
        self.tokens = tokenize(text)
        self.i = 0
        self.arity_cap = arity_cap

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, expected, what=None):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(what or f"unexpected {found}", t.span,
                         {_SHOW.get(k, f"'{k}'") for k in expected})

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail({kind})
        return self.advance()

    # applicative layer

    def expr(self) -> ApExpr:
        e = self.aexpr()
        while self.tok.kind == "ap":
            self.advance()
            e = Ap(e, self.aexpr())
        return e

    def aexpr(self) -> ApExpr:
        t = self.tok
        if t.kind == "pure":
            self.advance()
            return Pure(self.term_atom())
        if t.kind == "fmap":
            self.advance()
            f = self.term_atom()
            return Fmap(f, self.aexpr())
        if t.kind in ("liftA", "liftn"):
            self.advance()
            if t.kind == "liftA":
                n = int(self.expect("nat").text)
            else:
                n = int(_LIFT_RE.fullmatch(t.text).group(1))
            if n > self.arity_cap:
                raise ArityCapExceeded(f"{t.span}: liftA{n} exceeds arity cap {self.arity_cap}")
            head = self.term_atom()
            args = []
            while self.tok.kind in _AEXPR_START:
                args.append(self.aexpr())
            if len(args) != n:
                raise ArityMismatch(f"liftA{n} applied to {len(args)} argument(s)", t.span,
                                    {_SHOW["ident"], "'('"} if len(args) < n else {"'<*>'", "')'"})
            return LiftA(n, head, tuple(args))
        if t.kind == "ident":
            self.advance()
            return EffectVar(t.text)
        if t.kind == "lparen":
            self.advance()
            e = self.expr()
            self.expect("rparen")
            return e
        self.fail(_AEXPR_START - {"liftn"})

    # term layer

    def term(self) -> Term:
        if self.tok.kind == "lam":
            self.advance()
            pats = [self.pattern()]
            while self.tok.kind != "arrow":
                if self.tok.kind not in ("ident", "lparen"):
                    self.fail({"ident", "lparen", "arrow"})
                pats.append(self.pattern())
            self.advance()
            body = self.term()
            return _build_lambda(pats, body)
        head = self.term_atom()
        while self.tok.kind in _ATOM_START:
            head = App(head, self.term_atom())
        return head

    def pattern(self):
        if self.tok.kind == "ident":
            return self.advance().text
        self.expect("lparen")
        a = self.expect("ident").text
        self.expect("comma")
        b = self.expect("ident").text
        self.expect("rparen")
        return (a, b)

    def term_atom(self) -> Term:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return Var(t.text)
        if t.kind == "nat":
            self.advance()
            return Const(int(t.text))
        if t.kind in PRIMITIVES:
            self.advance()
            return Const(t.kind)
        if t.kind == "lparen":
            self.advance()
            a = self.term()
            if self.tok.kind == "comma":
                self.advance()
                b = self.term()
                self.expect("rparen")
                return mk_pair(a, b)
            self.expect("rparen")
            return a
        self.fail(_ATOM_START)


def _build_lambda(pats, body: Term) -> Term:
    for p in reversed(pats):
        if isinstance(p, str):
            body = Lam(p, body)
        else:
            x, y = p
            v = fresh_name("p", body.fv | {x, y})
            body = substitute(body, x, App(FST, Var(v)))
            body = substitute(body, y, App(SND, Var(v)))
            body = Lam(v, body)
    return body


def parse_expr(text: str, arity_cap: int = DEFAULT_ARITY_CAP) -> ApExpr:
    p = _Parser(text, arity_cap)
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail({"ap", "eof"})
    return e


def parse_term(text: str) -> Term:
    p = _Parser(text, DEFAULT_ARITY_CAP)
    t = p.term()
    if p.tok.kind != "eof":
        p.fail({"eof"})
    return t


# ---------- printing ----------

def print_term(t: Term) -> str:
    if isinstance(t, Lam):
        binders = []
        while isinstance(t, Lam):
            binders.append(t.binder)
            t = t.body
        return "\\" + " ".join(binders) + " -> " + print_term(t)
    if isinstance(t, App):
        head, args = unwind(t)
        if _is_pair_head(head) and len(args) >= 2:
            parts = [f"({print_term(args[0])}, {print_term(args[1])})"]
            args = args[2:]
        else:
            parts = [_atom(head)]
        parts.extend(_atom(a) for a in args)
        return " ".join(parts)
    return _atom(t)


def _is_pair_head(t: Term) -> bool:
    return isinstance(t, Const) and t.lit == "pair"


def _atom(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        if isinstance(t.lit, int) and t.lit < 0:
            return f"(neg {-t.lit})"
        return str(t.lit)
    if isinstance(t, App):
        head, args = unwind(t)
        if _is_pair_head(head) and len(args) == 2:
            return print_term(t)
    return f"({print_term(t)})"


def print_expr(e: ApExpr) -> str:
    if isinstance(e, Ap):
        right = print_expr(e.arg)
        if isinstance(e.arg, Ap):
            right = f"({right})"
        return f"{print_expr(e.fun)} <*> {right}"
    if isinstance(e, EffectVar):
        return e.name
    if isinstance(e, Pure):
        return f"pure {_atom(e.term)}"
    if isinstance(e, Fmap):
        return f"fmap {_atom(e.term)} {_arg(e.arg)}"
    if isinstance(e, LiftA):
        return " ".join([f"liftA{e.arity}", _atom(e.head)] + [_arg(a) for a in e.args])
    raise TypeError(f"not an applicative expression: {e!r}")


def _arg(e: ApExpr) -> str:
    if isinstance(e, EffectVar):
        return e.name
    return f"({print_expr(e)})"
