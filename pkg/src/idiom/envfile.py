"""Environment files for ``idiom eval``: one ``name = literal`` binding per line.

Literal syntax depends on the instance::

    identity   5
    option     none | some 5
    list       [1, 2, 3]
    writer     ("log", 5)

Blank lines and ``--`` or ``#`` comments are ignored.
"""

from __future__ import annotations

import json
import re

from .oracle import Identity, IntVal, ListEff, Option, Writer

_BINDING = re.compile(r"\s*([a-z][A-Za-z0-9']*)\s*=\s*(.*?)\s*")
_INT = r"-?[0-9]+"
_STRING = r'"(?:[^"\\]|\\.)*"'
_WRITER = re.compile(rf"\(\s*({_STRING})\s*,\s*({_INT})\s*\)")
_COMMENT = re.compile(rf"({_STRING})|(?:--|#).*$")  # strings are kept intact


class EnvFileError(ValueError):
    pass


def parse_literal(text: str, instance: str):
    text = text.strip()
    if instance == "identity" and re.fullmatch(_INT, text):
        return Identity(IntVal(int(text)))
    if instance == "option":
        if text == "none":
            return Option(None)
        m = re.fullmatch(rf"some\s+({_INT})", text)
        if m:
            return Option(IntVal(int(m.group(1))))
    if instance == "list":
        m = re.fullmatch(r"\[(.*)\]", text)
        if m:
            items = [s.strip() for s in m.group(1).split(",")] if m.group(1).strip() else []
            if all(re.fullmatch(_INT, s) for s in items):
                return ListEff(tuple(IntVal(int(s)) for s in items))
    if instance == "writer":
        m = _WRITER.fullmatch(text)
        if m:
            return Writer(json.loads(m.group(1)), IntVal(int(m.group(2))))
    raise EnvFileError(f"not a {instance} literal: {text!r}")


def parse_env_file(text: str, instance: str) -> dict:
    env = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = _COMMENT.sub(lambda m: m.group(1) or "", line)
        if not stripped.strip():
            continue
        m = _BINDING.fullmatch(stripped)
        if m is None:
            raise EnvFileError(f"line {lineno}: expected 'name = literal'")
        try:
            env[m.group(1)] = parse_literal(m.group(2), instance)
        except EnvFileError as exc:
            raise EnvFileError(f"line {lineno}: {exc}") from None
    return env
