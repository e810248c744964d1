"""Newline-delimited JSON serialization of derivation traces.

One object per line::

    {"record": "header", "eta": true, "initial": "pure id <*> u"}
    {"record": "step", "index": 0, "law": "desugar-ap", "position": [], "before": ..., "after": ...}
    {"record": "final", "canonical": "liftA1 (\\a -> a) u", "head": "\\a -> a", "leaves": ["u"]}

Expressions are written in the DSL's concrete syntax with lambda binders
renamed to compact names, so files are stable byte for byte.
"""

from __future__ import annotations

import json
import re

from .dsl import parse_expr, parse_term, print_expr, print_term
from .expr import CanonicalForm, map_terms
from .normalizer import DerivationTrace, RewriteStep
from .terms import compact_names

_COMPOSITION = re.compile(r"composition\((\d+),(\d+),(\d+)\)")


def show(e) -> str:
    return print_expr(map_terms(e, compact_names))


def dumps_record(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False)


def trace_records(trace: DerivationTrace) -> list[dict]:
    out = [{"record": "header", "eta": trace.eta, "initial": show(trace.initial)}]
    for i, s in enumerate(trace.steps):
        out.append({"record": "step", "index": i, "law": s.label, "position": list(s.position),
                    "before": show(s.before), "after": show(s.after)})
    out.append(final_record(trace.final))
    return out


def final_record(form: CanonicalForm) -> dict:
    return {"record": "final", "canonical": str(form),
            "head": print_term(compact_names(form.head)), "leaves": list(form.leaves)}


def dump_trace(trace: DerivationTrace) -> str:
    return "".join(dumps_record(r) + "\n" for r in trace_records(trace))


def load_trace(text: str) -> DerivationTrace:
    """Rebuild a trace from its serialized form (binder names may differ)."""
    records = [json.loads(line) for line in text.splitlines() if line.strip()]
    if not records or records[0].get("record") != "header":
        raise ValueError("trace must start with a header record")
    header, final = records[0], records[-1]
    if final.get("record") != "final":
        raise ValueError("trace must end with a final record")
    steps = []
    for r in records[1:-1]:
        if r.get("record") != "step" or r["index"] != len(steps):
            raise ValueError(f"malformed step record {r}")
        law, params = r["law"], ()
        m = _COMPOSITION.fullmatch(law)
        if m:
            law, params = "composition", tuple(int(x) for x in m.groups())
        steps.append(RewriteStep(law, tuple(r["position"]), parse_expr(r["before"]),
                                 parse_expr(r["after"]), params))
    form = CanonicalForm(parse_term(final["head"]), tuple(final["leaves"]))
    return DerivationTrace(parse_expr(header["initial"]), tuple(steps), form, header["eta"])
