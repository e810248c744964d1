"""Command-line entry point.

Exit codes: 0 success (or ``equal``), 1 ``distinct`` / failed checks,
2 usage, parse or evaluation errors, 3 divergence or arity cap exceeded.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from .dsl import ParseError, parse_expr
from .errors import ArityCapExceeded, DivergenceError, IdiomError
from .laws import builtin_corpus, check_law, composition_matrix
from .normalizer import Settings, canonicalize, equivalent, expand_lift
from .oracle import INSTANCES, Generator, TypedGenSpec, eval_expr, sample_env
from .envfile import EnvFileError, parse_env_file
from .terms import DEFAULT_ARITY_CAP, DEFAULT_STEP_BUDGET
from .traces import dump_trace, dumps_record, final_record, show, trace_records


@dataclass(frozen=True)
class CliConfig:
    eta: bool = True
    arity_cap: int = DEFAULT_ARITY_CAP
    step_budget: int = DEFAULT_STEP_BUDGET
    seed: int = 0
    output: str = "text"

    @property
    def settings(self) -> Settings:
        return Settings(self.eta, self.arity_cap, self.step_budget)


class _Out:
    def __init__(self, config: CliConfig, stream):
        self.config = config
        self.stream = stream
        if self.machine:
            self.record({"record": "config", **asdict(config)})

    @property
    def machine(self) -> bool:
        return self.config.output == "machine"

    def record(self, rec: dict):
        self.stream.write(dumps_record(rec) + "\n")

    def text(self, line: str = ""):
        if not self.machine:
            self.stream.write(line + "\n")


def _read_source(arg: str) -> str:
    if arg.endswith(".idm") or ("/" in arg and len(arg) < 4096 and Path(arg).is_file()):
        return Path(arg).read_text(encoding="utf-8")
    return arg


def _parse(arg: str, config: CliConfig):
    source = _read_source(arg)
    try:
        return parse_expr(source, arity_cap=config.arity_cap)
    except ParseError as exc:
        exc.source = source
        raise


def _emit_trace(out: _Out, trace, tag: str = ""):
    if out.machine:
        for rec in trace_records(trace):
            out.record({**rec, "side": tag} if tag else rec)
        return
    if tag:
        out.text(f"-- trace ({tag})")
    width = max((len(s.label) for s in trace.steps), default=0)
    out.text(f"   {show(trace.initial)}")
    for i, s in enumerate(trace.steps):
        pos = "/".join(map(str, s.position)) or "."
        out.text(f"{i:>2} {s.label.ljust(width)}  @{pos:<6} {show(s.after)}")


def cmd_normalize(args, config, out):
    form, trace = canonicalize(_parse(args.expr, config), settings=config.settings)
    if args.trace:
        _emit_trace(out, trace)
    if out.machine:
        if not args.trace:
            out.record(final_record(form))
    else:
        out.text(str(form))
    return 0


def cmd_equiv(args, config, out):
    a, b = _parse(args.left, config), _parse(args.right, config)
    result = equivalent(a, b, settings=config.settings)
    if args.trace:
        _emit_trace(out, result.left_trace, "left")
        _emit_trace(out, result.right_trace, "right")
    if out.machine:
        out.record({"record": "verdict", "verdict": result.verdict,
                    "left": str(result.left), "right": str(result.right)})
    out.text(result.verdict)
    out.text(f"  left:  {result.left}")
    out.text(f"  right: {result.right}")
    return 0 if result.equal else 1


def cmd_eval(args, config, out):
    e = _parse(args.expr, config)
    env = parse_env_file(Path(args.env).read_text(encoding="utf-8"), args.instance) \
        if args.env else {}
    value = eval_expr(e, args.instance, env)
    if out.machine:
        out.record({"record": "value", "instance": args.instance, "value": str(value)})
    else:
        out.text(str(value))
    return 0


def cmd_expand(args, config, out):
    e = expand_lift(_parse(args.expr, config))
    if out.machine:
        out.record({"record": "expansion", "expr": show(e)})
    else:
        out.text(show(e))
    return 0


def cmd_laws(args, config, out):
    failed = 0
    emit = Path(args.emit_traces) if args.emit_traces else None
    if emit:
        emit.mkdir(parents=True, exist_ok=True)
    for case in builtin_corpus():
        r = check_law(case, eta=config.eta, oracle_samples=args.samples, seed=config.seed)
        failed += not r.ok
        if emit:
            (emit / f"{case.name}.lhs.ndjson").write_text(
                dump_trace(r.equivalence.left_trace), encoding="utf-8")
            (emit / f"{case.name}.rhs.ndjson").write_text(
                dump_trace(r.equivalence.right_trace), encoding="utf-8")
        verdict = r.verdict if r.ok else f"{r.verdict} FAIL {r.failure}"
        if out.machine:
            out.record({"record": "law", "name": case.name, "verdict": r.verdict,
                        "oracle": r.oracle_ok, "steps": r.steps})
        out.text(f"{case.name:<24} {verdict:<8} {r.steps:>3} steps")
    if not args.no_matrix:
        for c in composition_matrix(samples=args.matrix_samples, eta=config.eta,
                                    seed=config.seed):
            failed += not c.ok
            name = f"matrix({c.n},{c.k},{c.m})"
            verdict = "equal" if c.ok else f"FAIL {c.message}"
            if out.machine:
                out.record({"record": "matrix", "n": c.n, "k": c.k, "m": c.m,
                            "laws": list(c.laws), "symbolic": c.symbolic,
                            "oracle": c.oracle, "named_law": c.named_law})
            out.text(f"{name:<24} {verdict:<8} {c.label}")
    out.text(f"{failed} failure(s)")
    return 1 if failed else 0


def cmd_fuzz(args, config, out):
    """Soundness fuzzing; cases are generated smallest depth first."""
    seed = config.seed if args.fuzz_seed is None else args.fuzz_seed
    per_depth = max(1, args.count // (args.max_depth + 1))
    done = 0
    for depth in range(args.max_depth + 1):
        todo = per_depth if depth < args.max_depth else args.count - done
        for _ in range(max(todo, 0)):
            case_seed = seed * 1_000_003 + done
            done += 1
            spec = TypedGenSpec(max_depth=depth, max_arity=args.max_arity, seed=case_seed)
            case = Generator(spec).case()
            form, _ = canonicalize(case.expr, settings=config.settings)
            rng = random.Random(case_seed)
            for inst in INSTANCES:
                for _ in range(args.envs):
                    env, term_env = sample_env(case.effects, case.terms, inst, rng)
                    before = eval_expr(case.expr, inst, env, term_env)
                    after = eval_expr(form.as_lift(), inst, env, term_env)
                    if before != after:
                        if out.machine:
                            out.record({"record": "counterexample", "seed": case_seed,
                                        "depth": depth, "instance": inst,
                                        "expr": show(case.expr), "canonical": str(form),
                                        "before": str(before), "after": str(after)})
                        out.text(f"FAIL seed={case_seed} depth={depth} instance={inst}")
                        out.text(f"  expr:      {show(case.expr)}")
                        out.text(f"  canonical: {form}")
                        out.text(f"  env:       " + ", ".join(f"{k} = {v}" for k, v in env.items()))
                        out.text(f"  before:    {before}")
                        out.text(f"  after:     {after}")
                        return 1
    if out.machine:
        out.record({"record": "fuzz", "seed": seed, "cases": done, "instances": len(INSTANCES),
                    "envs": args.envs, "failures": 0})
    out.text(f"ok: {done} expressions x {len(INSTANCES)} instances x {args.envs} environments")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="idiom", description=__doc__.splitlines()[0])
    p.add_argument("--no-eta", dest="eta", action="store_false",
                   help="compare heads up to beta only")
    p.add_argument("--arity-cap", type=int, default=DEFAULT_ARITY_CAP)
    p.add_argument("--step-budget", type=int, default=DEFAULT_STEP_BUDGET)
    p.add_argument("--seed", type=int, default=int(os.environ.get("IDIOM_SEED", "0")))
    p.add_argument("--output", choices=("text", "machine"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", help="print the canonical form")
    s.add_argument("expr", help="expression or .idm file")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("equiv", help="decide equality of two expressions")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("eval", help="evaluate in a concrete instance")
    s.add_argument("expr")
    s.add_argument("--instance", choices=sorted(INSTANCES), required=True)
    s.add_argument("--env", help="file of 'name = literal' bindings")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("laws", help="check the builtin law corpus and composition matrix")
    s.add_argument("--emit-traces", metavar="DIR")
    s.add_argument("--samples", type=int, default=100,
                   help="oracle environments per instance and law")
    s.add_argument("--matrix-samples", type=int, default=10)
    s.add_argument("--no-matrix", action="store_true")
    s.set_defaults(func=cmd_laws)

    s = sub.add_parser("fuzz", help="oracle soundness fuzzing")
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--seed", dest="fuzz_seed", type=int, default=None)
    s.add_argument("--envs", type=int, default=5)
    s.add_argument("--max-depth", type=int, default=3)
    s.add_argument("--max-arity", type=int, default=3)
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("expand", help="unfold every liftA into pure and <*>")
    s.add_argument("expr")
    s.set_defaults(func=cmd_expand)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.arity_cap <= 0 or args.step_budget <= 0:
        stderr.write("idiom: caps must be positive\n")
        return 2
    config = CliConfig(args.eta, args.arity_cap, args.step_budget, args.seed, args.output)
    out = _Out(config, stdout)
    try:
        return args.func(args, config, out)
    except ParseError as exc:
        stderr.write(f"idiom: parse error at {exc}\n")
        source = getattr(exc, "source", "")
        if source and "\n" not in source:
            stderr.write(f"  {source}\n  {' ' * (exc.span.column - 1)}^\n")
        return 2
    except (DivergenceError, ArityCapExceeded) as exc:
        stderr.write(f"idiom: {exc}\n")
        return 3
    except (IdiomError, EnvFileError, OSError) as exc:
        stderr.write(f"idiom: {exc}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
