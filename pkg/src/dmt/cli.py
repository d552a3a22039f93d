"""Command-line front end.

Exit codes: 0 success, 1 rejected / not congruent / saturated, 2 fuel or
another resource exhausted, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable

from . import ndproof, resolution
from .parser import ParseError, parse_prop, parse_term
from .rewrite import (
    DEFAULT_FUEL,
    EMPTY_THEORY,
    Fuel,
    FuelExhausted,
    Theory,
    congruent,
    normalize_steps,
    validate_theory,
    whnf,
)
from .syntax import Polarity, Prop, Signature, show
from .theories import BUILTIN_SOURCES, builtin, format_axioms, load_axioms, orient
from .theoryfile import format_theory, load_theory

OK, REJECTED, EXHAUSTED, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, record: dict[str, Any], human: str) -> None:
        if self.fmt == "records":
            print(json.dumps(record, ensure_ascii=False), file=self.stream)
        else:
            print(human, file=self.stream)


# ---------------------------------------------------------------------------
# Inputs


def load_one(source: str) -> Theory:
    if source in BUILTIN_SOURCES and not Path(source).exists():
        return builtin(source)
    path = Path(source)
    if not path.exists():
        raise InputError(f"no such theory file or builtin: {source}")
    return load_theory(path)


def load_theories(sources: list[str] | None) -> Theory:
    theory = EMPTY_THEORY
    for source in sources or []:
        try:
            theory = load_one(source) if theory is EMPTY_THEORY else theory.merge(load_one(source))
        except ValueError as err:
            raise InputError(str(err)) from None
    return theory


def signature_for(args, theory: Theory) -> Signature:
    sig = theory.signature
    names = [n for chunk in args.const or [] for n in chunk.split(",") if n]
    return sig.with_constants(*names) if names else sig


def read_expr(text: str, sig: Signature):
    """A proposition if it parses as one, otherwise a term."""
    try:
        return parse_prop(text, sig)
    except ParseError as prop_err:
        try:
            return parse_term(text, sig)
        except ParseError:
            raise prop_err from None


def read_context(items: list[str] | None, sig: Signature) -> list[tuple[str, Prop]]:
    ctx = []
    for item in items or []:
        name, sep, text = item.partition(":")
        if not sep:
            raise InputError(f"hypothesis must look like name:proposition, got {item!r}")
        ctx.append((name.strip(), parse_prop(text, sig)))
    return ctx


def read_proof(path: str, sig: Signature) -> ndproof.Proof:
    try:
        return ndproof.parse_proof(Path(path).read_text(encoding="utf-8"), sig)
    except OSError as err:
        raise InputError(str(err)) from None


def polarity(text: str) -> Polarity:
    return Polarity.NEGATIVE if text in ("-", "negative", "neg") else Polarity.POSITIVE


# ---------------------------------------------------------------------------
# Commands


def cmd_normalize(args, out: Output) -> int:
    theory = load_theories(args.theory)
    sig = signature_for(args, theory)
    expr = read_expr(args.expr, sig)
    try:
        nf, n = normalize_steps(expr, theory, polarity(args.polarity), Fuel(args.fuel, "normalization"))
    except FuelExhausted as err:
        out.emit({"command": "normalize", "status": "fuel-exhausted", "steps": err.used},
                 f"FuelExhausted after {err.used} steps")
        return EXHAUSTED
    out.emit({"command": "normalize", "status": "normal", "result": show(nf, sig), "steps": n},
             f"{show(nf, sig)}\n({n} steps)")
    return OK


def cmd_whnf(args, out: Output) -> int:
    theory = load_theories(args.theory)
    sig = signature_for(args, theory)
    expr = parse_prop(args.expr, sig)
    budget = Fuel(args.fuel, "weak head normalization")
    try:
        result = whnf(expr, theory, polarity(args.polarity), budget)
    except FuelExhausted as err:
        out.emit({"command": "whnf", "status": "fuel-exhausted", "steps": err.used},
                 f"FuelExhausted after {err.used} steps")
        return EXHAUSTED
    out.emit({"command": "whnf", "status": "ok", "result": show(result, sig), "steps": budget.used},
             f"{show(result, sig)}\n({budget.used} steps)")
    return OK


def cmd_congruent(args, out: Output) -> int:
    theory = load_theories(args.theory)
    sig = signature_for(args, theory)
    a, b = read_expr(args.left, sig), read_expr(args.right, sig)
    try:
        verdict = congruent(a, b, theory, args.fuel)
    except FuelExhausted as err:
        out.emit({"command": "congruent", "status": "fuel-exhausted", "steps": err.used},
                 f"FuelExhausted after {err.used} steps")
        return EXHAUSTED
    out.emit({"command": "congruent", "status": "ok", "congruent": verdict},
             "congruent" if verdict else "not congruent")
    return OK if verdict else REJECTED


def cmd_check(args, out: Output) -> int:
    theory = load_theories(args.theory)
    sig = signature_for(args, theory)
    proof = read_proof(args.proof, sig)
    goal = parse_prop(args.goal, sig)
    ctx = read_context(args.hyp, sig)
    try:
        report = ndproof.check(theory, ctx, goal, proof, args.fuel)
    except FuelExhausted as err:
        out.emit({"command": "check", "status": "fuel-exhausted", "steps": err.used},
                 f"FuelExhausted after {err.used} steps")
        return EXHAUSTED
    except ValueError as err:
        raise InputError(str(err)) from None
    rule = ndproof.last_rule(proof)
    record = {
        "command": "check",
        "status": "accepted" if report.accepted else "rejected",
        "last_rule": rule,
        "fuel_used": report.fuel_used,
        "redexes": len(ndproof.find_redexes(proof)),
    }
    if report.accepted:
        out.emit(record, f"accepted; last rule: {rule}")
        return OK
    record["reason"] = report.reason
    record["path"] = ndproof.format_path(report.path or ())
    out.emit(record, str(report))
    return REJECTED


def cmd_reduce(args, out: Output) -> int:
    theory = load_theories(args.theory)
    sig = signature_for(args, theory)
    proof = read_proof(args.proof, sig)
    goal = parse_prop(args.goal, sig)
    ctx = read_context(args.hyp, sig)
    trace: list = []
    try:
        normal = ndproof.normalize_proof(theory, ctx, goal, proof, args.fuel, trace)
    except FuelExhausted:
        out.emit({"command": "reduce", "status": "fuel-exhausted", "contractions": len(trace),
                  "trace": [ndproof.format_path(p) for p in trace[:20]]},
                 f"FuelExhausted after {len(trace)} contractions"
                 + "".join(f"\n  contracted at {ndproof.format_path(p)}" for p in trace[:5])
                 + ("\n  ..." if len(trace) > 5 else ""))
        return EXHAUSTED
    except ValueError as err:
        raise InputError(str(err)) from None
    text = ndproof.format_proof(normal)
    lines = [f"contracted at {ndproof.format_path(p)}" for p in trace] + [text]
    out.emit({"command": "reduce", "status": "normal", "contractions": len(trace),
              "trace": [ndproof.format_path(p) for p in trace], "proof": text,
              "last_rule": ndproof.last_rule(normal)}, "\n".join(lines))
    return OK


def _prove_one(theory: Theory, path: str, limits: resolution.Limits) -> tuple[dict, str, int]:
    text = Path(path).read_text(encoding="utf-8")
    problem = resolution.parse_problem(text, theory.signature)
    sig = problem.signature
    outcome = resolution.refute(theory, problem.clauses, limits)
    record: dict[str, Any] = {"command": "prove", "problem": path, "status": outcome.status,
                              "generated": outcome.generated, "steps": outcome.steps}
    if isinstance(outcome, resolution.Refutation):
        steps = resolution.derivation(outcome.empty)
        record["trace"] = [
            {"number": st.number, "clause": st.clause.show(sig), "kind": st.kind,
             "parents": list(st.parents), "literals": [i + 1 for i in st.literals],
             "mgu": {k: show(v, sig) for k, v in st.mgu}, "rules": list(st.rules)}
            for st in steps
        ]
        human = "refutation\n" + "\n".join(resolution.format_step(st, sig) for st in steps)
        return record, human, OK
    if isinstance(outcome, resolution.Saturated):
        return record, f"saturated after {outcome.steps} given clauses ({outcome.generated} generated)", REJECTED
    record["reason"] = outcome.reason
    return record, f"resource-out ({outcome.reason}) after {outcome.generated} generated clauses", EXHAUSTED


def cmd_prove(args, out: Output) -> int:
    theory = load_theories(args.theory)
    try:
        resolution.compile_one_way(theory)
    except resolution.NonClausalRule as err:
        raise InputError(str(err)) from None
    limits = resolution.Limits(max_clauses=args.max_clauses, max_steps=args.max_steps,
                               max_depth=args.max_depth, fuel=args.fuel)
    for p in args.problem:
        if not Path(p).exists():
            raise InputError(f"no such problem file: {p}")
    if args.jobs > 1 and len(args.problem) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_prove_one, [theory] * len(args.problem), args.problem,
                                    [limits] * len(args.problem)))
    else:
        results = [_prove_one(theory, p, limits) for p in args.problem]
    code = OK
    for (record, human, rc), p in zip(results, args.problem):
        out.emit(record, human if len(args.problem) == 1 else f"{p}: {human}")
        code = max(code, rc)
    return code


def cmd_clausify(args, out: Output) -> int:
    theory = load_theories(args.theory)
    sig = signature_for(args, theory)
    p = parse_prop(args.prop, sig)
    clauses = resolution.clausify(p, avoid=sig.symbols())
    shown = [c.show(sig) for c in clauses]
    out.emit({"command": "clausify", "status": "ok", "clauses": shown}, "\n".join(shown) or "(no clauses)")
    return OK


def cmd_orient(args, out: Output) -> int:
    try:
        axioms = load_axioms(args.axioms)
    except OSError as err:
        raise InputError(str(err)) from None
    theory, residual = orient(axioms)
    theory_text, residual_text = format_theory(theory), format_axioms(residual)
    record = {"command": "orient", "status": "ok",
              "rules": [f"{r.name}{':' + r.polarity.value if r.polarity.value else ''}" for r in theory.rules],
              "residual": [a.name for a in residual.axioms]}
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        tpath, rpath = d / f"{axioms.name}.dmt", d / f"{axioms.name}_residual.dma"
        tpath.write_text(theory_text, encoding="utf-8")
        rpath.write_text(residual_text, encoding="utf-8")
        record["files"] = [str(tpath), str(rpath)]
        out.emit(record, f"wrote {tpath}\nwrote {rpath}")
    else:
        out.emit(record, theory_text + "\n" + residual_text.rstrip("\n"))
    return OK


def cmd_validate(args, out: Output) -> int:
    theory = load_theories(args.theory)
    problems = validate_theory(theory)
    if problems:
        out.emit({"command": "validate", "status": "invalid", "violations": problems},
                 "\n".join(problems))
        return REJECTED
    out.emit({"command": "validate", "status": "ok", "rules": len(theory.rules)},
             f"ok ({len(theory.rules)} rules)")
    return OK


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("-t", "--theory", action="append", metavar="FILE",
                        help="theory file or builtin name (repeatable)")
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    common.add_argument("--format", choices=("human", "records"), default="human")
    common.add_argument("--const", action="append", metavar="NAMES",
                        help="comma-separated extra constants")

    parser = _ArgumentParser(prog="dmt", description="Deduction modulo theory kernel")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("normalize", cmd_normalize, "normal form of a term or proposition")
    p.add_argument("expr")
    p.add_argument("--polarity", default="+", choices=("+", "-", "positive", "negative"))

    p = add("whnf", cmd_whnf, "weak head normal form of a proposition")
    p.add_argument("expr")
    p.add_argument("--polarity", default="+", choices=("+", "-", "positive", "negative"))

    p = add("congruent", cmd_congruent, "decide congruence of two expressions")
    p.add_argument("left")
    p.add_argument("right")

    for name, fn, help_ in (("check", cmd_check, "check a natural deduction proof"),
                            ("reduce", cmd_reduce, "normalize a proof")):
        p = add(name, fn, help_)
        p.add_argument("proof")
        p.add_argument("--goal", required=True)
        p.add_argument("--hyp", action="append", metavar="NAME:PROP")

    p = add("prove", cmd_prove, "search for a refutation")
    p.add_argument("problem", nargs="+")
    p.add_argument("--max-clauses", type=int, default=50_000)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)

    p = add("clausify", cmd_clausify, "clausal form of a proposition")
    p.add_argument("prop")

    p = add("orient", cmd_orient, "turn axioms into rewrite rules")
    p.add_argument("axioms")
    p.add_argument("-o", "--out-dir")

    add("validate", cmd_validate, "check theory well-formedness")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    if args.fuel < 1:
        print("error: --fuel must be at least 1", file=sys.stderr)
        return INPUT_ERROR
    try:
        return args.fn(args, out)
    except (InputError, ParseError, KeyError, OSError, ValueError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else str(err)
        if args.format == "records":
            out.emit({"command": args.command, "status": "input-error", "message": msg}, "")
        print(f"error: {msg}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
