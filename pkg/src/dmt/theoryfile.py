"""Reading and writing ``.dmt`` theory files.

A theory file is line oriented::

    theory arith
    fun 0 0
    fun S 1
    fun + 2
    const a b
    pred = 2
    infix + 6 left
    infix = 4 none
    rule plus0 : 0 + y --> y
    rule cupn : in(x, cup(y,z)) -->- in(x,y) | in(x,z)

``-->+`` and ``-->-`` mark positive-only and negative-only rules.  Lines
starting with ``#`` are comments.
"""

from __future__ import annotations

import re
from pathlib import Path

from .parser import ParseError, parse_prop, parse_term
from .rewrite import RewriteRule, RulePolarity, Theory
from .syntax import Assoc, Atom, Fixity, Signature, show

_RULE_RE = re.compile(r"rule\s+(\S+)\s*:\s*(.*?)\s*-->([+-]?)\s*(.*)\Z")
_SIG_RE = re.compile(r"(fun|pred)\s+(\S+)\s+(\d+)\Z")
_INFIX_RE = re.compile(r"infix\s+(\S+)\s+(-?\d+)\s+(left|right|none)\Z")
_CONST_RE = re.compile(r"const((?:\s+\S+)+)\Z")


class SignatureBuilder:
    """Accumulates signature declarations while a file is read."""

    def __init__(self, base: Signature | None = None):
        base = base or Signature()
        self.functions = dict(base.functions)
        self.predicates = dict(base.predicates)
        self.infix = dict(base.infix)

    def feed(self, line: str, lineno: int) -> bool:
        """Consume ``line`` if it is a signature declaration."""
        m = _SIG_RE.match(line)
        if m:
            kind, name, arity = m.group(1), m.group(2), int(m.group(3))
            table, other = (self.functions, self.predicates) if kind == "fun" else (self.predicates, self.functions)
            if name in other:
                raise ParseError(f"{name!r} declared both as function and predicate", lineno)
            if table.get(name, arity) != arity:
                raise ParseError(f"{name!r} redeclared with arity {arity}", lineno)
            table[name] = arity
            return True
        m = _CONST_RE.match(line)
        if m:
            for name in m.group(1).split():
                self.feed(f"fun {name} 0", lineno)
            return True
        m = _INFIX_RE.match(line)
        if m:
            self.infix[m.group(1)] = Fixity(int(m.group(2)), Assoc(m.group(3)))
            return True
        return False

    def build(self) -> Signature:
        return Signature(dict(self.functions), dict(self.predicates), dict(self.infix))


def _relocate(err: ParseError, lineno: int) -> ParseError:
    return ParseError(err.message, lineno, err.column)


def parse_rule(name: str, lhs_text: str, marker: str, rhs_text: str, sig: Signature) -> RewriteRule:
    polarity = RulePolarity(marker)
    lhs = None
    try:
        lhs = parse_prop(lhs_text, sig)
    except ParseError:
        pass
    if isinstance(lhs, Atom) and lhs.pred in sig.predicates:
        return RewriteRule(name, lhs, parse_prop(rhs_text, sig), polarity)
    return RewriteRule(name, parse_term(lhs_text, sig), parse_term(rhs_text, sig), polarity)


def parse_theory(text: str, name: str = "theory", base: Signature | None = None) -> Theory:
    sig = SignatureBuilder(base)
    pending: list[tuple[int, re.Match]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("theory "):
            name = line.split(None, 1)[1].strip()
            continue
        try:
            if sig.feed(line, lineno):
                continue
        except ParseError as err:
            raise _relocate(err, lineno) from None
        m = _RULE_RE.match(line)
        if not m:
            raise ParseError(f"cannot read line: {line!r}", lineno)
        pending.append((lineno, m))
    signature = sig.build()
    rules = []
    seen = set()
    for lineno, m in pending:
        rname = m.group(1)
        if rname in seen:
            raise ParseError(f"duplicate rule name {rname!r}", lineno)
        seen.add(rname)
        try:
            rules.append(parse_rule(rname, m.group(2), m.group(3), m.group(4), signature))
        except ParseError as err:
            raise _relocate(err, lineno) from None
    return Theory(name, signature, tuple(rules))


def load_theory(path: str | Path) -> Theory:
    path = Path(path)
    return parse_theory(path.read_text(encoding="utf-8"), name=path.stem)


def format_signature(sig: Signature) -> list[str]:
    lines = [f"fun {n} {a}" for n, a in sig.functions.items()]
    lines += [f"pred {n} {a}" for n, a in sig.predicates.items()]
    lines += [f"infix {op} {fx.precedence} {fx.assoc.value}" for op, fx in sig.infix.items()]
    return lines


def format_theory(theory: Theory) -> str:
    lines = [f"theory {theory.name}"]
    lines += format_signature(theory.signature)
    for r in theory.rules:
        lines.append(
            f"rule {r.name} : {show(r.lhs, theory.signature)} -->{r.polarity.value} {show(r.rhs, theory.signature)}"
        )
    return "\n".join(lines) + "\n"
