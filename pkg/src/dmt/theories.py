"""Bundled example theories and turning axioms into rewrite rules."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .parser import ParseError, parse_prop
from .rewrite import RewriteRule, RulePolarity, Theory
from .syntax import (
    And,
    App,
    Atom,
    Forall,
    Implies,
    Prop,
    Signature,
    Var,
    alpha_eq,
    free_vars,
    show,
    size,
)
from .theoryfile import SignatureBuilder, format_signature, parse_theory

_ARITH = """
theory arith
fun 0 0
fun S 1
fun + 2
pred = 2
infix + 6 left
infix = 4 none
rule plus0 : 0 + y --> y
rule plusS : S(x) + y --> S(x + y)
rule eq00 : 0 = 0 --> true
rule eqS0 : S(x) = 0 --> false
rule eq0S : 0 = S(y) --> false
rule eqSS : S(x) = S(y) --> x = y
"""

_SUBSET = """
theory subset
pred in 2
pred sub 2
rule subdef : sub(x, y) --> forall z. (in(z, x) => in(z, y))
"""

_UNION_UNPOLARIZED = """
theory union_unpolarized
fun cup 2
pred in 2
rule cup : in(x, cup(y, z)) --> in(x, y) | in(x, z)
"""

_UNION_POLARIZED = """
theory union_polarized
fun cup 2
pred in 2
rule cupn : in(x, cup(y, z)) -->- in(x, y) | in(x, z)
rule cupp1 : in(x, cup(y, z)) -->+ in(x, y)
rule cupp2 : in(x, cup(y, z)) -->+ in(x, z)
"""

_LOOP_PQ = """
theory loopPQ
pred P 0
pred Q 0
rule loop : P --> P => Q
"""

BUILTIN_SOURCES = {
    "arith": _ARITH,
    "subset": _SUBSET,
    "union_unpolarized": _UNION_UNPOLARIZED,
    "union_polarized": _UNION_POLARIZED,
    "loopPQ": _LOOP_PQ,
}


def builtin(name: str) -> Theory:
    try:
        source = BUILTIN_SOURCES[name]
    except KeyError:
        raise KeyError(f"unknown builtin theory {name!r}; known: {', '.join(BUILTIN_SOURCES)}") from None
    return parse_theory(source, name)


# ---------------------------------------------------------------------------
# Axiom sets


@dataclass(frozen=True)
class Axiom:
    name: str
    prop: Prop
    closed: bool = True


@dataclass(frozen=True)
class AxiomSet:
    name: str
    axioms: tuple[Axiom, ...] = ()
    signature: Signature = field(default_factory=Signature)


def close(p: Prop) -> Prop:
    """Universal closure, variables in sorted order."""
    for v in sorted(free_vars(p), reverse=True):
        p = Forall(v, p)
    return p


_AXIOM_RE = re.compile(r"axiom\s+(\S+)\s*:\s*(.*)\Z")


def parse_axioms(text: str, name: str = "axioms") -> AxiomSet:
    """Read a ``.dma`` file: signature lines and ``axiom <name> : <prop>``.

    Axioms are universally closed on ingest.
    """
    sig = SignatureBuilder()
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("axioms ") or line.startswith("theory "):
            name = line.split(None, 1)[1].strip()
            continue
        if sig.feed(line, lineno):
            continue
        m = _AXIOM_RE.match(line)
        if not m:
            raise ParseError(f"cannot read line: {line!r}", lineno)
        pending.append((lineno, m.group(1), m.group(2)))
    signature = sig.build()
    axioms = []
    for lineno, aname, text_ in pending:
        try:
            p = parse_prop(text_, signature)
        except ParseError as err:
            raise ParseError(err.message, lineno, err.column) from None
        was_closed = not free_vars(p)
        axioms.append(Axiom(aname, close(p), was_closed))
    return AxiomSet(name, tuple(axioms), signature)


def load_axioms(path: str | Path) -> AxiomSet:
    path = Path(path)
    return parse_axioms(path.read_text(encoding="utf-8"), path.stem)


def format_axioms(axioms: AxiomSet) -> str:
    lines = [f"axioms {axioms.name}"] + format_signature(axioms.signature)
    lines += [f"axiom {a.name} : {show(a.prop, axioms.signature)}" for a in axioms.axioms]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Orientation


def strip_foralls(p: Prop) -> Prop:
    while isinstance(p, Forall):
        p = p.body
    return p


def _as_iff(p: Prop) -> tuple[Prop, Prop] | None:
    if isinstance(p, And) and isinstance(p.left, Implies) and isinstance(p.right, Implies):
        a, b = p.left.left, p.left.right
        if alpha_eq(p.right.left, b) and alpha_eq(p.right.right, a):
            return a, b
    return None


def _is_atom(p: Prop) -> bool:
    return isinstance(p, Atom)


def _var_counts(t) -> Counter:
    c: Counter = Counter()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            c[u.name] += 1
        else:
            stack.extend(u.args)
    return c


def _precedence(t: App) -> tuple[int, str]:
    return len(t.args), t.fn


def _kbo_greater(t, u) -> bool:
    """Knuth-Bendix comparison with unit weights (weight is size)."""
    if not isinstance(t, App):
        return False
    tc, uc = _var_counts(t), _var_counts(u)
    if any(uc[v] > tc[v] for v in uc):
        return False
    if size(t) != size(u):
        return size(t) > size(u)
    if isinstance(u, Var):
        return False  # only a constant has size 1, and it cannot contain u
    if _precedence(t) != _precedence(u):
        return _precedence(t) > _precedence(u)
    for a, b in zip(t.args, u.args):
        if a != b:
            return _kbo_greater(a, b)
    return False


def orients(t, u) -> bool:
    """Whether the equation ``t = u`` may be used left to right.

    ``t`` must not be a variable and no variable may occur more often in
    ``u`` than in ``t``.  Then ``u`` has to be smaller, or the same size and
    headed by a symbol of lower precedence (higher arity first, then name),
    as ``S(x + y)`` is against ``S(x) + y``.  This is a Knuth-Bendix order
    with every weight 1, so the oriented rules always terminate.
    """
    return _kbo_greater(t, u)


def orient_axiom(ax: Axiom) -> RewriteRule | None:
    body = strip_foralls(ax.prop)
    iff = _as_iff(body)
    if iff is not None:
        for p, a in (iff, iff[::-1]):
            if _is_atom(p) and free_vars(a) <= free_vars(p):
                return RewriteRule(ax.name, p, a, RulePolarity.UNPOLARIZED)
        return None
    if isinstance(body, Implies):
        p, a = body.left, body.right
        if _is_atom(p) and free_vars(a) <= free_vars(p):
            return RewriteRule(ax.name, p, a, RulePolarity.NEGATIVE_ONLY)
        a, p = body.left, body.right
        if _is_atom(p) and free_vars(a) <= free_vars(p):
            return RewriteRule(ax.name, p, a, RulePolarity.POSITIVE_ONLY)
        return None
    if isinstance(body, Atom) and body.pred == "=" and len(body.args) == 2:
        t, u = body.args
        if orients(t, u):
            return RewriteRule(ax.name, t, u)
    return None


def orient(axioms: AxiomSet) -> tuple[Theory, AxiomSet]:
    """Turn what axioms we can into rules; the rest come back as residual."""
    rules, residual = [], []
    for ax in axioms.axioms:
        r = orient_axiom(ax)
        if r is None:
            residual.append(ax)
        else:
            rules.append(r)
    sig = axioms.signature
    theory = Theory(axioms.name, sig, tuple(rules))
    return theory, AxiomSet(axioms.name + "_residual", tuple(residual), sig)
