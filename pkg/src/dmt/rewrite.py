"""Rewrite rules, theories and the congruence they generate.

Term rules rewrite terms to terms.  Proposition rules rewrite atoms to
propositions and may be polarized: a positive-only rule fires only at
positive atom occurrences, a negative-only rule only at negative ones.
All reduction is fuel-bounded; running out raises :class:`FuelExhausted`
instead of looping.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Union

from .syntax import (
    App,
    Atom,
    Binary,
    Binder,
    Implies,
    Path,
    Polarity,
    Prop,
    Signature,
    Term,
    Var,
    canonical,
    free_vars,
    substitute,
)

DEFAULT_FUEL = 10_000


class FuelExhausted(Exception):
    """Raised when a reduction or search used up its step budget."""

    def __init__(self, used: int, what: str = "reduction"):
        super().__init__(f"{what} exhausted its fuel after {used} steps")
        self.used = used
        self.what = what


class Fuel:
    """A mutable step counter shared by one computation."""

    def __init__(self, limit: int = DEFAULT_FUEL, what: str = "reduction"):
        if limit < 1:
            raise ValueError("fuel must be at least 1")
        self.limit = limit
        self.used = 0
        self.what = what

    def spend(self, n: int = 1) -> None:
        if self.used + n > self.limit:
            self.used = self.limit
            raise FuelExhausted(self.used, self.what)
        self.used += n


def as_fuel(fuel: int | Fuel) -> Fuel:
    return fuel if isinstance(fuel, Fuel) else Fuel(fuel)


class RuleKind(enum.Enum):
    TERM = "term"
    PROP = "prop"


class RulePolarity(enum.Enum):
    UNPOLARIZED = ""
    POSITIVE_ONLY = "+"
    NEGATIVE_ONLY = "-"

    def allows(self, occurrence: Polarity) -> bool:
        if self is RulePolarity.UNPOLARIZED:
            return True
        if self is RulePolarity.POSITIVE_ONLY:
            return occurrence is Polarity.POSITIVE
        return occurrence is Polarity.NEGATIVE


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: Union[Term, Atom]
    rhs: Union[Term, Prop]
    polarity: RulePolarity = RulePolarity.UNPOLARIZED

    @property
    def kind(self) -> RuleKind:
        return RuleKind.PROP if isinstance(self.lhs, Atom) else RuleKind.TERM

    @property
    def head(self) -> str | None:
        if isinstance(self.lhs, Atom):
            return self.lhs.pred
        if isinstance(self.lhs, App):
            return self.lhs.fn
        return None

    def __str__(self) -> str:
        return f"{self.name} : {self.lhs} -->{self.polarity.value} {self.rhs}"


@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature = field(default_factory=Signature)
    rules: tuple[RewriteRule, ...] = ()

    @property
    def polarized(self) -> bool:
        return any(r.polarity is not RulePolarity.UNPOLARIZED for r in self.rules)

    @cached_property
    def _term_index(self) -> dict[str, list[RewriteRule]]:
        index: dict[str, list[RewriteRule]] = {}
        for r in self.rules:
            if r.kind is RuleKind.TERM and r.head is not None:
                index.setdefault(r.head, []).append(r)
        return index

    @cached_property
    def _prop_index(self) -> dict[str, list[RewriteRule]]:
        index: dict[str, list[RewriteRule]] = {}
        for r in self.rules:
            if r.kind is RuleKind.PROP:
                index.setdefault(r.head, []).append(r)
        return index

    def term_rules(self, head: str) -> list[RewriteRule]:
        return self._term_index.get(head, [])

    def prop_rules(self, head: str) -> list[RewriteRule]:
        return self._prop_index.get(head, [])

    def rule(self, name: str) -> RewriteRule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    def only(self, polarities: Iterable[RulePolarity]) -> "Theory":
        keep = set(polarities)
        return Theory(self.name, self.signature, tuple(r for r in self.rules if r.kind is RuleKind.TERM or r.polarity in keep))

    def merge(self, other: "Theory") -> "Theory":
        names = {r.name for r in self.rules}
        dups = sorted(names & {r.name for r in other.rules})
        if dups:
            raise ValueError(f"duplicate rule name(s): {', '.join(dups)}")
        return Theory(f"{self.name}+{other.name}", self.signature.merge(other.signature), self.rules + other.rules)


EMPTY_THEORY = Theory("empty")


# ---------------------------------------------------------------------------
# Matching


def match(pattern, subject, subst: dict[str, Term] | None = None) -> dict[str, Term] | None:
    """First-order matching; subject variables are treated as rigid."""
    s = {} if subst is None else dict(subst)
    stack = [(pattern, subject)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            bound = s.get(p.name)
            if bound is None:
                s[p.name] = t
            elif bound != t:
                return None
        elif isinstance(p, App):
            if not isinstance(t, App) or t.fn != p.fn or len(t.args) != len(p.args):
                return None
            stack.extend(zip(p.args, t.args))
        elif isinstance(p, Atom):
            if not isinstance(t, Atom) or t.pred != p.pred or len(t.args) != len(p.args):
                return None
            stack.extend(zip(p.args, t.args))
        else:
            return None
    return s


# ---------------------------------------------------------------------------
# One-step reduction


@dataclass(frozen=True)
class Step:
    path: Path
    rule: RewriteRule
    result: object


def _root_term_steps(t: Term, theory: Theory) -> Iterator[tuple[RewriteRule, Term]]:
    if isinstance(t, App):
        for r in theory.term_rules(t.fn):
            s = match(r.lhs, t)
            if s is not None:
                yield r, substitute(s, r.rhs)


def _root_prop_steps(a: Atom, theory: Theory, pol: Polarity) -> Iterator[tuple[RewriteRule, Prop]]:
    for r in theory.prop_rules(a.pred):
        if r.polarity.allows(pol):
            s = match(r.lhs, a)
            if s is not None:
                yield r, substitute(s, r.rhs)


def _term_steps(t: Term, theory: Theory, path: Path) -> Iterator[Step]:
    for r, u in _root_term_steps(t, theory):
        yield Step(path, r, u)
    if isinstance(t, App):
        for i, a in enumerate(t.args):
            for st in _term_steps(a, theory, path + (i,)):
                args = list(t.args)
                args[i] = st.result
                yield Step(st.path, st.rule, App(t.fn, tuple(args)))


def _prop_steps(p: Prop, theory: Theory, pol: Polarity, path: Path) -> Iterator[Step]:
    if isinstance(p, Atom):
        for r, q in _root_prop_steps(p, theory, pol):
            yield Step(path, r, q)
        for i, a in enumerate(p.args):
            for st in _term_steps(a, theory, path + (i,)):
                args = list(p.args)
                args[i] = st.result
                yield Step(st.path, st.rule, Atom(p.pred, tuple(args)))
    elif isinstance(p, Binary):
        lpol = pol.flip() if isinstance(p, Implies) else pol
        for st in _prop_steps(p.left, theory, lpol, path + (0,)):
            yield Step(st.path, st.rule, type(p)(st.result, p.right))
        for st in _prop_steps(p.right, theory, pol, path + (1,)):
            yield Step(st.path, st.rule, type(p)(p.left, st.result))
    elif isinstance(p, Binder):
        for st in _prop_steps(p.body, theory, pol, path + (0,)):
            yield Step(st.path, st.rule, type(p)(p.var, st.result))


def steps(subject, theory: Theory, base: Polarity = Polarity.POSITIVE) -> Iterator[Step]:
    """All one-step reductions, outermost positions first, left to right,
    and rules in declaration order at each position."""
    if isinstance(subject, (Var, App)):
        return _term_steps(subject, theory, ())
    return _prop_steps(subject, theory, base, ())


def reduce_once(subject, theory: Theory, base: Polarity = Polarity.POSITIVE) -> list:
    """The distinct one-step reducts of ``subject`` (up to alpha-equivalence)."""
    seen = set()
    out = []
    for st in steps(subject, theory, base):
        key = canonical(st.result)
        if key not in seen:
            seen.add(key)
            out.append(st.result)
    return out


def first_step(subject, theory: Theory, base: Polarity = Polarity.POSITIVE) -> Step | None:
    return next(steps(subject, theory, base), None)


# ---------------------------------------------------------------------------
# Normalization


def _kids(x) -> tuple:
    if isinstance(x, (App, Atom)):
        return x.args
    if isinstance(x, Binary):
        return (x.left, x.right)
    if isinstance(x, Binder):
        return (x.body,)
    return ()


def _with_kid(x, i: int, kid):
    if isinstance(x, App):
        return App(x.fn, x.args[:i] + (kid,) + x.args[i + 1:])
    if isinstance(x, Atom):
        return Atom(x.pred, x.args[:i] + (kid,) + x.args[i + 1:])
    if isinstance(x, Binary):
        return type(x)(kid, x.right) if i == 0 else type(x)(x.left, kid)
    return type(x)(x.var, kid)


def normalize_steps(subject, theory: Theory, base: Polarity = Polarity.POSITIVE,
                    fuel: int | Fuel = DEFAULT_FUEL) -> tuple[object, int]:
    """Leftmost-outermost normal form and the number of steps taken.

    The walk keeps a zipper over the subject, so it visits the same
    positions in the same order as ``first_step`` restarted after every
    step, without rebuilding the whole tree each time.  Positions left of
    the focus are already normal.  After a step inside an atom the walk
    resumes at that atom, since the atom or an enclosing term may have
    become a redex.
    """
    budget = as_fuel(fuel)
    n = 0
    # frames: (parent, child index, parent polarity, parent is term-level)
    frames: list[tuple[object, int, Polarity, bool]] = []
    focus, pol = subject, base
    in_term = isinstance(subject, (Var, App))
    while True:
        if in_term:
            reduct = next(_root_term_steps(focus, theory), None)
        elif isinstance(focus, Atom):
            reduct = next(_root_prop_steps(focus, theory, pol), None)
        else:
            reduct = None
        if reduct is not None:
            budget.spend()
            n += 1
            focus = reduct[1]
            if in_term:
                # climb to the enclosing atom (or the root term)
                while frames and frames[-1][3]:
                    parent, i, pol, _ = frames.pop()
                    focus = _with_kid(parent, i, focus)
                if frames and isinstance(frames[-1][0], Atom):
                    parent, i, pol, _ = frames.pop()
                    focus = _with_kid(parent, i, focus)
                    in_term = False
            continue
        kids = _kids(focus)
        if kids:
            child_pol = pol.flip() if isinstance(focus, Implies) else pol
            frames.append((focus, 0, pol, in_term))
            in_term = in_term or isinstance(focus, Atom)
            focus, pol = kids[0], child_pol
            continue
        # move to the next sibling, rebuilding parents on the way up
        while frames:
            parent, i, ppol, pterm = frames.pop()
            parent = _with_kid(parent, i, focus)
            pk = _kids(parent)
            if i + 1 < len(pk):
                frames.append((parent, i + 1, ppol, pterm))
                focus = pk[i + 1]
                pol = ppol
                in_term = pterm or isinstance(parent, Atom)
                break
            focus, pol, in_term = parent, ppol, pterm
        else:
            return focus, n


def normalize(subject, theory: Theory, base: Polarity = Polarity.POSITIVE,
              fuel: int | Fuel = DEFAULT_FUEL):
    return normalize_steps(subject, theory, base, fuel)[0]


def whnf(subject: Prop, theory: Theory, base: Polarity = Polarity.POSITIVE,
         fuel: int | Fuel = DEFAULT_FUEL) -> Prop:
    """Reduce at the root until the root is a connective, a quantifier or an
    irreducible atom.

    When no proposition rule matches a root atom, one term step inside its
    arguments is taken and the root is tried again, so that rules such as
    ``0 = 0 --> true`` can fire on ``0 + 0 = 0``.
    """
    budget = as_fuel(fuel)
    while isinstance(subject, Atom):
        st = next(_root_prop_steps(subject, theory, base), None)
        if st is None:
            inner = next(_prop_steps(subject, theory, base, ()), None)
            if inner is None:
                return subject
            budget.spend()
            subject = inner.result
            continue
        budget.spend()
        subject = st[1]
    return subject


# ---------------------------------------------------------------------------
# Congruence


def _lockstep(a, b, theory: Theory, budget: Fuel) -> bool:
    """Walk the leftmost-outermost reduction sequences of ``a`` and ``b`` side
    by side and report whether they meet.

    For terminating confluent theories this is exactly "equal normal forms";
    for divergent ones it still finds joins that occur along the way.
    """
    seen_a = {canonical(a)}
    seen_b = {canonical(b)}
    if seen_a & seen_b:
        return True
    done_a = done_b = False
    while not (done_a and done_b):
        if not done_a:
            st = first_step(a, theory, Polarity.POSITIVE)
            if st is None:
                done_a = True
            else:
                budget.spend()
                a = st.result
                key = canonical(a)
                if key in seen_b:
                    return True
                seen_a.add(key)
        if not done_b:
            st = first_step(b, theory, Polarity.POSITIVE)
            if st is None:
                done_b = True
            else:
                budget.spend()
                b = st.result
                key = canonical(b)
                if key in seen_a:
                    return True
                seen_b.add(key)
    return False


def _valley(a, base_a: Polarity, b, base_b: Polarity, theory: Theory, budget: Fuel) -> bool:
    """Breadth-first search for a common reduct of ``a`` and ``b``."""
    seen = ({canonical(a)}, {canonical(b)})
    if seen[0] & seen[1]:
        return True
    frontier = (deque([a]), deque([b]))
    bases = (base_a, base_b)
    while frontier[0] or frontier[1]:
        for side in (0, 1):
            if not frontier[side]:
                continue
            x = frontier[side].popleft()
            budget.spend()
            for y in reduce_once(x, theory, bases[side]):
                key = canonical(y)
                if key in seen[1 - side]:
                    return True
                if key not in seen[side]:
                    seen[side].add(key)
                    frontier[side].append(y)
    return False


def congruent(a, b, theory: Theory, fuel: int | Fuel = DEFAULT_FUEL) -> bool:
    """Decide ``a == b`` modulo the theory.

    For polarized theories ``a`` is read as a hypothesis (negative) and
    ``b`` as a goal (positive), and a common reduct is searched for.
    """
    budget = as_fuel(fuel)
    if canonical(a) == canonical(b):
        return True
    if theory.polarized and not isinstance(a, (Var, App)):
        return _valley(a, Polarity.NEGATIVE, b, Polarity.POSITIVE, theory, budget)
    return _lockstep(a, b, theory, budget)


def joinable(t: Term, u: Term, theory: Theory, fuel: int | Fuel = DEFAULT_FUEL) -> bool:
    """True iff ``t`` and ``u`` have a common reduct (full breadth search)."""
    return _valley(t, Polarity.POSITIVE, u, Polarity.POSITIVE, theory, as_fuel(fuel))


# ---------------------------------------------------------------------------
# Validation


def _symbols(x, funs: dict[str, set[int]], preds: dict[str, set[int]]) -> None:
    stack = [x]
    while stack:
        y = stack.pop()
        if isinstance(y, App):
            funs.setdefault(y.fn, set()).add(len(y.args))
            stack.extend(y.args)
        elif isinstance(y, Atom):
            preds.setdefault(y.pred, set()).add(len(y.args))
            stack.extend(y.args)
        elif isinstance(y, Binary):
            stack.extend((y.left, y.right))
        elif isinstance(y, Binder):
            stack.append(y.body)


def rule_violations(r: RewriteRule, sig: Signature | None = None) -> list[str]:
    out = []
    if isinstance(r.lhs, Var):
        out.append(f"{r.name}: variable LHS")
    elif isinstance(r.lhs, App):
        if r.polarity is not RulePolarity.UNPOLARIZED:
            out.append(f"{r.name}: term rules cannot be polarized")
        if not isinstance(r.rhs, (Var, App)):
            out.append(f"{r.name}: term rule with a non-term RHS")
    elif isinstance(r.lhs, Atom):
        if isinstance(r.rhs, (Var, App)):
            out.append(f"{r.name}: proposition rule with a term RHS")
    else:
        out.append(f"{r.name}: non-atomic proposition LHS")
        return out
    lhs_vars = free_vars(r.lhs)
    for v in sorted(free_vars(r.rhs) - lhs_vars):
        out.append(f"{r.name}: {v} not in LHS")
    if sig is not None:
        funs: dict[str, set[int]] = {}
        preds: dict[str, set[int]] = {}
        _symbols(r.lhs, funs, preds)
        _symbols(r.rhs, funs, preds)
        for table, declared, what in ((funs, sig.functions, "function"), (preds, sig.predicates, "predicate")):
            for name in sorted(table):
                if name not in declared:
                    out.append(f"{r.name}: unknown {what} symbol {name!r}")
                elif table[name] != {declared[name]}:
                    out.append(f"{r.name}: {what} {name!r} used with arity {sorted(table[name])}, declared {declared[name]}")
    return out


def validate_theory(theory: Theory) -> list[str]:
    """Return the list of violations; an empty list means the theory is ok."""
    out = []
    names = set()
    for r in theory.rules:
        if r.name in names:
            out.append(f"{r.name}: duplicate rule name")
        names.add(r.name)
        out.extend(rule_violations(r, theory.signature))
    sig = theory.signature
    for op in sig.infix:
        if op not in sig.functions and op not in sig.predicates:
            out.append(f"infix symbol {op!r} is not declared as a function or predicate")
        elif sig.functions.get(op, 2) != 2 or sig.predicates.get(op, 2) != 2:
            out.append(f"infix symbol {op!r} must be binary")
    return out
