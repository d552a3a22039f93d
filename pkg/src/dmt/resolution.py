"""Polarized resolution modulo a theory.

Polarized proposition rules are compiled into one-way clauses.  Resolution
never combines two one-way clauses, and a one-way clause may only be used
through its selected literal (the one standing for the rule's left-hand
side).  Term rules and unpolarized proposition rules act by rewriting
clauses to normal form before they are kept.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .rewrite import (
    DEFAULT_FUEL,
    Fuel,
    FuelExhausted,
    RewriteRule,
    RuleKind,
    RulePolarity,
    Theory,
    as_fuel,
    normalize,
)
from .syntax import (
    App,
    And,
    Atom,
    Bottom,
    Exists,
    Forall,
    Implies,
    Or,
    Polarity,
    Prop,
    Signature,
    Term,
    Top,
    Var,
    depth,
    free_vars,
    fresh,
    show,
    size,
    substitute,
)
from .rewrite import match as match_pattern

# ---------------------------------------------------------------------------
# Clauses


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: Atom

    def negate(self) -> "Literal":
        return Literal(not self.positive, self.atom)

    def show(self, sig: Signature | None = None) -> str:
        return ("+" if self.positive else "-") + show(self.atom, sig)

    def __str__(self) -> str:
        return self.show()


def lit(sign: str, atom: Atom) -> Literal:
    return Literal(sign == "+", atom)


@dataclass(frozen=True)
class Inference:
    """How a clause was obtained.

    ``kind`` is one of ``input``, ``goal``, ``resolvent``, ``factor`` and
    ``rewrite``; ``literals`` holds the literal index used in each parent.
    """

    kind: str
    parents: tuple = ()
    literals: tuple[int, ...] = ()
    mgu: tuple[tuple[str, Term], ...] = ()
    rules: tuple[str, ...] = ()


INPUT = Inference("input")


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]
    origin: Inference = field(default=INPUT, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def show(self, sig: Signature | None = None) -> str:
        return "[" + ", ".join(l.show(sig) for l in self.literals) + "]"

    def __str__(self) -> str:
        return self.show()


def clause(*literals: Literal, origin: Inference = INPUT) -> Clause:
    return Clause(tuple(literals), origin)


@dataclass(frozen=True)
class OneWayClause:
    clause: Clause
    selected: int
    rule: RewriteRule

    @property
    def name(self) -> str:
        return f"ow:{self.rule.name}"

    @property
    def literals(self) -> tuple[Literal, ...]:
        return self.clause.literals

    def __str__(self) -> str:
        parts = []
        for i, l in enumerate(self.clause.literals):
            parts.append(f"_{l}_" if i == self.selected else str(l))
        return "[" + ", ".join(parts) + "]"


AnyClause = Union[Clause, OneWayClause]


def clause_vars(c: AnyClause) -> set[str]:
    out: set[str] = set()
    for l in c.literals:
        out |= free_vars(l.atom)
    return out


def substitute_clause(s, c: Clause, origin: Inference | None = None) -> Clause:
    lits = tuple(Literal(l.positive, substitute(s, l.atom)) for l in c.literals)
    return Clause(lits, c.origin if origin is None else origin)


def is_tautology(c: Clause) -> bool:
    pos = {l.atom for l in c.literals if l.positive}
    return any(not l.positive and l.atom in pos for l in c.literals)


def dedupe(literals: Iterable[Literal]) -> tuple[Literal, ...]:
    return tuple(dict.fromkeys(literals))


def symbol_count(c: AnyClause) -> int:
    return sum(size(l.atom) for l in c.literals)


def max_depth(c: Clause) -> int:
    return max((depth(a) for l in c.literals for a in l.atom.args), default=0)


# ---------------------------------------------------------------------------
# Clausification


def _nnf(p: Prop, positive: bool):
    """Negation normal form as nested tuples."""
    match p:
        case Atom():
            return ("lit", Literal(positive, p))
        case Top():
            return ("top",) if positive else ("bot",)
        case Bottom():
            return ("bot",) if positive else ("top",)
        case And(a, b):
            return ("and" if positive else "or", _nnf(a, positive), _nnf(b, positive))
        case Or(a, b):
            return ("or" if positive else "and", _nnf(a, positive), _nnf(b, positive))
        case Implies(a, b):
            if positive:
                return ("or", _nnf(a, False), _nnf(b, True))
            return ("and", _nnf(a, True), _nnf(b, False))
        case Forall(x, b):
            return ("all" if positive else "ex", x, _nnf(b, positive))
        case Exists(x, b):
            return ("ex" if positive else "all", x, _nnf(b, positive))
    raise TypeError(p)


class _Skolemizer:
    def __init__(self, avoid: set[str]):
        self.avoid = set(avoid)
        self.counter = itertools.count()
        self.created: list[str] = []

    def symbol(self) -> str:
        while True:
            name = f"sk{next(self.counter)}"
            if name not in self.avoid:
                self.avoid.add(name)
                self.created.append(name)
                return name

    def run(self, node, env: dict[str, Term], universals: tuple[str, ...], used: set[str]):
        tag = node[0]
        if tag == "lit":
            l = node[1]
            return ("lit", Literal(l.positive, substitute(env, l.atom)))
        if tag in ("top", "bot"):
            return node
        if tag in ("and", "or"):
            return (tag, self.run(node[1], env, universals, used), self.run(node[2], env, universals, used))
        x = node[1]
        if tag == "all":
            y = x if x not in used else fresh(x, used)
            used.add(y)
            return self.run(node[2], {**env, x: Var(y)}, universals + (y,), used)
        sk = App(self.symbol(), tuple(Var(u) for u in universals))
        return self.run(node[2], {**env, x: sk}, universals, used)


def _cnf(node) -> list[list[Literal]]:
    tag = node[0]
    if tag == "lit":
        return [[node[1]]]
    if tag == "top":
        return []
    if tag == "bot":
        return [[]]
    left, right = _cnf(node[1]), _cnf(node[2])
    if tag == "and":
        return left + right
    return [a + b for a in left for b in right]


def _prop_symbols(p: Prop) -> set[str]:
    out: set[str] = set()
    stack: list = [p]
    while stack:
        x = stack.pop()
        if isinstance(x, App):
            out.add(x.fn)
            stack.extend(x.args)
        elif isinstance(x, Atom):
            out.add(x.pred)
            stack.extend(x.args)
        elif isinstance(x, (And, Or, Implies)):
            stack.extend((x.left, x.right))
        elif isinstance(x, (Forall, Exists)):
            stack.append(x.body)
    return out


def clausify(p: Prop, avoid: Iterable[str] = (), origin: Inference = INPUT,
             skolem: _Skolemizer | None = None) -> list[Clause]:
    """Classical clausal form of ``p``; free variables are read universally.

    Existentials become Skolem symbols ``sk0, sk1, ...`` applied to the
    universal variables in scope, skipping names in ``avoid``.
    """
    sk = skolem or _Skolemizer(set(avoid) | _prop_symbols(p))
    fv = tuple(sorted(free_vars(p)))
    node = sk.run(_nnf(p, True), {}, fv, set(fv))
    out: list[Clause] = []
    seen = set()
    for lits in _cnf(node):
        c = Clause(dedupe(lits), origin)
        if is_tautology(c) or c.literals in seen:
            continue
        seen.add(c.literals)
        out.append(c)
    return out


def clause_prop(c: AnyClause) -> Prop:
    """The clause read back as a disjunction (``false`` when empty)."""
    out: Prop | None = None
    for l in c.literals:
        q = l.atom if l.positive else Implies(l.atom, Bottom())
        out = q if out is None else Or(out, q)
    return Bottom() if out is None else out


# ---------------------------------------------------------------------------
# One-way clauses


class NonClausalRule(ValueError):
    pass


def _disjuncts(p: Prop) -> list[Atom] | None:
    if isinstance(p, Atom):
        return [p]
    if isinstance(p, Or):
        a, b = _disjuncts(p.left), _disjuncts(p.right)
        return None if a is None or b is None else a + b
    return None


def _conjuncts(p: Prop) -> list[Atom] | None:
    if isinstance(p, Atom):
        return [p]
    if isinstance(p, And):
        a, b = _conjuncts(p.left), _conjuncts(p.right)
        return None if a is None or b is None else a + b
    return None


def one_way_clause(r: RewriteRule) -> OneWayClause:
    if r.polarity is RulePolarity.NEGATIVE_ONLY:
        atoms = _disjuncts(r.rhs)
        if atoms is None:
            raise NonClausalRule(f"{r.name}: a negative rule needs a disjunction of atoms on the right")
        lits = (Literal(False, r.lhs),) + tuple(Literal(True, a) for a in atoms)
    elif r.polarity is RulePolarity.POSITIVE_ONLY:
        atoms = _conjuncts(r.rhs)
        if atoms is None:
            raise NonClausalRule(f"{r.name}: a positive rule needs a conjunction of atoms on the right")
        lits = (Literal(True, r.lhs),) + tuple(Literal(False, a) for a in atoms)
    else:
        raise NonClausalRule(f"{r.name}: only polarized rules become one-way clauses")
    return OneWayClause(Clause(lits, Inference("one-way", rules=(r.name,))), 0, r)


def compile_one_way(theory: Theory) -> list[OneWayClause]:
    """One-way clauses for every polarized proposition rule of ``theory``."""
    return [
        one_way_clause(r)
        for r in theory.rules
        if r.kind is RuleKind.PROP and r.polarity is not RulePolarity.UNPOLARIZED
    ]


# ---------------------------------------------------------------------------
# Unification


class InferenceError(Exception):
    pass


class UnificationError(InferenceError):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}{': ' + detail if detail else ''}")
        self.reason = reason


class Blocked(InferenceError):
    pass


def _walk(t: Term, s: dict[str, Term]) -> Term:
    while isinstance(t, Var) and t.name in s:
        t = s[t.name]
    return t


def _occurs(v: str, t: Term, s: dict[str, Term]) -> bool:
    stack = [t]
    while stack:
        u = _walk(stack.pop(), s)
        if isinstance(u, Var):
            if u.name == v:
                return True
        else:
            stack.extend(u.args)
    return False


def _resolve(t: Term, s: dict[str, Term]) -> Term:
    t = _walk(t, s)
    if isinstance(t, Var) or not t.args:
        return t
    return App(t.fn, tuple(_resolve(a, s) for a in t.args))


def unify_terms(pairs: Iterable[tuple[Term, Term]], s: dict[str, Term] | None = None) -> dict[str, Term]:
    s = {} if s is None else dict(s)
    stack = list(pairs)[::-1]
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, s), _walk(b, s)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a.name, b, s):
                raise UnificationError("occurs-check", f"{a.name} in {show(_resolve(b, s))}")
            s[a.name] = b
        elif isinstance(b, Var):
            if _occurs(b.name, a, s):
                raise UnificationError("occurs-check", f"{b.name} in {show(_resolve(a, s))}")
            s[b.name] = a
        elif a.fn != b.fn or len(a.args) != len(b.args):
            raise UnificationError("clash", f"{a.fn} vs {b.fn}")
        else:
            stack.extend(reversed(list(zip(a.args, b.args))))
    return {k: _resolve(Var(k), s) for k in s}


def unify(a: Atom, b: Atom) -> dict[str, Term]:
    """Most general unifier of two atoms (idempotent)."""
    if a.pred != b.pred or len(a.args) != len(b.args):
        raise UnificationError("clash", f"{a.pred} vs {b.pred}")
    return unify_terms(zip(a.args, b.args))


# ---------------------------------------------------------------------------
# Inferences


def rename_apart(c: Clause, avoid: set[str]) -> tuple[Clause, dict[str, Term]]:
    ren: dict[str, Term] = {}
    taken = set(avoid)
    for v in sorted(clause_vars(c)):
        if v in taken:
            new = fresh(v, taken | clause_vars(c))
            taken.add(new)
            ren[v] = Var(new)
    return (substitute_clause(ren, c) if ren else c), ren


def _parts(c: AnyClause) -> tuple[Clause, OneWayClause | None]:
    if isinstance(c, OneWayClause):
        return c.clause, c
    return c, None


def resolve(c1: AnyClause, c2: AnyClause, i: int, j: int) -> Clause:
    """Binary resolvent on literal ``i`` of ``c1`` and ``j`` of ``c2``."""
    a, ow1 = _parts(c1)
    b, ow2 = _parts(c2)
    if ow1 is not None and ow2 is not None:
        raise Blocked("resolution between two one-way clauses")
    for ow, k in ((ow1, i), (ow2, j)):
        if ow is not None and k != ow.selected:
            raise Blocked(f"{ow.name} may only be used through its selected literal")
    b, _ = rename_apart(b, clause_vars(a))
    l1, l2 = a.literals[i], b.literals[j]
    if l1.positive == l2.positive:
        raise InferenceError("literals have the same sign")
    mgu = unify(l1.atom, l2.atom)
    rest = [l for k, l in enumerate(a.literals) if k != i] + [l for k, l in enumerate(b.literals) if k != j]
    lits = dedupe(Literal(l.positive, substitute(mgu, l.atom)) for l in rest)
    origin = Inference("resolvent", (c1, c2), (i, j), tuple(sorted(mgu.items())))
    return Clause(lits, origin)


def factor(c: Clause, i: int, j: int) -> Clause:
    """Merge literal ``j`` into literal ``i`` under their mgu."""
    l1, l2 = c.literals[i], c.literals[j]
    if i == j or l1.positive != l2.positive:
        raise InferenceError("factoring needs two distinct literals of the same sign")
    mgu = unify(l1.atom, l2.atom)
    rest = [l for k, l in enumerate(c.literals) if k != j]
    lits = dedupe(Literal(l.positive, substitute(mgu, l.atom)) for l in rest)
    return Clause(lits, Inference("factor", (c,), (i, j), tuple(sorted(mgu.items()))))


# ---------------------------------------------------------------------------
# Clause rewriting


def _normalize_terms(c: Clause, theory: Theory, budget: Fuel) -> Clause:
    if not any(r.kind is RuleKind.TERM for r in theory.rules):
        return c
    lits = []
    for l in c.literals:
        args = tuple(normalize(a, theory, Polarity.POSITIVE, budget) for a in l.atom.args)
        lits.append(Literal(l.positive, Atom(l.atom.pred, args)))
    return Clause(dedupe(lits), c.origin)


def _literal_rewrites(l: Literal, theory: Theory, polarized: bool) -> list[tuple[RewriteRule, Prop]]:
    """Root rewrites of a clause literal.

    A clause sits on the hypothesis side, so a positive literal is a
    negative occurrence of its atom and a negative literal a positive one.
    """
    occurrence = Polarity.NEGATIVE if l.positive else Polarity.POSITIVE
    out = []
    for r in theory.prop_rules(l.atom.pred):
        if r.polarity is not RulePolarity.UNPOLARIZED and not polarized:
            continue
        if not r.polarity.allows(occurrence):
            continue
        s = match_pattern(r.lhs, l.atom)
        if s is not None:
            out.append((r, substitute(s, r.rhs)))
    return out


def rewrite_clause(c: Clause, theory: Theory, fuel: int | Fuel = DEFAULT_FUEL,
                   polarized: bool = True, skolem: _Skolemizer | None = None) -> list[Clause]:
    """Rewrite a clause to normal form.

    Terms are normalized by the term rules.  Then the leftmost literal with
    an applicable proposition rule is rewritten and the result is put back
    in clausal form: an unpolarized rule gives one rewrite (the first that
    matches), polarized rules give one alternative per matching rule.  This
    repeats on every resulting clause.  With ``polarized=False`` only the
    unpolarized rules are used.
    """
    budget = as_fuel(fuel)
    sk = skolem or _Skolemizer(set(theory.signature.symbols()))
    out: dict[tuple, Clause] = {}
    todo = [c]
    while todo:
        cur = _normalize_terms(todo.pop(), theory, budget)
        for k, l in enumerate(cur.literals):
            rewrites = _literal_rewrites(l, theory, polarized)
            unpolarized = [rw for rw in rewrites if rw[0].polarity is RulePolarity.UNPOLARIZED]
            if unpolarized:
                rewrites = unpolarized[:1]
            if rewrites:
                break
        else:
            if cur.literals not in out:
                out[cur.literals] = cur
            continue
        budget.spend()
        produced = []
        for rule, rhs in rewrites:
            q = rhs if l.positive else Implies(rhs, Bottom())
            origin = Inference("rewrite", (cur,), (k,), (), (rule.name,))
            for piece in clausify(q, origin=origin, skolem=sk):
                lits = cur.literals[:k] + piece.literals + cur.literals[k + 1:]
                new = Clause(dedupe(lits), origin)
                if not is_tautology(new):
                    produced.append(new)
        todo.extend(reversed(produced))
    return list(out.values())


# ---------------------------------------------------------------------------
# Saturation


@dataclass(frozen=True)
class Limits:
    max_clauses: int = 50_000
    max_steps: int | None = None
    max_depth: int | None = None
    fuel: int = DEFAULT_FUEL


@dataclass
class Refutation:
    empty: Clause
    generated: int
    steps: int

    status = "refutation"


@dataclass
class Saturated:
    generated: int
    steps: int

    status = "saturated"


@dataclass
class ResourceOut:
    reason: str
    generated: int
    steps: int

    status = "resource-out"


Outcome = Union[Refutation, Saturated, ResourceOut]


def _shape(t: Term, ren: dict | None) -> tuple:
    if isinstance(t, Var):
        if ren is None:
            return ("_",)
        return ("%", ren.setdefault(t.name, len(ren)))
    return (t.fn,) + tuple(_shape(a, ren) for a in t.args)


def variant_key(c: Clause) -> tuple:
    """A key equal for clauses that are variants of each other
    (same literals up to order and consistent variable renaming)."""
    def lit_shape(l: Literal, ren) -> tuple:
        return (l.positive, l.atom.pred) + tuple(_shape(a, ren) for a in l.atom.args)

    lits = sorted(c.literals, key=lambda l: lit_shape(l, None))
    ren: dict[str, int] = {}
    return tuple(sorted(lit_shape(l, ren) for l in lits))


def _vars_in_order(a: Atom) -> list[str]:
    out: list[str] = []
    stack = list(reversed(a.args))
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            if t.name not in out:
                out.append(t.name)
        else:
            stack.extend(reversed(t.args))
    return out


def canonical_vars(c: Clause) -> Clause:
    """Rename variables to X0, X1, ... in order of appearance."""
    ren: dict[str, Term] = {}
    for l in c.literals:
        for v in _vars_in_order(l.atom):
            if v not in ren:
                ren[v] = Var(f"X{len(ren)}")
    if all(ren[v] == Var(v) for v in ren):
        return c
    return substitute_clause(ren, c)


class Saturation:
    """Given-clause loop state; one refutation attempt per instance."""

    def __init__(self, theory: Theory, limits: Limits = Limits()):
        self.theory = theory
        self.limits = limits
        self.one_way = compile_one_way(theory)
        self.simplify_theory = theory.only([RulePolarity.UNPOLARIZED])
        self.skolem = _Skolemizer(set(theory.signature.symbols()))
        self.processed: list[Clause] = []
        self.queue: list[tuple[int, int, int, Clause]] = []
        self.seen: set[tuple] = set()
        self.kept: list[Clause] = []
        self.generated = 0
        self.steps = 0
        self.dropped_deep = 0
        self.empty: Clause | None = None

    def add(self, c: Clause) -> None:
        self.generated += 1
        budget = Fuel(self.limits.fuel, "clause rewriting")
        for d in rewrite_clause(c, self.simplify_theory, budget, polarized=False, skolem=self.skolem):
            if d is not c and d.literals != c.literals:
                d = Clause(d.literals, Inference("rewrite", (c,), (), (), _rules_used(d)))
            d = canonical_vars(d)
            if is_tautology(d):
                continue
            key = variant_key(d)
            if key in self.seen:
                continue
            if self.limits.max_depth is not None and max_depth(d) > self.limits.max_depth:
                self.dropped_deep += 1
                continue
            self.seen.add(key)
            self.kept.append(d)
            if d.is_empty:
                self.empty = d
                return
            heapq.heappush(self.queue, (len(d), symbol_count(d), len(self.kept), d))

    def inferences(self, given: Clause) -> Iterator[Clause]:
        for i, j in itertools.combinations(range(len(given)), 2):
            try:
                yield factor(given, i, j)
            except InferenceError:
                pass
        partners: list[AnyClause] = list(self.processed)
        partners += self.one_way
        for other in partners:
            for i, l1 in enumerate(given.literals):
                js = range(len(other.literals))
                if isinstance(other, OneWayClause):
                    js = [other.selected]
                for j in js:
                    l2 = other.literals[j]
                    if l1.positive == l2.positive or l1.atom.pred != l2.atom.pred:
                        continue
                    try:
                        yield resolve(given, other, i, j)
                    except InferenceError:
                        pass

    def run(self, clauses: Iterable[Clause]) -> Outcome:
        try:
            for c in clauses:
                self.add(c)
                if self.empty is not None:
                    return Refutation(self.empty, self.generated, self.steps)
            while self.queue:
                if len(self.kept) >= self.limits.max_clauses:
                    return ResourceOut("max clauses", self.generated, self.steps)
                if self.limits.max_steps is not None and self.steps >= self.limits.max_steps:
                    return ResourceOut("max steps", self.generated, self.steps)
                *_, given = heapq.heappop(self.queue)
                self.steps += 1
                self.processed.append(given)
                for new in self.inferences(given):
                    self.add(new)
                    if self.empty is not None:
                        return Refutation(self.empty, self.generated, self.steps)
                    if len(self.kept) >= self.limits.max_clauses:
                        return ResourceOut("max clauses", self.generated, self.steps)
        except FuelExhausted:
            return ResourceOut("fuel", self.generated, self.steps)
        if self.dropped_deep:
            return ResourceOut("max depth", self.generated, self.steps)
        return Saturated(self.generated, self.steps)


def _rules_used(c: Clause) -> tuple[str, ...]:
    names: list[str] = []
    stack = [c]
    while stack:
        d = stack.pop()
        if d.origin.kind != "rewrite":
            continue
        for n in d.origin.rules:
            if n not in names:
                names.append(n)
        stack.extend(p for p in d.origin.parents if isinstance(p, Clause))
    return tuple(names)


def refute(theory: Theory, clauses: Iterable[Clause], limits: Limits = Limits()) -> Outcome:
    """Search for the empty clause by given-clause saturation.

    The lightest unprocessed clause (fewest literals, then fewest symbols,
    then oldest) is selected each round.  ``Saturated`` does not claim the
    input is satisfiable: completeness depends on cut elimination for the
    theory, which is not checked.
    """
    return Saturation(theory, limits).run(clauses)


# ---------------------------------------------------------------------------
# Derivations


@dataclass(frozen=True)
class TraceStep:
    number: int
    clause: Clause
    kind: str
    parents: tuple[str, ...]
    literals: tuple[int, ...]
    mgu: tuple[tuple[str, Term], ...]
    rules: tuple[str, ...]


def derivation(c: Clause) -> list[TraceStep]:
    """The derivation DAG of ``c`` in dependency order, one step per clause."""
    numbers: dict[int, int] = {}
    steps: list[TraceStep] = []

    def label(p) -> str:
        if isinstance(p, OneWayClause):
            return p.name
        return str(numbers[id(p)])

    def visit(d: Clause) -> None:
        if id(d) in numbers:
            return
        for p in d.origin.parents:
            if isinstance(p, Clause):
                visit(p)
        numbers[id(d)] = len(steps) + 1
        o = d.origin
        steps.append(TraceStep(len(steps) + 1, d, o.kind, tuple(label(p) for p in o.parents),
                               o.literals, o.mgu, o.rules))

    visit(c)
    return steps


def format_step(st: TraceStep, sig: Signature | None = None) -> str:
    head = f"{st.number}. {st.clause.show(sig)}"
    mgu = "{" + ", ".join(f"{k}↦{show(v, sig)}" for k, v in st.mgu) + "}"
    if st.kind in ("input", "goal"):
        return f"{head}  {st.kind}"
    if st.kind == "resolvent":
        parts = []
        for p, i in zip(st.parents, st.literals):
            parts.append(f"{p} (selected)" if p.startswith("ow:") else f"{p} (lit {i + 1})")
        return f"{head}  resolvent of {parts[0]} and {parts[1]} with {mgu}"
    if st.kind == "factor":
        i, j = st.literals
        return f"{head}  factor of {st.parents[0]} (lits {i + 1}, {j + 1}) with {mgu}"
    return f"{head}  rewrite of {st.parents[0]} by {', '.join(st.rules)}"


# ---------------------------------------------------------------------------
# Problem files


def parse_literal(text: str, sig: Signature | None = None) -> Literal:
    from .parser import ParseError, parse_prop
    text = text.strip()
    if not text or text[0] not in "+-":
        raise ParseError(f"literal must start with + or -: {text!r}")
    a = parse_prop(text[1:], sig)
    if not isinstance(a, Atom):
        raise ParseError(f"literal is not atomic: {text!r}")
    return Literal(text[0] == "+", a)


@dataclass
class Problem:
    clauses: list[Clause]
    signature: Signature


def parse_problem(text: str, base: Signature | None = None) -> Problem:
    """Read a ``.dmc`` file.

    ``clause +in(a,b) | -p(x)`` adds a clause, ``goal <prop>`` adds the
    clausal form of the negated (universally closed) goal.  Signature lines
    (``fun a 0`` ...) declare constants and symbols.
    """
    from .parser import ParseError, parse_prop
    from .theoryfile import SignatureBuilder

    sig_builder = SignatureBuilder(base)
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if sig_builder.feed(line, lineno):
            continue
        kind, _, rest = line.partition(" ")
        if kind not in ("clause", "goal"):
            raise ParseError(f"cannot read line: {line!r}", lineno)
        entries.append((lineno, kind, rest.strip()))
    sig = sig_builder.build()
    clauses: list[Clause] = []
    avoid = set(sig.symbols())
    skolem = _Skolemizer(avoid)
    for lineno, kind, rest in entries:
        try:
            if kind == "clause":
                lits = [] if rest in ("", "[]") else [parse_literal(s, sig) for s in rest.split("|")]
                clauses.append(Clause(tuple(lits)))
            else:
                g = parse_prop(rest, sig)
                for v in sorted(free_vars(g), reverse=True):
                    g = Forall(v, g)
                clauses.extend(clausify(Implies(g, Bottom()), origin=Inference("goal"), skolem=skolem))
        except ParseError as err:
            raise ParseError(err.message, lineno, err.column) from None
    return Problem(clauses, sig)
