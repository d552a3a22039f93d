"""Independent reference implementations used as test oracles.

Nothing here calls the package's rewriting, matching or unification code.
Terms are converted to plain tuples first: ``("S", t)``, ``("+", t, u)``,
``("0",)`` and ``("var", name)``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from dmt.syntax import And, App, Atom, Bottom, Implies, Or, Top, Var

# ---------------------------------------------------------------------------
# Arithmetic


def to_tuple(t) -> tuple:
    if isinstance(t, Var):
        return ("var", t.name)
    return (t.fn,) + tuple(to_tuple(a) for a in t.args)


def from_tuple(t: tuple):
    if t[0] == "var":
        return Var(t[1])
    return App(t[0], tuple(from_tuple(a) for a in t[1:]))


def eval_nat(t: tuple) -> int:
    """Value of a ground {0, S, +} term by structural recursion."""
    head = t[0]
    if head == "0":
        return 0
    if head == "S":
        return eval_nat(t[1]) + 1
    if head == "+":
        return eval_nat(t[1]) + eval_nat(t[2])
    raise ValueError(f"not a ground arithmetic term: {t}")


def eval_prop(p) -> bool:
    """Truth value of a quantifier-free ground arithmetic proposition."""
    if isinstance(p, Top):
        return True
    if isinstance(p, Bottom):
        return False
    if isinstance(p, Atom):
        assert p.pred == "=" and len(p.args) == 2
        a, b = (eval_nat(to_tuple(x)) for x in p.args)
        return a == b
    if isinstance(p, And):
        return eval_prop(p.left) and eval_prop(p.right)
    if isinstance(p, Or):
        return eval_prop(p.left) or eval_prop(p.right)
    if isinstance(p, Implies):
        return (not eval_prop(p.left)) or eval_prop(p.right)
    raise ValueError(f"unsupported proposition {p!r}")


# ---------------------------------------------------------------------------
# Brute-force reduction for the two addition rules


def _root_reducts(t: tuple) -> list[tuple]:
    out = []
    if t[0] == "+":
        left, right = t[1], t[2]
        if left == ("0",):
            out.append(right)
        if left[0] == "S":
            out.append(("S", ("+", left[1], right)))
    return out


def one_step(t: tuple) -> set[tuple]:
    """Every term reachable in exactly one step, at any position."""
    out = set(_root_reducts(t))
    if t[0] != "var":
        for i in range(1, len(t)):
            for r in one_step(t[i]):
                out.add(t[:i] + (r,) + t[i + 1:])
    return out


@lru_cache(maxsize=None)
def reachable(t: tuple) -> frozenset:
    """All reducts of ``t`` (reflexive), by exhaustive exploration."""
    seen = {t}
    todo = [t]
    while todo:
        for r in one_step(todo.pop()):
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return frozenset(seen)


def normal_forms(t: tuple) -> set[tuple]:
    return {r for r in reachable(t) if not one_step(r)}


def tuple_size(t: tuple) -> int:
    if t[0] == "var":
        return 1
    return 1 + sum(tuple_size(a) for a in t[1:])


def all_terms(max_size: int, variables: tuple[str, ...] = ()) -> list[tuple]:
    """All terms over 0, S, + (and the given variables) of size <= max_size."""
    by_size: dict[int, list[tuple]] = {1: [("0",)] + [("var", v) for v in variables]}
    for n in range(2, max_size + 1):
        terms = [("S", t) for t in by_size[n - 1]]
        for k in range(1, n - 1):
            for a in by_size[k]:
                for b in by_size[n - 1 - k]:
                    terms.append(("+", a, b))
        by_size[n] = terms
    return [t for n in sorted(by_size) for t in by_size[n]]


# ---------------------------------------------------------------------------
# Ground clause semantics


def ground_term(t, env: dict[str, tuple]) -> tuple:
    if isinstance(t, Var):
        return env[t.name]
    return (t.fn,) + tuple(ground_term(a, env) for a in t.args)


def ground_literal(lit, env) -> tuple[bool, tuple]:
    return lit.positive, (lit.atom.pred,) + tuple(ground_term(a, env) for a in lit.atom.args)


def literal_vars(lits) -> list[str]:
    out: list[str] = []

    def walk(t):
        if isinstance(t, Var):
            if t.name not in out:
                out.append(t.name)
        else:
            for a in t.args:
                walk(a)

    for l in lits:
        for a in l.atom.args:
            walk(a)
    return out


def herbrand_universe(constants, functions, depth: int = 2) -> list[tuple]:
    """Ground terms of depth <= ``depth`` (a constant has depth 1)."""
    terms = [(c,) for c in constants]
    for _ in range(depth - 1):
        new = list(terms)
        for f, n in functions.items():
            for args in itertools.product(terms, repeat=n):
                t = (f,) + args
                if t not in new:
                    new.append(t)
        terms = new
    return terms


def ground_instances(lits, universe):
    vs = literal_vars(lits)
    for values in itertools.product(universe, repeat=len(vs)):
        env = dict(zip(vs, values))
        yield tuple(ground_literal(l, env) for l in lits)


def entails(premises: list[tuple], conclusion: tuple) -> bool:
    """Truth-table check that the ground premises entail the ground clause.

    Clauses are tuples of (sign, ground atom).  Only assignments falsifying
    the conclusion matter, which fixes its atoms; the remaining atoms are
    enumerated at once as rows of a boolean matrix.
    """
    fixed: dict[tuple, bool] = {}
    for sign, a in conclusion:
        if fixed.get(a, not sign) == sign:
            return True  # tautology
        fixed[a] = not sign
    live = []
    for c in premises:
        if any(fixed.get(a) == sign for sign, a in c):
            continue
        live.append([(sign, a) for sign, a in c if a not in fixed])
    atoms = sorted({a for c in live for _, a in c})
    index = {a: i for i, a in enumerate(atoms)}
    n = len(atoms)
    assert n <= 20, "truth table too large"
    rows = ((np.arange(2 ** n)[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)
    ok = np.ones(len(rows), dtype=bool)
    for c in live:
        v = np.zeros(len(rows), dtype=bool)
        for sign, a in c:
            col = rows[:, index[a]]
            v |= col if sign else ~col
        ok &= v
    return not ok.any()


def _match(pattern, ground: tuple, env: dict) -> dict | None:
    if isinstance(pattern, Var):
        bound = env.get(pattern.name)
        if bound is None:
            return {**env, pattern.name: ground}
        return env if bound == ground else None
    if ground[0] != pattern.fn or len(ground) != len(pattern.args) + 1:
        return None
    for p, g in zip(pattern.args, ground[1:]):
        env = _match(p, g, env)
        if env is None:
            return None
    return env


def _match_atom(atom, ground: tuple, env: dict) -> dict | None:
    if ground[0] != atom.pred or len(ground) != len(atom.args) + 1:
        return None
    for p, g in zip(atom.args, ground[1:]):
        env = _match(p, g, env)
        if env is None:
            return None
    return env


def near_instances(lits, atoms: set, universe, extra: bool = True):
    """Ground instances of ``lits`` whose atoms lie in ``atoms``.

    With ``extra`` one literal may fall outside; variables occurring only
    there range over ``universe``.
    """
    lits = list(lits)
    out = set()

    def go(k: int, env: dict, spare: bool):
        if k == len(lits):
            rest = [v for v in literal_vars(lits) if v not in env]
            for values in itertools.product(universe, repeat=len(rest)):
                full = {**env, **dict(zip(rest, values))}
                out.add(tuple(ground_literal(l, full) for l in lits))
            return
        for g in atoms:
            e = _match_atom(lits[k].atom, g, env)
            if e is not None:
                go(k + 1, e, spare)
        if spare:
            go(k + 1, env, False)

    go(0, {}, extra)
    return out


def _subterms(atom: tuple) -> set:
    out = set()
    todo = list(atom[1:])
    while todo:
        t = todo.pop()
        out.add(t)
        todo.extend(t[1:])
    return out


def sound_inference(parents: list, child, universe) -> tuple[bool, tuple | None]:
    """Ground soundness of deriving ``child`` from ``parents``.

    ``parents`` are sequences of literals (clauses, one-way clauses or
    rule clauses).  The child is grounded over ``universe``.  For a ground
    child instance with atoms ``A``, every parent instance with at most one
    atom outside ``A`` proposes that atom (variables only that atom binds
    range over the universe and every ground subterm seen so far); atoms proposed by two or more
    parents are the pivots (an atom only one parent mentions cannot link
    it to the others).  With no pivot, or else for some pivot ``e``,
    the parent instances over ``A + {e}`` are found by matching, and some
    pivot must make them entail the child instance by truth table.  A pass
    is a genuine check since entailment by some instances implies
    entailment by all.  Returns the first failing child instance, if any.
    """
    for ci in ground_instances(child, universe):
        catoms = {a for _, a in ci}
        if entails([i for p in parents for i in near_instances(p, catoms, universe, extra=False)], ci):
            continue
        # fillers: the universe plus every ground subterm a first pass can see
        fill = set(universe)
        for p in parents:
            for inst in near_instances(p, catoms, universe):
                for _, a in inst:
                    fill |= _subterms(a)
        for a in catoms:
            fill |= _subterms(a)
        fill = sorted(fill)
        proposed: dict = {}
        for k, p in enumerate(parents):
            for inst in near_instances(p, catoms, fill):
                for _, a in inst:
                    if a not in catoms:
                        proposed.setdefault(a, set()).add(k)
        pivots = [a for a, ks in proposed.items() if len(ks) > 1]
        for e in pivots:
            scope = catoms | {e}
            insts = [i for p in parents for i in near_instances(p, scope, universe, extra=False)]
            if entails(insts, ci):
                break
        else:
            return False, ci
    return True, None


# ---------------------------------------------------------------------------
# Rules read as clauses


class Lit:
    def __init__(self, positive: bool, atom):
        self.positive, self.atom = positive, atom


def _atoms_of(p, connective) -> list:
    if isinstance(p, connective):
        return _atoms_of(p.left, connective) + _atoms_of(p.right, connective)
    assert isinstance(p, Atom), f"rule shape outside the oracle's reach: {p!r}"
    return [p]


def rule_clauses(rule) -> list[list[Lit]]:
    """Clauses of a proposition rule read as a formula.

    Unpolarized ``P --> A`` is ``P <=> A``, negative-only is ``P => A`` and
    positive-only is ``A => P``.  ``A`` must be an atom, a disjunction of
    atoms or a conjunction of atoms.
    """
    lhs, rhs, pol = rule.lhs, rule.rhs, rule.polarity.value
    if isinstance(rhs, And):
        parts = _atoms_of(rhs, And)
        forward = [[Lit(False, lhs), Lit(True, a)] for a in parts]           # P => A
        backward = [[Lit(True, lhs)] + [Lit(False, a) for a in parts]]       # A => P
    else:
        parts = _atoms_of(rhs, Or)
        forward = [[Lit(False, lhs)] + [Lit(True, a) for a in parts]]
        backward = [[Lit(True, lhs), Lit(False, a)] for a in parts]
    if pol == "-":
        return forward
    if pol == "+":
        return backward
    return forward + backward


# ---------------------------------------------------------------------------
# Finite relational structures


def eval_fol(p, domain, relations: dict, env: dict) -> bool:
    """Truth of a function-free proposition in a finite structure.

    ``relations`` maps each predicate to the set of argument tuples where it
    holds; atom arguments must be variables bound in ``env``.
    """
    from dmt.syntax import Exists, Forall

    if isinstance(p, Top):
        return True
    if isinstance(p, Bottom):
        return False
    if isinstance(p, Atom):
        return tuple(env[a.name] for a in p.args) in relations[p.pred]
    if isinstance(p, And):
        return eval_fol(p.left, domain, relations, env) and eval_fol(p.right, domain, relations, env)
    if isinstance(p, Or):
        return eval_fol(p.left, domain, relations, env) or eval_fol(p.right, domain, relations, env)
    if isinstance(p, Implies):
        return not eval_fol(p.left, domain, relations, env) or eval_fol(p.right, domain, relations, env)
    if isinstance(p, Forall):
        return all(eval_fol(p.body, domain, relations, {**env, p.var: d}) for d in domain)
    if isinstance(p, Exists):
        return any(eval_fol(p.body, domain, relations, {**env, p.var: d}) for d in domain)
    raise ValueError(f"unsupported proposition {p!r}")


def structures(predicates: dict[str, int], domain) -> list[dict]:
    """Every interpretation of the predicates over ``domain``."""
    per_pred = []
    for name, n in sorted(predicates.items()):
        tuples = list(itertools.product(domain, repeat=n))
        per_pred.append([(name, {t for t, keep in zip(tuples, bits) if keep})
                         for bits in itertools.product((False, True), repeat=len(tuples))])
    return [dict(choice) for choice in itertools.product(*per_pred)]
