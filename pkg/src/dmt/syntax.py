"""First-order terms and propositions.

Everything here is immutable.  Terms are variables or applications
(constants are 0-ary applications); propositions are atoms, the two
constants, the three binary connectives and the two quantifiers.  There is
no negation node: ``~A`` is ``A => false``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        return show(self)


Term = Union[Var, App]


# ---------------------------------------------------------------------------
# Propositions


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "false"


@dataclass(frozen=True)
class And:
    left: "Prop"
    right: "Prop"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Or:
    left: "Prop"
    right: "Prop"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Implies:
    left: "Prop"
    right: "Prop"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Prop"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Prop"

    def __str__(self) -> str:
        return show(self)


Prop = Union[Atom, Top, Bottom, And, Or, Implies, Forall, Exists]
Binary = (And, Or, Implies)
Binder = (Forall, Exists)

TOP = Top()
BOTTOM = Bottom()


def Not(p: Prop) -> Implies:
    return Implies(p, BOTTOM)


def Iff(p: Prop, q: Prop) -> And:
    return And(Implies(p, q), Implies(q, p))


def is_term(x) -> bool:
    return isinstance(x, (Var, App))


def numeral(n: int) -> Term:
    t: Term = App("0")
    for _ in range(n):
        t = App("S", (t,))
    return t


def numeral_value(t: Term) -> int | None:
    """Return n if ``t`` is S^n(0), else None."""
    n = 0
    while isinstance(t, App) and t.fn == "S" and len(t.args) == 1:
        t = t.args[0]
        n += 1
    if isinstance(t, App) and t.fn == "0" and not t.args:
        return n
    return None


# ---------------------------------------------------------------------------
# Signatures


class Assoc(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    NONE = "none"


@dataclass(frozen=True)
class Fixity:
    precedence: int
    assoc: Assoc


@dataclass(frozen=True)
class Signature:
    """Function and predicate symbols with arities, plus infix declarations.

    Identifiers declared as 0-ary functions are constants; any other bare
    identifier in term position is a variable.
    """

    functions: Mapping[str, int] = field(default_factory=dict)
    predicates: Mapping[str, int] = field(default_factory=dict)
    infix: Mapping[str, Fixity] = field(default_factory=dict)

    def is_constant(self, name: str) -> bool:
        return self.functions.get(name) == 0

    def symbols(self) -> set[str]:
        return set(self.functions) | set(self.predicates)

    def merge(self, other: "Signature") -> "Signature":
        for table, o in ((self.functions, other.functions), (self.predicates, other.predicates)):
            for name, arity in o.items():
                if table.get(name, arity) != arity:
                    raise ValueError(f"symbol {name!r} declared with arities {table[name]} and {arity}")
        for name in set(self.functions) & set(other.predicates) | set(self.predicates) & set(other.functions):
            raise ValueError(f"symbol {name!r} declared both as function and predicate")
        for name, fx in other.infix.items():
            if self.infix.get(name, fx) != fx:
                raise ValueError(f"conflicting infix declarations for {name!r}")
        return Signature(
            {**self.functions, **other.functions},
            {**self.predicates, **other.predicates},
            {**self.infix, **other.infix},
        )

    def with_constants(self, *names: str) -> "Signature":
        return self.merge(Signature({n: 0 for n in names}))


DEFAULT_INFIX: dict[str, Fixity] = {
    "+": Fixity(6, Assoc.LEFT),
    "=": Fixity(4, Assoc.NONE),
}

BASE_SIGNATURE = Signature(
    functions={"0": 0, "S": 1, "+": 2},
    predicates={"=": 2},
    infix=DEFAULT_INFIX,
)


def infix_table(sig: Signature | None) -> Mapping[str, Fixity]:
    if sig is None or not sig.infix:
        return DEFAULT_INFIX
    return sig.infix


def infix_predicates(sig: Signature | None) -> set[str]:
    table = infix_table(sig)
    if sig is None or not sig.infix:
        return {"="}
    return {op for op in table if op in sig.predicates or (op == "=" and op not in sig.functions)}


# ---------------------------------------------------------------------------
# Polarity


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    def flip(self) -> "Polarity":
        return Polarity.NEGATIVE if self is Polarity.POSITIVE else Polarity.POSITIVE


# ---------------------------------------------------------------------------
# Free variables


def term_vars(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.add(u.name)
        else:
            stack.extend(u.args)
    return out


def free_vars(x) -> set[str]:
    """Free variables of a term, a proposition, or a context.

    A context is any iterable of ``(name, proposition)`` pairs.
    """
    if isinstance(x, (Var, App)):
        return term_vars(x)
    if isinstance(x, Atom):
        out: set[str] = set()
        for a in x.args:
            out |= term_vars(a)
        return out
    if isinstance(x, (Top, Bottom)):
        return set()
    if isinstance(x, Binary):
        return free_vars(x.left) | free_vars(x.right)
    if isinstance(x, Binder):
        return free_vars(x.body) - {x.var}
    out = set()
    for _, p in x:
        out |= free_vars(p)
    return out


def all_names(x) -> set[str]:
    """Every variable name occurring in x, free or bound."""
    if isinstance(x, (Var, App, Atom, Top, Bottom)):
        return free_vars(x)
    if isinstance(x, Binary):
        return all_names(x.left) | all_names(x.right)
    return all_names(x.body) | {x.var}


def fresh(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


# ---------------------------------------------------------------------------
# Substitution

Substitution = Mapping[str, Term]


def _subst_term(s: Substitution, t: Term) -> Term:
    if isinstance(t, Var):
        return s.get(t.name, t)
    if not t.args:
        return t
    return App(t.fn, tuple(_subst_term(s, a) for a in t.args))


def substitute(s: Substitution, x):
    """Capture-avoiding simultaneous substitution into a term or proposition."""
    if not s:
        return x
    if isinstance(x, (Var, App)):
        return _subst_term(s, x)
    return _subst_prop(dict(s), x)


def _range_vars(s: Substitution, keys: Iterable[str]) -> set[str]:
    out: set[str] = set()
    for k in keys:
        out |= term_vars(s[k])
    return out


def _subst_prop(s: dict[str, Term], p: Prop) -> Prop:
    if isinstance(p, Atom):
        if not p.args:
            return p
        return Atom(p.pred, tuple(_subst_term(s, a) for a in p.args))
    if isinstance(p, (Top, Bottom)):
        return p
    if isinstance(p, Binary):
        return type(p)(_subst_prop(s, p.left), _subst_prop(s, p.right))
    # binder
    fv = free_vars(p)
    live = {k: v for k, v in s.items() if k in fv}
    if not live:
        return p
    x = p.var
    body = p.body
    if x in _range_vars(live, live):
        y = fresh(x, _range_vars(live, live) | all_names(body) | set(live))
        live[x] = Var(y)
        x = y
    else:
        live.pop(x, None)
    return type(p)(x, _subst_prop(live, body))


def compose(s: Substitution, t: Substitution) -> dict[str, Term]:
    """The substitution that applies ``t`` first, then ``s``."""
    out = {k: _subst_term(s, v) for k, v in t.items()}
    for k, v in s.items():
        out.setdefault(k, v)
    return {k: v for k, v in out.items() if v != Var(k)}


# ---------------------------------------------------------------------------
# Alpha-equivalence


def canonical(x):
    """Rename bound variables by binding depth.

    The generated names ``%0, %1, ...`` are not identifiers, so they never
    clash with free variables.  Two propositions are alpha-equivalent iff
    their canonical forms are equal.
    """
    if isinstance(x, (Var, App)):
        return x
    return _canon(x, {}, 0)


def _canon(p: Prop, env: dict[str, Term], depth: int) -> Prop:
    if isinstance(p, Atom):
        if not env or not p.args:
            return p
        return Atom(p.pred, tuple(_subst_term(env, a) for a in p.args))
    if isinstance(p, (Top, Bottom)):
        return p
    if isinstance(p, Binary):
        return type(p)(_canon(p.left, env, depth), _canon(p.right, env, depth))
    name = f"%{depth}"
    return type(p)(name, _canon(p.body, {**env, p.var: Var(name)}, depth + 1))


def alpha_eq(a, b) -> bool:
    return canonical(a) == canonical(b)


# ---------------------------------------------------------------------------
# Occurrences and positions

Path = tuple[int, ...]


def atom_occurrences(p: Prop, base: Polarity = Polarity.POSITIVE) -> list[tuple[Path, Atom, Polarity]]:
    """Every atom occurrence in ``p`` with its path and polarity.

    Polarity flips on the left of an implication and is preserved
    everywhere else.
    """
    out: list[tuple[Path, Atom, Polarity]] = []

    def walk(q: Prop, path: Path, pol: Polarity) -> None:
        if isinstance(q, Atom):
            out.append((path, q, pol))
        elif isinstance(q, Implies):
            walk(q.left, path + (0,), pol.flip())
            walk(q.right, path + (1,), pol)
        elif isinstance(q, Binary):
            walk(q.left, path + (0,), pol)
            walk(q.right, path + (1,), pol)
        elif isinstance(q, Binder):
            walk(q.body, path + (0,), pol)

    walk(p, (), base)
    return out


def subterm_at(x, path: Path):
    for i in path:
        if isinstance(x, (App, Atom)):
            x = x.args[i]
        elif isinstance(x, Binary):
            x = (x.left, x.right)[i]
        elif isinstance(x, Binder):
            if i != 0:
                raise IndexError(i)
            x = x.body
        else:
            raise IndexError(i)
    return x


def replace_at(x, path: Path, new):
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(x, App):
        args = list(x.args)
        args[i] = replace_at(args[i], rest, new)
        return App(x.fn, tuple(args))
    if isinstance(x, Atom):
        args = list(x.args)
        args[i] = replace_at(args[i], rest, new)
        return Atom(x.pred, tuple(args))
    if isinstance(x, Binary):
        if i == 0:
            return type(x)(replace_at(x.left, rest, new), x.right)
        return type(x)(x.left, replace_at(x.right, rest, new))
    if isinstance(x, Binder) and i == 0:
        return type(x)(x.var, replace_at(x.body, rest, new))
    raise IndexError(i)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def size(x) -> int:
    """Number of symbol and variable occurrences."""
    if isinstance(x, Var):
        return 1
    if isinstance(x, (App, Atom)):
        return 1 + sum(size(a) for a in x.args)
    if isinstance(x, (Top, Bottom)):
        return 1
    if isinstance(x, Binary):
        return 1 + size(x.left) + size(x.right)
    return 1 + size(x.body)


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 1
    return 1 + max(depth(a) for a in t.args)


# ---------------------------------------------------------------------------
# Printing

_IMP, _OR, _AND, _UNARY = 1, 2, 3, 4


def show(x, sig: Signature | None = None) -> str:
    """Print a term or proposition in the concrete syntax accepted by the parser."""
    fix = infix_table(sig)
    if isinstance(x, (Var, App)):
        return _show_term(x, fix, 0)
    return _show_prop(x, fix, 0)


def _show_term(t: Term, fix: Mapping[str, Fixity], ctx: int) -> str:
    if isinstance(t, Var):
        return t.name
    n = numeral_value(t)
    if n is not None:
        return str(n)
    if len(t.args) == 2 and t.fn in fix:
        f = fix[t.fn]
        lp = f.precedence + (0 if f.assoc is Assoc.LEFT else 1)
        rp = f.precedence + (0 if f.assoc is Assoc.RIGHT else 1)
        s = f"{_show_term(t.args[0], fix, lp)} {t.fn} {_show_term(t.args[1], fix, rp)}"
        return f"({s})" if f.precedence < ctx else s
    if not t.args:
        return t.fn
    return f"{t.fn}({', '.join(_show_term(a, fix, 0) for a in t.args)})"


def _show_prop(p: Prop, fix: Mapping[str, Fixity], ctx: int) -> str:
    if isinstance(p, Top):
        return "true"
    if isinstance(p, Bottom):
        return "false"
    if isinstance(p, Atom):
        if len(p.args) == 2 and p.pred in fix:
            prec = fix[p.pred].precedence + 1
            return f"{_show_term(p.args[0], fix, prec)} {p.pred} {_show_term(p.args[1], fix, prec)}"
        if not p.args:
            return p.pred
        return f"{p.pred}({', '.join(_show_term(a, fix, 0) for a in p.args)})"
    if isinstance(p, Implies) and isinstance(p.right, Bottom):
        return "~" + _show_prop(p.left, fix, _UNARY)
    if isinstance(p, Binary):
        prec, op = {And: (_AND, "&"), Or: (_OR, "|"), Implies: (_IMP, "=>")}[type(p)]
        if isinstance(p, Implies):
            lp, rp = prec + 1, prec
        else:
            lp, rp = prec, prec + 1
        s = f"{_show_prop(p.left, fix, lp)} {op} {_show_prop(p.right, fix, rp)}"
        return f"({s})" if prec < ctx else s
    q = "forall" if isinstance(p, Forall) else "exists"
    s = f"{q} {p.var}. {_show_prop(p.body, fix, 0)}"
    return f"({s})" if ctx > 0 else s
