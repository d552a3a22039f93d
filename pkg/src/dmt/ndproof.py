"""Natural deduction modulo theory: proof terms, checking and proof reduction.

Every node of a proof synthesizes a proposition bottom-up.  Elimination
nodes put the proposition of their major premise in weak head normal form
to expose the connective they need, and every comparison between a
synthesized and an expected proposition is made modulo the theory.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Iterator, Sequence, Union

from .rewrite import DEFAULT_FUEL, FuelExhausted, Fuel, Theory, congruent, whnf
from .syntax import (
    BOTTOM,
    TOP,
    And,
    App,
    Atom,
    Bottom,
    Exists,
    Forall,
    Implies,
    Or,
    Path,
    Polarity,
    Prop,
    Term,
    Top,
    Var,
    all_names,
    canonical,
    free_vars,
    fresh,
    numeral,
    show,
    substitute,
    term_vars,
)

# ---------------------------------------------------------------------------
# Proof terms


@dataclass(frozen=True)
class Axiom:
    hyp: str


@dataclass(frozen=True)
class TopIntro:
    pass


@dataclass(frozen=True)
class BotElim:
    target: Prop
    sub: "Proof"


@dataclass(frozen=True)
class AndIntro:
    sub1: "Proof"
    sub2: "Proof"


@dataclass(frozen=True)
class AndElimL:
    stated: Prop
    sub: "Proof"


@dataclass(frozen=True)
class AndElimR:
    stated: Prop
    sub: "Proof"


@dataclass(frozen=True)
class OrIntroL:
    stated: Prop
    sub: "Proof"


@dataclass(frozen=True)
class OrIntroR:
    stated: Prop
    sub: "Proof"


@dataclass(frozen=True)
class OrElim:
    sub0: "Proof"
    hyp_l: str
    sub_l: "Proof"
    hyp_r: str
    sub_r: "Proof"


@dataclass(frozen=True)
class ImpIntro:
    hyp: str
    ante: Prop
    sub: "Proof"


@dataclass(frozen=True)
class ImpElim:
    sub1: "Proof"
    sub2: "Proof"


@dataclass(frozen=True)
class AllIntro:
    var: str
    body: Prop
    sub: "Proof"


@dataclass(frozen=True)
class AllElim:
    var: str
    body: Prop
    term: Term
    sub: "Proof"


@dataclass(frozen=True)
class ExIntro:
    var: str
    body: Prop
    term: Term
    sub: "Proof"


@dataclass(frozen=True)
class ExElim:
    sub0: "Proof"
    hyp: str
    var: str
    body: Prop
    sub: "Proof"


Proof = Union[
    Axiom, TopIntro, BotElim, AndIntro, AndElimL, AndElimR, OrIntroL, OrIntroR,
    OrElim, ImpIntro, ImpElim, AllIntro, AllElim, ExIntro, ExElim,
]

RULE_NAMES = {
    Axiom: "axiom",
    TopIntro: "⊤-intro",
    BotElim: "⊥-elim",
    AndIntro: "∧-intro",
    AndElimL: "∧-elim",
    AndElimR: "∧-elim",
    OrIntroL: "∨-intro",
    OrIntroR: "∨-intro",
    OrElim: "∨-elim",
    ImpIntro: "⇒-intro",
    ImpElim: "⇒-elim",
    AllIntro: "∀-intro",
    AllElim: "∀-elim",
    ExIntro: "∃-intro",
    ExElim: "∃-elim",
}

INTRODUCTIONS = (TopIntro, AndIntro, OrIntroL, OrIntroR, ImpIntro, AllIntro, ExIntro)
ELIMINATIONS = (BotElim, AndElimL, AndElimR, OrElim, ImpElim, AllElim, ExElim)

_SUBPROOF_FIELDS = {
    cls: tuple(f.name for f in fields(cls) if f.name.startswith("sub"))
    for cls in RULE_NAMES
}

# the major premise of each elimination
_MAJOR = {BotElim: "sub", AndElimL: "sub", AndElimR: "sub", OrElim: "sub0",
          ImpElim: "sub1", AllElim: "sub", ExElim: "sub0"}


def last_rule(proof: Proof) -> str:
    return RULE_NAMES[type(proof)]


def children(proof: Proof) -> tuple[Proof, ...]:
    return tuple(getattr(proof, name) for name in _SUBPROOF_FIELDS[type(proof)])


def with_children(proof: Proof, subs: Sequence[Proof]) -> Proof:
    names = _SUBPROOF_FIELDS[type(proof)]
    return replace(proof, **dict(zip(names, subs)))


def subproof_at(proof: Proof, path: Path) -> Proof:
    for i in path:
        proof = children(proof)[i]
    return proof


def replace_subproof(proof: Proof, path: Path, new: Proof) -> Proof:
    if not path:
        return new
    subs = list(children(proof))
    subs[path[0]] = replace_subproof(subs[path[0]], path[1:], new)
    return with_children(proof, subs)


def proof_size(proof: Proof) -> int:
    return 1 + sum(proof_size(c) for c in children(proof))


# ---------------------------------------------------------------------------
# Free names


def free_hyps(proof: Proof) -> set[str]:
    match proof:
        case Axiom(hyp):
            return {hyp}
        case OrElim(s0, hl, sl, hr, sr):
            return free_hyps(s0) | (free_hyps(sl) - {hl}) | (free_hyps(sr) - {hr})
        case ImpIntro(h, _, sub):
            return free_hyps(sub) - {h}
        case ExElim(s0, h, _, _, sub):
            return free_hyps(s0) | (free_hyps(sub) - {h})
    out: set[str] = set()
    for c in children(proof):
        out |= free_hyps(c)
    return out


def proof_free_vars(proof: Proof) -> set[str]:
    """Free term variables of a proof, annotations included."""
    match proof:
        case BotElim(target, sub):
            return free_vars(target) | proof_free_vars(sub)
        case AndElimL(stated, sub) | AndElimR(stated, sub) | OrIntroL(stated, sub) | OrIntroR(stated, sub):
            return free_vars(stated) | proof_free_vars(sub)
        case ImpIntro(_, ante, sub):
            return free_vars(ante) | proof_free_vars(sub)
        case AllIntro(x, body, sub):
            return (free_vars(body) | proof_free_vars(sub)) - {x}
        case AllElim(x, body, t, sub) | ExIntro(x, body, t, sub):
            return (free_vars(body) - {x}) | term_vars(t) | proof_free_vars(sub)
        case ExElim(s0, _, x, body, sub):
            return proof_free_vars(s0) | ((free_vars(body) | proof_free_vars(sub)) - {x})
    out: set[str] = set()
    for c in children(proof):
        out |= proof_free_vars(c)
    return out


def proof_names(proof: Proof) -> set[str]:
    """Every hypothesis and variable name appearing anywhere in the proof."""
    out: set[str] = set()
    for name in ("hyp", "hyp_l", "hyp_r", "var"):
        if hasattr(proof, name):
            out.add(getattr(proof, name))
    for name in ("target", "stated", "ante", "body"):
        if hasattr(proof, name):
            out |= all_names(getattr(proof, name))
    if hasattr(proof, "term"):
        out |= term_vars(proof.term)
    for c in children(proof):
        out |= proof_names(c)
    return out


# ---------------------------------------------------------------------------
# Substitution in proofs


def subst_term(proof: Proof, x: str, t: Term) -> Proof:
    """Replace the free term variable ``x`` by ``t`` throughout a proof,
    renaming eigenvariables that would capture variables of ``t``."""
    return _subst_term(proof, x, t, term_vars(t))


def _rename_eigen(var: str, body: Prop, sub: Proof, avoid: set[str]) -> tuple[str, Prop, Proof]:
    new = fresh(var, avoid | all_names(body) | proof_names(sub))
    v = Var(new)
    return new, substitute({var: v}, body), subst_term(sub, var, v)


def _subst_term(p: Proof, x: str, t: Term, tv: set[str]) -> Proof:
    s = {x: t}
    match p:
        case Axiom() | TopIntro():
            return p
        case BotElim(target, sub):
            return BotElim(substitute(s, target), _subst_term(sub, x, t, tv))
        case AndElimL(stated, sub) | AndElimR(stated, sub) | OrIntroL(stated, sub) | OrIntroR(stated, sub):
            return type(p)(substitute(s, stated), _subst_term(sub, x, t, tv))
        case ImpIntro(h, ante, sub):
            return ImpIntro(h, substitute(s, ante), _subst_term(sub, x, t, tv))
        case AllIntro(y, body, sub):
            if y == x:
                return p
            if y in tv:
                y, body, sub = _rename_eigen(y, body, sub, tv | {x})
            return AllIntro(y, substitute(s, body), _subst_term(sub, x, t, tv))
        case AllElim(y, body, u, sub) | ExIntro(y, body, u, sub):
            q = substitute(s, Forall(y, body))
            return type(p)(q.var, q.body, substitute(s, u), _subst_term(sub, x, t, tv))
        case ExElim(s0, h, y, body, sub):
            s0 = _subst_term(s0, x, t, tv)
            if y == x:
                return ExElim(s0, h, y, body, sub)
            if y in tv:
                y, body, sub = _rename_eigen(y, body, sub, tv | {x})
            return ExElim(s0, h, y, substitute(s, body), _subst_term(sub, x, t, tv))
    return with_children(p, [_subst_term(c, x, t, tv) for c in children(p)])


def subst_hyp(proof: Proof, h: str, q: Proof) -> Proof:
    """Replace free uses of hypothesis ``h`` by the proof ``q``."""
    return _subst_hyp(proof, h, q, free_hyps(q), proof_free_vars(q))


def _rename_hyp(h: str, sub: Proof, avoid: set[str]) -> tuple[str, Proof]:
    new = fresh(h, avoid | proof_names(sub))
    return new, subst_hyp(sub, h, Axiom(new))


def _subst_hyp(p: Proof, h: str, q: Proof, qh: set[str], qv: set[str]) -> Proof:
    match p:
        case Axiom(name):
            return q if name == h else p
        case ImpIntro(h2, ante, sub):
            if h2 == h:
                return p
            if h2 in qh:
                h2, sub = _rename_hyp(h2, sub, qh | {h})
            return ImpIntro(h2, ante, _subst_hyp(sub, h, q, qh, qv))
        case OrElim(s0, hl, sl, hr, sr):
            s0 = _subst_hyp(s0, h, q, qh, qv)
            if hl != h:
                if hl in qh:
                    hl, sl = _rename_hyp(hl, sl, qh | {h})
                sl = _subst_hyp(sl, h, q, qh, qv)
            if hr != h:
                if hr in qh:
                    hr, sr = _rename_hyp(hr, sr, qh | {h})
                sr = _subst_hyp(sr, h, q, qh, qv)
            return OrElim(s0, hl, sl, hr, sr)
        case AllIntro(y, body, sub):
            if y in qv:
                y, body, sub = _rename_eigen(y, body, sub, qv)
            return AllIntro(y, body, _subst_hyp(sub, h, q, qh, qv))
        case ExElim(s0, h2, y, body, sub):
            s0 = _subst_hyp(s0, h, q, qh, qv)
            if h2 == h:
                return ExElim(s0, h2, y, body, sub)
            if y in qv:
                y, body, sub = _rename_eigen(y, body, sub, qv)
            if h2 in qh:
                h2, sub = _rename_hyp(h2, sub, qh | {h})
            return ExElim(s0, h2, y, body, _subst_hyp(sub, h, q, qh, qv))
    return with_children(p, [_subst_hyp(c, h, q, qh, qv) for c in children(p)])


# ---------------------------------------------------------------------------
# Alpha-equivalence of proofs


def canonical_proof(proof: Proof) -> Proof:
    """Rename bound hypotheses and eigenvariables by binding depth."""
    return _canon(proof, 0)


def _canon(p: Proof, depth: int) -> Proof:
    def hyp_binder(h: str, sub: Proof) -> tuple[str, Proof]:
        name = f"%h{depth}"
        return name, _canon(subst_hyp(sub, h, Axiom(name)), depth + 1)

    def eigen(x: str, body: Prop, sub: Proof) -> tuple[str, Prop, Proof]:
        name = f"%v{depth}"
        v = Var(name)
        return name, canonical(substitute({x: v}, body)), subst_term(sub, x, v)

    match p:
        case Axiom() | TopIntro():
            return p
        case BotElim(target, sub):
            return BotElim(canonical(target), _canon(sub, depth))
        case AndElimL(stated, sub) | AndElimR(stated, sub) | OrIntroL(stated, sub) | OrIntroR(stated, sub):
            return type(p)(canonical(stated), _canon(sub, depth))
        case ImpIntro(h, ante, sub):
            h, sub = hyp_binder(h, sub)
            return ImpIntro(h, canonical(ante), sub)
        case OrElim(s0, hl, sl, hr, sr):
            hl, sl = hyp_binder(hl, sl)
            hr, sr = hyp_binder(hr, sr)
            return OrElim(_canon(s0, depth), hl, sl, hr, sr)
        case AllIntro(x, body, sub):
            x, body, sub = eigen(x, body, sub)
            return AllIntro(x, body, _canon(sub, depth + 1))
        case AllElim(x, body, t, sub) | ExIntro(x, body, t, sub):
            q = canonical(Forall(x, body))
            return type(p)(q.var, q.body, t, _canon(sub, depth))
        case ExElim(s0, h, x, body, sub):
            x, body, sub = eigen(x, body, sub)
            h, sub = hyp_binder(h, sub)
            return ExElim(_canon(s0, depth), h, x, body, sub)
    return with_children(p, [_canon(c, depth) for c in children(p)])


def proof_alpha_eq(a: Proof, b: Proof) -> bool:
    return canonical_proof(a) == canonical_proof(b)


# ---------------------------------------------------------------------------
# Checking

Context = Sequence[tuple[str, Prop]]


class ProofError(Exception):
    def __init__(self, path: Path, reason: str):
        super().__init__(f"at {format_path(path)}: {reason}")
        self.path = path
        self.reason = reason


def format_path(path: Path) -> str:
    return "root" if not path else "root." + ".".join(map(str, path))


@dataclass(frozen=True)
class CheckReport:
    accepted: bool
    synthesized: Prop | None
    fuel_used: int
    reason: str | None = None
    path: Path | None = None

    def __str__(self) -> str:
        if self.accepted:
            return "accepted"
        return f"rejected at {format_path(self.path or ())}: {self.reason}"


class _Checker:
    def __init__(self, theory: Theory, fuel: int):
        self.theory = theory
        self.fuel = fuel
        self.used = 0

    def _budget(self) -> Fuel:
        return Fuel(self.fuel, "congruence check")

    def conv(self, a: Prop, b: Prop) -> bool:
        budget = self._budget()
        try:
            return congruent(a, b, self.theory, budget)
        finally:
            self.used += budget.used

    def head(self, a: Prop) -> Prop:
        budget = self._budget()
        try:
            return whnf(a, self.theory, Polarity.POSITIVE, budget)
        finally:
            self.used += budget.used

    def require(self, a: Prop, b: Prop, path: Path, what: str) -> None:
        if not self.conv(a, b):
            raise ProofError(path, f"{what}: {show(a, self.theory.signature)} is not congruent to {show(b, self.theory.signature)}")

    def synth(self, ctx: dict[str, Prop], p: Proof, path: Path) -> Prop:
        sig = self.theory.signature
        match p:
            case Axiom(h):
                if h not in ctx:
                    raise ProofError(path, f"unknown hypothesis {h!r}")
                return ctx[h]
            case TopIntro():
                return TOP
            case BotElim(target, sub):
                b = self.synth(ctx, sub, path + (0,))
                self.require(b, BOTTOM, path, "⊥-elim premise")
                return target
            case AndIntro(s1, s2):
                return And(self.synth(ctx, s1, path + (0,)), self.synth(ctx, s2, path + (1,)))
            case AndElimL(stated, sub) | AndElimR(stated, sub):
                if not isinstance(stated, And):
                    raise ProofError(path, f"∧-elim annotation {show(stated, sig)} is not a conjunction")
                c = self.synth(ctx, sub, path + (0,))
                self.require(c, stated, path, "∧-elim premise")
                return stated.left if isinstance(p, AndElimL) else stated.right
            case OrIntroL(stated, sub) | OrIntroR(stated, sub):
                if not isinstance(stated, Or):
                    raise ProofError(path, f"∨-intro annotation {show(stated, sig)} is not a disjunction")
                a = self.synth(ctx, sub, path + (0,))
                part = stated.left if isinstance(p, OrIntroL) else stated.right
                self.require(a, part, path, "∨-intro premise")
                return stated
            case OrElim(s0, hl, sl, hr, sr):
                d = self.head(self.synth(ctx, s0, path + (0,)))
                if not isinstance(d, Or):
                    raise ProofError(path, f"∨-elim major premise proves {show(d, sig)}, not a disjunction")
                cl = self.synth({**ctx, hl: d.left}, sl, path + (1,))
                cr = self.synth({**ctx, hr: d.right}, sr, path + (2,))
                self.require(cr, cl, path, "∨-elim branches")
                return cl
            case ImpIntro(h, ante, sub):
                return Implies(ante, self.synth({**ctx, h: ante}, sub, path + (0,)))
            case ImpElim(s1, s2):
                c = self.head(self.synth(ctx, s1, path + (0,)))
                if not isinstance(c, Implies):
                    raise ProofError(path, f"⇒-elim major premise proves {show(c, sig)}, not an implication")
                a = self.synth(ctx, s2, path + (1,))
                self.require(a, c.left, path, "⇒-elim minor premise")
                return c.right
            case AllIntro(x, body, sub):
                a = self.synth(ctx, sub, path + (0,))
                self.require(a, body, path, "∀-intro premise")
                if x in free_vars(ctx.items()):
                    raise ProofError(path, f"∀-intro: {x} is free in the context")
                return Forall(x, body)
            case AllElim(x, body, t, sub):
                b = self.synth(ctx, sub, path + (0,))
                self.require(b, Forall(x, body), path, "∀-elim premise")
                return substitute({x: t}, body)
            case ExIntro(x, body, t, sub):
                c = self.synth(ctx, sub, path + (0,))
                self.require(c, substitute({x: t}, body), path, "∃-intro premise")
                return Exists(x, body)
            case ExElim(s0, h, x, body, sub):
                c = self.synth(ctx, s0, path + (0,))
                self.require(c, Exists(x, body), path, "∃-elim major premise")
                if x in free_vars(ctx.items()):
                    raise ProofError(path, f"∃-elim: {x} is free in the context")
                b = self.synth({**ctx, h: body}, sub, path + (1,))
                if x in free_vars(b):
                    raise ProofError(path, f"∃-elim: {x} is free in the conclusion")
                return b
        raise ProofError(path, f"not a proof term: {p!r}")


def check(theory: Theory, ctx: Context, goal: Prop, proof: Proof, fuel: int = DEFAULT_FUEL) -> CheckReport:
    """Check ``ctx |- goal`` by ``proof`` modulo an unpolarized theory.

    Raises FuelExhausted when a congruence check runs out of fuel.
    """
    if theory.polarized:
        raise ValueError("the natural deduction checker needs an unpolarized theory")
    names = [h for h, _ in ctx]
    if len(set(names)) != len(names):
        raise ValueError("hypothesis names in the context must be unique")
    checker = _Checker(theory, fuel)
    try:
        synthesized = checker.synth(dict(ctx), proof, ())
    except ProofError as err:
        return CheckReport(False, None, checker.used, err.reason, err.path)
    if not checker.conv(synthesized, goal):
        sig = theory.signature
        reason = f"proof of {show(synthesized, sig)} does not prove {show(goal, sig)}"
        return CheckReport(False, synthesized, checker.used, reason, ())
    return CheckReport(True, synthesized, checker.used)


# ---------------------------------------------------------------------------
# Redexes


def _redex_kind(p: Proof) -> str | None:
    if not isinstance(p, ELIMINATIONS):
        return None
    major = getattr(p, _MAJOR[type(p)])
    match p, major:
        case ImpElim(), ImpIntro():
            return "⇒"
        case AndElimL() | AndElimR(), AndIntro():
            return "∧"
        case OrElim(), OrIntroL() | OrIntroR():
            return "∨"
        case AllElim(), AllIntro():
            return "∀"
        case ExElim(), ExIntro():
            return "∃"
    if isinstance(major, (OrElim, ExElim)):
        return "permutation"
    return None


def _walk(p: Proof, path: Path) -> Iterator[tuple[Path, Proof]]:
    yield path, p
    for i, c in enumerate(children(p)):
        yield from _walk(c, path + (i,))


def _post_order(p: Proof, path: Path) -> Iterator[tuple[Path, Proof]]:
    for i, c in enumerate(children(p)):
        yield from _post_order(c, path + (i,))
    yield path, p


def find_redexes(proof: Proof) -> list[Path]:
    """Paths of every detour and permutative redex, in pre-order."""
    return [path for path, p in _walk(proof, ()) if _redex_kind(p) is not None]


def redex_kind(proof: Proof, path: Path) -> str | None:
    return _redex_kind(subproof_at(proof, path))


def reduce_step(proof: Proof, path: Path) -> Proof:
    """Contract the redex at ``path``."""
    try:
        node = subproof_at(proof, path)
    except IndexError:
        raise ValueError(f"invalid path {format_path(path)}") from None
    if _redex_kind(node) is None:
        raise ValueError(f"no redex at {format_path(path)}")
    return replace_subproof(proof, path, _contract(node))


def _contract(p: Proof) -> Proof:
    match p:
        case ImpElim(ImpIntro(h, _, body), arg):
            return subst_hyp(body, h, arg)
        case AndElimL(_, AndIntro(left, _)):
            return left
        case AndElimR(_, AndIntro(_, right)):
            return right
        case OrElim(OrIntroL(_, q), hl, sl, _, _):
            return subst_hyp(sl, hl, q)
        case OrElim(OrIntroR(_, q), _, _, hr, sr):
            return subst_hyp(sr, hr, q)
        case AllElim(_, _, t, AllIntro(y, _, sub)):
            return subst_term(sub, y, t)
        case ExElim(ExIntro(_, _, t, q), h, y, _, sub):
            return subst_hyp(subst_term(sub, y, t), h, q)
    return _permute(p)


def _outer_names(p: Proof, major_field: str) -> tuple[set[str], set[str]]:
    """Free hypotheses and term variables of an elimination, major premise excluded."""
    hole = replace(p, **{major_field: TopIntro()})
    return free_hyps(hole), proof_free_vars(hole) | proof_names(hole)


def _permute(p: Proof) -> Proof:
    major_field = _MAJOR[type(p)]
    major = getattr(p, major_field)
    hyps, names = _outer_names(p, major_field)

    def plug(branch: Proof) -> Proof:
        return replace(p, **{major_field: branch})

    if isinstance(major, OrElim):
        s0, hl, sl, hr, sr = major.sub0, major.hyp_l, major.sub_l, major.hyp_r, major.sub_r
        if hl in hyps:
            hl, sl = _rename_hyp(hl, sl, hyps)
        if hr in hyps:
            hr, sr = _rename_hyp(hr, sr, hyps)
        return OrElim(s0, hl, plug(sl), hr, plug(sr))
    s0, h, x, body, sub = major.sub0, major.hyp, major.var, major.body, major.sub
    if x in names:
        x, body, sub = _rename_eigen(x, body, sub, names)
    if h in hyps:
        h, sub = _rename_hyp(h, sub, hyps)
    return ExElim(s0, h, x, body, plug(sub))


def normalize_proof(theory: Theory, ctx: Context, goal: Prop, proof: Proof,
                    fuel: int = DEFAULT_FUEL, trace: list | None = None) -> Proof:
    """Contract leftmost-innermost redexes until none is left.

    ``fuel`` bounds the number of contractions.  Each contracted path is
    appended to ``trace`` when one is given.
    """
    report = check(theory, ctx, goal, proof, fuel)
    if not report.accepted:
        raise ValueError(f"proof does not check: {report}")
    used = 0
    while True:
        path = next((path for path, p in _post_order(proof, ()) if _redex_kind(p) is not None), None)
        if path is None:
            return proof
        if used >= fuel:
            raise FuelExhausted(used, "proof reduction")
        proof = reduce_step(proof, path)
        used += 1
        if trace is not None:
            trace.append(path)


# ---------------------------------------------------------------------------
# S-expression format


class SexpError(ValueError):
    pass


def _tokens(text: str) -> Iterator[str]:
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "();":
                j += 1
            yield text[i:j]
            i = j


def read_sexp(text: str):
    toks = list(_tokens(text))
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(toks):
            raise SexpError("unexpected end of input")
        tok = toks[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(toks) and toks[pos] != ")":
                items.append(read())
            if pos >= len(toks):
                raise SexpError("missing ')'")
            pos += 1
            return items
        if tok == ")":
            raise SexpError("unexpected ')'")
        return tok

    value = read()
    if pos != len(toks):
        raise SexpError(f"trailing input after proof: {toks[pos]!r}")
    return value


_CONNECTIVES = {"=>": Implies, "&": And, "|": Or}


class _Reader:
    def __init__(self, sig):
        self.sig = sig

    def term(self, s, bound: frozenset) -> Term:
        if isinstance(s, str):
            if s.isdigit():
                return numeral(int(s))
            if s not in bound and self.sig is not None and self.sig.is_constant(s):
                return App(s)
            return Var(s)
        if not s or not isinstance(s[0], str):
            raise SexpError(f"bad term {s!r}")
        return App(s[0], tuple(self.term(a, bound) for a in s[1:]))

    def prop(self, s, bound: frozenset) -> Prop:
        if isinstance(s, str):
            if s == "true":
                return TOP
            if s == "false":
                return BOTTOM
            return Atom(s)
        if not s or not isinstance(s[0], str):
            raise SexpError(f"bad proposition {s!r}")
        head, args = s[0], s[1:]
        if head in _CONNECTIVES:
            if len(args) != 2:
                raise SexpError(f"{head} takes two arguments")
            return _CONNECTIVES[head](self.prop(args[0], bound), self.prop(args[1], bound))
        if head == "<=>":
            a, b = self.prop(args[0], bound), self.prop(args[1], bound)
            return And(Implies(a, b), Implies(b, a))
        if head == "~":
            if len(args) != 1:
                raise SexpError("~ takes one argument")
            return Implies(self.prop(args[0], bound), BOTTOM)
        if head in ("forall", "exists"):
            if len(args) != 2 or not isinstance(args[0], str):
                raise SexpError(f"{head} takes a variable and a body")
            q = Forall if head == "forall" else Exists
            return q(args[0], self.prop(args[1], bound | {args[0]}))
        return Atom(head, tuple(self.term(a, bound) for a in args))

    def proof(self, s) -> Proof:
        if isinstance(s, str):
            if s == "top_intro":
                return TopIntro()
            raise SexpError(f"bad proof {s!r}")
        if not s or not isinstance(s[0], str):
            raise SexpError(f"bad proof {s!r}")
        head, a = s[0], s[1:]
        none = frozenset()
        want = {
            "axiom": 1, "top_intro": 0, "bot_elim": 2, "and_intro": 2, "and_elim_l": 2,
            "and_elim_r": 2, "or_intro_l": 2, "or_intro_r": 2, "or_elim": 5, "imp_intro": 3,
            "imp_elim": 2, "all_intro": 3, "all_elim": 4, "ex_intro": 4, "ex_elim": 5,
        }
        if head not in want:
            raise SexpError(f"unknown proof rule {head!r}")
        if len(a) != want[head]:
            raise SexpError(f"{head} takes {want[head]} argument(s), got {len(a)}")
        name = self.name
        match head:
            case "axiom":
                return Axiom(name(a[0]))
            case "top_intro":
                return TopIntro()
            case "bot_elim":
                return BotElim(self.prop(a[0], none), self.proof(a[1]))
            case "and_intro":
                return AndIntro(self.proof(a[0]), self.proof(a[1]))
            case "and_elim_l":
                return AndElimL(self.prop(a[0], none), self.proof(a[1]))
            case "and_elim_r":
                return AndElimR(self.prop(a[0], none), self.proof(a[1]))
            case "or_intro_l":
                return OrIntroL(self.prop(a[0], none), self.proof(a[1]))
            case "or_intro_r":
                return OrIntroR(self.prop(a[0], none), self.proof(a[1]))
            case "or_elim":
                return OrElim(self.proof(a[0]), name(a[1]), self.proof(a[2]), name(a[3]), self.proof(a[4]))
            case "imp_intro":
                return ImpIntro(name(a[0]), self.prop(a[1], none), self.proof(a[2]))
            case "imp_elim":
                return ImpElim(self.proof(a[0]), self.proof(a[1]))
            case "all_intro":
                x = name(a[0])
                return AllIntro(x, self.prop(a[1], frozenset({x})), self.proof(a[2]))
            case "all_elim":
                x = name(a[0])
                return AllElim(x, self.prop(a[1], frozenset({x})), self.term(a[2], none), self.proof(a[3]))
            case "ex_intro":
                x = name(a[0])
                return ExIntro(x, self.prop(a[1], frozenset({x})), self.term(a[2], none), self.proof(a[3]))
            case _:
                x = name(a[2])
                return ExElim(self.proof(a[0]), name(a[1]), x, self.prop(a[3], frozenset({x})), self.proof(a[4]))

    @staticmethod
    def name(s) -> str:
        if not isinstance(s, str):
            raise SexpError(f"expected a name, got {s!r}")
        return s


def parse_proof(text: str, sig=None) -> Proof:
    return _Reader(sig).proof(read_sexp(text))


def parse_sexp_prop(text: str, sig=None) -> Prop:
    return _Reader(sig).prop(read_sexp(text), frozenset())


def _sx_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.fn
    return f"({t.fn} {' '.join(_sx_term(a) for a in t.args)})"


def sexp_prop(p: Prop) -> str:
    match p:
        case Top():
            return "true"
        case Bottom():
            return "false"
        case Atom(pred, ()):
            return pred
        case Atom(pred, args):
            return f"({pred} {' '.join(_sx_term(a) for a in args)})"
        case Implies(a, Bottom()):
            return f"(~ {sexp_prop(a)})"
        case And(a, b) | Or(a, b) | Implies(a, b):
            op = {And: "&", Or: "|", Implies: "=>"}[type(p)]
            return f"({op} {sexp_prop(a)} {sexp_prop(b)})"
        case Forall(x, b):
            return f"(forall {x} {sexp_prop(b)})"
        case Exists(x, b):
            return f"(exists {x} {sexp_prop(b)})"
    raise TypeError(p)


_SEXP_HEADS = {
    Axiom: "axiom", TopIntro: "top_intro", BotElim: "bot_elim", AndIntro: "and_intro",
    AndElimL: "and_elim_l", AndElimR: "and_elim_r", OrIntroL: "or_intro_l",
    OrIntroR: "or_intro_r", OrElim: "or_elim", ImpIntro: "imp_intro", ImpElim: "imp_elim",
    AllIntro: "all_intro", AllElim: "all_elim", ExIntro: "ex_intro", ExElim: "ex_elim",
}


def format_proof(p: Proof) -> str:
    if isinstance(p, TopIntro):
        return "(top_intro)"
    parts = [_SEXP_HEADS[type(p)]]
    for f in fields(p):
        v = getattr(p, f.name)
        if isinstance(v, str):
            parts.append(v)
        elif f.name.startswith("sub"):
            parts.append(format_proof(v))
        elif f.name == "term":
            parts.append(_sx_term(v))
        else:
            parts.append(sexp_prop(v))
    return f"({' '.join(parts)})"
