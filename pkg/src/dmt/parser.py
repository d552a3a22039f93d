"""Concrete syntax for terms and propositions.

Grammar, loosest first::

    prop    ::= imp [ "<=>" imp ]
    imp     ::= or [ "=>" imp ]
    or      ::= and { "|" and }
    and     ::= unary { "&" unary }
    unary   ::= "~" unary | ("forall" | "exists") ident {ident} "." prop | primary
    primary ::= "true" | "false" | term INFIXPRED term | "(" prop ")"
              | ident [ "(" term {"," term} ")" ]
    term    ::= precedence climbing over the infix function symbols

Decimal literals are S-towers over 0.  Identifiers declared as 0-ary
functions are constants; other bare identifiers in term position are
variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    BOTTOM,
    TOP,
    And,
    App,
    Assoc,
    Atom,
    Exists,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Prop,
    Signature,
    Term,
    Var,
    infix_predicates,
    infix_table,
    numeral,
)

KEYWORDS = {"forall", "exists", "true", "false"}
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[(),.&|~])
  | (?P<op>[+\-*/<>=^@!?#$%:]+)
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            if kind == "op" and chunk in ("=>", "<=>"):
                kind = "punct"
            elif kind == "ident" and chunk in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        for i, ch in enumerate(chunk):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, text: str, sig: Signature | None = None):
        self.tokens = tokenize(text)
        self.i = 0
        self.sig = sig
        self.fixity = infix_table(sig)
        self.infix_preds = infix_predicates(sig)
        self.bound: list[str] = []
        self.furthest: ParseError | None = None

    # -- helpers ---------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        err = ParseError(message, tok.line, tok.column)
        if self.furthest is None or (tok.line, tok.column) > (self.furthest.line, self.furthest.column):
            self.furthest = err
        return err

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("punct", "kw", "op"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def ident(self) -> str:
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            raise self.error(f"expected identifier, found {found!r}")
        name = self.tok.text
        self.i += 1
        return name

    def finish(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    # -- propositions ----------------------------------------------------

    def prop(self) -> Prop:
        left = self.imp()
        if self.accept("<=>"):
            return Iff(left, self.imp())
        return left

    def imp(self) -> Prop:
        left = self.disj()
        if self.accept("=>"):
            return Implies(left, self.imp())
        return left

    def disj(self) -> Prop:
        left = self.conj()
        while self.accept("|"):
            left = Or(left, self.conj())
        return left

    def conj(self) -> Prop:
        left = self.unary()
        while self.accept("&"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Prop:
        if self.accept("~"):
            return Not(self.unary())
        if self.tok.kind == "kw" and self.tok.text in ("forall", "exists"):
            q = Forall if self.tok.text == "forall" else Exists
            self.i += 1
            names = [self.ident()]
            while self.tok.kind == "ident":
                names.append(self.ident())
            self.expect(".")
            self.bound.extend(names)
            try:
                body = self.prop()
            finally:
                del self.bound[-len(names):]
            for name in reversed(names):
                body = q(name, body)
            return body
        return self.primary()

    def primary(self) -> Prop:
        if self.accept("true"):
            return TOP
        if self.accept("false"):
            return BOTTOM
        start = self.i
        try:
            left = self.term()
            if self.tok.kind == "op" and self.tok.text in self.infix_preds:
                op = self.tok.text
                self.i += 1
                right = self.term()
                if self.tok.kind == "op" and self.tok.text in self.infix_preds:
                    if self.fixity[op].assoc is Assoc.NONE:
                        raise self.error(f"operator {op!r} is non-associative")
                return Atom(op, (left, right))
            raise _Backtrack
        except (ParseError, _Backtrack):
            self.i = start
        if self.accept("("):
            p = self.prop()
            self.expect(")")
            return p
        if self.tok.kind == "ident":
            name = self.ident()
            args: tuple[Term, ...] = ()
            if self.accept("("):
                args = self.term_list()
            return Atom(name, args)
        found = self.tok.text or "end of input"
        raise self.error(f"expected a proposition, found {found!r}")

    # -- terms -----------------------------------------------------------

    def term_list(self) -> tuple[Term, ...]:
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def is_infix_fn(self, tok: Token) -> bool:
        return tok.kind == "op" and tok.text in self.fixity and tok.text not in self.infix_preds

    def term(self, min_prec: int = 0) -> Term:
        left = self.term_primary()
        while self.is_infix_fn(self.tok):
            op = self.tok.text
            fx = self.fixity[op]
            if fx.precedence < min_prec:
                break
            self.i += 1
            next_min = fx.precedence if fx.assoc is Assoc.RIGHT else fx.precedence + 1
            right = self.term(next_min)
            left = App(op, (left, right))
            if fx.assoc is Assoc.NONE and self.is_infix_fn(self.tok) and self.tok.text == op:
                raise self.error(f"operator {op!r} is non-associative")
        return left

    def term_primary(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return numeral(int(tok.text))
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        if tok.kind == "ident":
            name = self.ident()
            if self.accept("("):
                return App(name, self.term_list())
            if name not in self.bound and self.sig is not None and self.sig.is_constant(name):
                return App(name)
            return Var(name)
        found = tok.text or "end of input"
        raise self.error(f"expected a term, found {found!r}")


def _fail(p: Parser, err: ParseError) -> ParseError:
    f = p.furthest
    if f is not None and (f.line, f.column) > (err.line, err.column):
        return f
    return err


def check_arities(x, sig: Signature | None, seen: dict[str, int] | None = None) -> None:
    """Raise ParseError on arity mismatches against ``sig`` or within ``x``."""
    seen = {} if seen is None else seen
    stack = [x]
    while stack:
        y = stack.pop()
        if isinstance(y, Var):
            continue
        if isinstance(y, App):
            name, arity = y.fn, len(y.args)
            declared = sig.functions.get(name) if sig else None
            if sig and name in sig.predicates:
                raise ParseError(f"predicate {name!r} used as a function symbol")
            stack.extend(y.args)
        elif isinstance(y, Atom):
            name, arity = y.pred, len(y.args)
            declared = sig.predicates.get(name) if sig else None
            if sig and name in sig.functions:
                raise ParseError(f"function symbol {name!r} used as a predicate")
            stack.extend(y.args)
            name = "pred:" + name
        elif hasattr(y, "left"):
            stack.extend((y.left, y.right))
            continue
        elif hasattr(y, "body"):
            stack.append(y.body)
            continue
        else:
            continue
        if declared is not None and declared != arity:
            raise ParseError(f"{name.removeprefix('pred:')!r} expects {declared} argument(s), got {arity}")
        if seen.setdefault(name, arity) != arity:
            raise ParseError(f"{name.removeprefix('pred:')!r} used with {seen[name]} and {arity} arguments")


def parse_term(text: str, sig: Signature | None = None) -> Term:
    p = Parser(text, sig)
    try:
        t = p.term()
        p.finish()
    except ParseError as err:
        raise _fail(p, err) from None
    check_arities(t, sig)
    return t


def parse_prop(text: str, sig: Signature | None = None) -> Prop:
    p = Parser(text, sig)
    try:
        a = p.prop()
        p.finish()
    except ParseError as err:
        raise _fail(p, err) from None
    check_arities(a, sig)
    return a


def is_identifier(name: str) -> bool:
    return bool(IDENT_RE.match(name)) and name not in KEYWORDS
