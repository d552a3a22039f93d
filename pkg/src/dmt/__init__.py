"""A small kernel for deduction modulo theory.

Terms and propositions are identified modulo rewrite rules.  The package
normalizes under those rules, checks natural deduction proofs, reduces
proofs, and searches for refutations by polarized resolution.
"""

from .ndproof import CheckReport, check, find_redexes, last_rule, normalize_proof, parse_proof, reduce_step
from .parser import ParseError, parse_prop, parse_term
from .resolution import Clause, Literal, OneWayClause, clausify, compile_one_way, refute, resolve, rewrite_clause
from .rewrite import (
    FuelExhausted,
    RewriteRule,
    RulePolarity,
    Theory,
    congruent,
    joinable,
    normalize,
    reduce_once,
    validate_theory,
    whnf,
)
from .syntax import Polarity, alpha_eq, free_vars, show, substitute
from .theories import builtin, orient

__all__ = [
    "CheckReport", "Clause", "FuelExhausted", "Literal", "OneWayClause", "ParseError",
    "Polarity", "RewriteRule", "RulePolarity", "Theory", "alpha_eq", "builtin", "check",
    "clausify", "compile_one_way", "congruent", "find_redexes", "free_vars", "joinable",
    "last_rule", "normalize", "normalize_proof", "orient", "parse_proof", "parse_prop",
    "parse_term", "reduce_once", "reduce_step", "refute", "resolve", "rewrite_clause",
    "show", "substitute", "validate_theory", "whnf",
]
