"""Session type subtyping by model checking, inference rules and term automata."""

from .budget import Budget, BudgetExceeded
from .charform import Mode, char_formula, subtype_cf_sub, subtype_cf_sup
from .generator import GenParams, gen_norec, gen_random, gen_super, gen_unfolded_pair
from .gh import subtype_gh
from .kps import constructor_leq, language_empty, product, subtype_kps, to_term_automaton
from .lts import Lts, build_lts
from .mucalc import approximate, dual_formula, eval_states, models, print_formula
from .safety import System, is_error, safe_by_formula, safe_by_subtyping, safe_explore, sync_step
from .syntax import ParseError, parse_type, print_type
from .types import (
    Action,
    Alphabet,
    Choice,
    End,
    InvalidType,
    Kind,
    Rec,
    SessionType,
    Var,
    dual_type,
    nummsg,
    substitute,
    unfold_measure,
    unfold_top,
    validate_type,
    varocc,
)

__all__ = [
    "Action", "Alphabet", "Budget", "BudgetExceeded", "Choice", "End", "GenParams",
    "InvalidType", "Kind", "Lts", "Mode", "ParseError", "Rec", "SessionType", "System", "Var",
    "approximate", "build_lts", "char_formula", "constructor_leq", "dual_formula", "dual_type",
    "eval_states", "gen_norec", "gen_random", "gen_super", "gen_unfolded_pair", "is_error",
    "language_empty", "models", "nummsg", "parse_type", "print_formula", "print_type", "product",
    "safe_by_formula", "safe_by_subtyping", "safe_explore", "substitute", "subtype_cf_sub",
    "subtype_cf_sup", "subtype_gh", "subtype_kps", "sync_step", "to_term_automaton",
    "unfold_measure", "unfold_top", "validate_type", "varocc",
]
