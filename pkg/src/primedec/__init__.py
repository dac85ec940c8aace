"""Decision procedure for the integers with addition and a primality predicate,
conditional on Dickson's conjecture, plus search tools for prime patterns."""

from .config import RunConfig
from .dickson import AffineMap, DicksonSystem, StarVerdict, shift_nonnegative, star_check
from .errors import (
    AdmissibilityError,
    NotASentenceError,
    ParseError,
    PrimedecError,
    ResourceLimitError,
    StarConditionError,
)
from .evaluate import eval_ground, witness_search
from .qe import Verdict, decide_sentence, qe_formula, simplify
from .syntax import parse_formula, parse_term, print_formula, print_term

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "AffineMap",
    "DicksonSystem",
    "NotASentenceError",
    "ParseError",
    "PrimedecError",
    "ResourceLimitError",
    "RunConfig",
    "StarConditionError",
    "StarVerdict",
    "Verdict",
    "decide_sentence",
    "eval_ground",
    "parse_formula",
    "parse_term",
    "print_formula",
    "print_term",
    "qe_formula",
    "shift_nonnegative",
    "simplify",
    "star_check",
    "witness_search",
]
