"""Regex repair by neighborhood search over abstracted regexes."""

from .abstraction import AbstractRegex, RewriteDictionary, preprocess, unpreprocess
from .engine import (
    EngineBudget,
    compile_dfa,
    derivative,
    distinguishing_string,
    equivalent,
    is_empty,
    matches,
    sample_negative,
    sample_positive,
)
from .errors import (
    AlphabetViolation,
    BudgetExceeded,
    EmptyLanguage,
    ExternalToolError,
    InsufficientLanguage,
    InvalidExamples,
    InvalidSyntax,
    QuantifierTooLarge,
    UnknownToken,
)
from .evaluation import ExampleSet, Fitness, consistent, fitness
from .external import ExternalTool, invoke_external
from .neighborhood import TransformationKind, element_sites, infer_quantifier_bounds, neighbors
from .syncorr import RepairConfig, RepairReport, judge, syncorr, transregex
from .syntax import PRINTABLE, Alphabet, parse, to_string, validate

__version__ = "0.1.0"
