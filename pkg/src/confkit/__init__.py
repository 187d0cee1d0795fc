"""Conformance checking for labelled transition systems.

Parse models from Aldebaran ``.aut`` files, check implementations against
specifications (ioco or language conformance relative to desirable /
undesirable regular languages), and extract executable test suites from
the fault automata the checks construct.
"""

from .models import (
    DELTA,
    DEFAULT_INTERNAL,
    Diagnostic,
    Label,
    LabelingConfig,
    ModelError,
    ParseError,
    TransitionSystem,
    add_quiescence,
    model_to_dot,
    parse_aldebaran,
    quiescent_states,
    serialize_aldebaran,
)
from .automata import (
    EPSILON,
    AutomatonError,
    Fsa,
    StateTag,
    accepts,
    canonical_alphabet,
    complement,
    complete,
    determinize,
    enumerate_accepted,
    fsa_to_dot,
    induced_fsa,
    intersection,
    is_deterministic,
    is_empty_language,
    minimize,
    union,
)
from .regex import (
    Alt,
    Concat,
    EmptyLanguage,
    Epsilon,
    RegexError,
    RegexSyntaxError,
    Star,
    Symbol,
    derivative,
    full_language,
    match_regex,
    nullable,
    parse_regex,
    regex_to_fsa,
)
from .conformance import (
    ConformanceError,
    FaultModel,
    TestCase,
    Verdict,
    extract_test_suite,
    fault_model_ioco,
    fault_model_language,
    model_d,
    oracle_ioco,
    oracle_language,
    verify_ioco,
    verify_language,
)

__version__ = "0.1.0"

__all__ = [
    "DELTA",
    "DEFAULT_INTERNAL",
    "EPSILON",
    "Alt",
    "AutomatonError",
    "Concat",
    "ConformanceError",
    "Diagnostic",
    "EmptyLanguage",
    "Epsilon",
    "FaultModel",
    "Fsa",
    "Label",
    "LabelingConfig",
    "ModelError",
    "ParseError",
    "RegexError",
    "RegexSyntaxError",
    "Star",
    "StateTag",
    "Symbol",
    "TestCase",
    "TransitionSystem",
    "Verdict",
    "accepts",
    "add_quiescence",
    "canonical_alphabet",
    "complement",
    "complete",
    "derivative",
    "determinize",
    "enumerate_accepted",
    "extract_test_suite",
    "fault_model_ioco",
    "fault_model_language",
    "fsa_to_dot",
    "full_language",
    "induced_fsa",
    "intersection",
    "is_deterministic",
    "is_empty_language",
    "match_regex",
    "minimize",
    "model_d",
    "model_to_dot",
    "nullable",
    "oracle_ioco",
    "oracle_language",
    "parse_aldebaran",
    "parse_regex",
    "quiescent_states",
    "regex_to_fsa",
    "serialize_aldebaran",
    "union",
    "verify_ioco",
    "verify_language",
]
