"""Exact judgment aggregation with agenda decomposition and separability checks."""

from .core import Agenda, JudgmentSet, Profile, make_preference_agenda
from .decomposition import (
    Decomposition,
    Kind,
    aggregate_via_decomposition,
    find_finest_independent_partition,
    find_iod,
    make_decomposition,
)
from .document import ProblemDocument, load_fixture
from .logic import format_formula, parse_formula
from .rules import RuleId, aggregate, apply_tiebreak
from .separability import Verdict, check_as_instance, check_oas_instance, run_property_suite

__all__ = [
    "Agenda", "JudgmentSet", "Profile", "make_preference_agenda",
    "Decomposition", "Kind", "aggregate_via_decomposition", "find_finest_independent_partition",
    "find_iod", "make_decomposition", "ProblemDocument", "load_fixture", "format_formula",
    "parse_formula", "RuleId", "aggregate", "apply_tiebreak", "Verdict", "check_as_instance",
    "check_oas_instance", "run_property_suite",
]
