"""DatalogMTL reasoner over the rational timeline.

Materialisation-based forward chaining combined with an automata-based
decision procedure for recursive programs.
"""

from .intervals import Interval, make, point
from .syntax import (
    Fact,
    Program,
    Rule,
    SyntaxFault,
    parse_dataset,
    parse_fact,
    parse_program,
    print_dataset,
    print_program,
)
from .store import FactStore
from .materialisation import MaterialisationOutcome, apply_rules, materialise

__all__ = [
    "Interval",
    "make",
    "point",
    "Fact",
    "Program",
    "Rule",
    "SyntaxFault",
    "parse_dataset",
    "parse_fact",
    "parse_program",
    "print_dataset",
    "print_program",
    "FactStore",
    "MaterialisationOutcome",
    "apply_rules",
    "materialise",
]

__version__ = "0.1.0"
