"""Causal effect identification and simplification of the resulting expressions."""

from ._core import (
    ArgumentError,
    CausalError,
    ContractViolation,
    EquivalenceReport,
    EvaluationError,
    Expression,
    Graph,
    Identification,
    LookupError,
    ParseError,
    StructuralError,
    assert_equivalent,
    identify,
    simplify,
)

__all__ = [
    "ArgumentError",
    "CausalError",
    "ContractViolation",
    "EquivalenceReport",
    "EvaluationError",
    "Expression",
    "Graph",
    "Identification",
    "LookupError",
    "ParseError",
    "StructuralError",
    "assert_equivalent",
    "identify",
    "simplify",
]
