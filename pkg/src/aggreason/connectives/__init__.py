"""Fuzzy connectives: aggregation functions, implications and negations.

Families:
- t-norms, t-conorms, means and copulas (``aggregations``)
- residuated, S-, (A,N)-, f-, g- and probabilistic implications (``implications``)
- negations and generators, resolved by name through the registry
"""

from aggreason.connectives.base import (
    Aggregation,
    AggregationAttributes,
    BinaryConnective,
    Implication,
    ImplicationAttributes,
    Negation,
    SidedElement,
)
from aggreason.connectives.registry import ConnectiveRegistry, ConnectiveSpec, get_registry

__all__ = [
    "Aggregation",
    "AggregationAttributes",
    "BinaryConnective",
    "ConnectiveRegistry",
    "ConnectiveSpec",
    "Implication",
    "ImplicationAttributes",
    "Negation",
    "SidedElement",
    "get_registry",
]
