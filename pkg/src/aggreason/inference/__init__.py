"""Inference methods for fuzzy modus ponens and tollens.

- ``acri``: compositional rule of inference with an aggregation, FITA/FATI
- ``asbr``: similarity-based reasoning, conclusion schemes 1-4
- ``aqip``: quintuple implication solutions via the induced aggregation
"""

from aggreason.inference.acri import FuzzyRelation, MisoRule, RuleBase, acri_fmp, acri_fmt, fati, fita
from aggreason.inference.aqip import aqip_fmp, aqip_fmt, qip_tnorm_solution, qip_tnorm_solution_fmt
from aggreason.inference.asbr import asbr_conclude

__all__ = [
    "FuzzyRelation",
    "MisoRule",
    "RuleBase",
    "acri_fmp",
    "acri_fmt",
    "aqip_fmp",
    "aqip_fmt",
    "asbr_conclude",
    "fati",
    "fita",
    "qip_tnorm_solution",
    "qip_tnorm_solution_fmt",
]
