"""Exact verification toolkit for two-color permutation-type R-matrices."""

__version__ = "0.1.0"

from .bitlinalg import (
    ABParseError,
    AffineBitMap,
    BUILTIN_MAPS,
    PermOperator,
    SimplexScheme,
    apply_map,
    parse_ab,
    perm_simplex_check,
)
from .opmatrix import OpMatrix, SlotEmbedding, embed, from_perm, linear_comb, partial_trace
from .polyring import MPoly, VarTable, parse_rational
from .report import Report

__all__ = [
    "ABParseError",
    "AffineBitMap",
    "BUILTIN_MAPS",
    "MPoly",
    "OpMatrix",
    "PermOperator",
    "Report",
    "SimplexScheme",
    "SlotEmbedding",
    "VarTable",
    "apply_map",
    "embed",
    "from_perm",
    "linear_comb",
    "parse_ab",
    "parse_rational",
    "partial_trace",
    "perm_simplex_check",
    "__version__",
]
