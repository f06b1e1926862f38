"""Exact rank computations for classes of finite relational structures."""

from .errors import InputError, MoveError, ParseError, RankError, ResourceError
from .oracles import GRAPHS, LINEAR_ORDERS, PARTIAL_ORDERS, TOURNAMENTS, ClassOracle, parse_class
from .ordinals import CNFOrdinal, format_ordinal, parse_ordinal, rank_of_ordinal, rank_of_Z_times
from .rank import RankMemo, rank, rank_subset
from .structures import FiniteStructure, RelationalSignature, chain, graph, tournament

__version__ = "0.1.0"

__all__ = [
    "CNFOrdinal",
    "ClassOracle",
    "FiniteStructure",
    "GRAPHS",
    "InputError",
    "LINEAR_ORDERS",
    "MoveError",
    "PARTIAL_ORDERS",
    "ParseError",
    "RankError",
    "RankMemo",
    "RelationalSignature",
    "ResourceError",
    "TOURNAMENTS",
    "chain",
    "format_ordinal",
    "graph",
    "parse_class",
    "parse_ordinal",
    "rank",
    "rank_of_Z_times",
    "rank_of_ordinal",
    "rank_subset",
    "tournament",
]
