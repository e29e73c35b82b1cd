"""Exact counting for the exchange shuffle (n a_n)...(2 a_2)(1 a_1)."""

from .counting import catalan, g_closed, involutions, n_structured, n_tree_structured, nuni_structured
from .errors import CapExceeded, InvariantFailure, ParseError, QueryError, XShuffleError
from .extremal import ClassMaxReport, class_max, most_likely, most_likely_permutations
from .graph import ShuffleWord, apply_word, build_digraph, parse_word
from .oracle import CountQuery, Kind, Mode, count_all, eval_oracle, fixed_point_dist_oracle
from .perm import CycleSeq, PartitionClass, Permutation, format_cycles, parse_cycles
from .series import limit_distribution, qn_exact

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "ClassMaxReport", "CountQuery", "CycleSeq", "InvariantFailure", "Kind", "Mode",
    "ParseError", "PartitionClass", "Permutation", "QueryError", "ShuffleWord", "XShuffleError",
    "apply_word", "build_digraph", "catalan", "class_max", "count_all", "eval_oracle",
    "fixed_point_dist_oracle", "format_cycles", "g_closed", "involutions", "limit_distribution",
    "most_likely", "most_likely_permutations", "n_structured", "n_tree_structured",
    "nuni_structured", "parse_cycles", "parse_word", "qn_exact",
]
