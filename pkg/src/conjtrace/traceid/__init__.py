"""Trace identities: SL(2) Fricke polynomials, Horowitz words, SL(3) tests,
trace trade-up and the pair search."""

from .fricke import fricke, fricke_key, sl2_equivalent
from .horowitz import HorowitzParams, horowitz_family, horowitz_word
from .search import PairRecord, SearchReport, search_pairs, search_range
from .sl3 import Sl3Witness, sl3_generic_trace, sl3_witness_distinguish
from .tradeup import TraceExpression, leading_atom, tradeup_rewrite

__all__ = [
    "fricke", "fricke_key", "sl2_equivalent", "HorowitzParams", "horowitz_family",
    "horowitz_word", "PairRecord", "SearchReport", "search_pairs", "search_range",
    "Sl3Witness", "sl3_generic_trace", "sl3_witness_distinguish",
    "TraceExpression", "leading_atom", "tradeup_rewrite",
]
