"""One representation for constituency, dependency and categorial structure."""
from .categories import (Atomic, Leftward, Lexicon, Rightward, Sentence, Token,
                         parse_category, parse_delta, print_category, print_delta)
from .cg import CGDerivation, derivation_from_json, derive, replay
from .correspondence import cg_to_dg, dg_to_cg_step, verify_equivalences
from .dg import DepGraph, build_graph, delta, projectivity
from .psg import cg_to_psg, crossing_report, extract_rules
from .unified import abbreviated, build_unified, read_dependencies

__version__ = "0.1.0"

__all__ = [
    "Atomic", "Leftward", "Lexicon", "Rightward", "Sentence", "Token",
    "parse_category", "parse_delta", "print_category", "print_delta",
    "CGDerivation", "derivation_from_json", "derive", "replay",
    "cg_to_dg", "dg_to_cg_step", "verify_equivalences",
    "DepGraph", "build_graph", "delta", "projectivity",
    "cg_to_psg", "crossing_report", "extract_rules",
    "abbreviated", "build_unified", "read_dependencies",
]
