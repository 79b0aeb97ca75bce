"""Translate LTL to limit-deterministic Buechi automata and those to
deterministic parity automata by coloring run DAGs."""

__version__ = "0.1.0"

from .automata import (  # noqa: E402
    Dpa,
    Ldba,
    complement_dpa,
    compress_colors,
    dpa_accepts_lasso,
    eliminate_jumps,
    ldba_accepts_lasso,
    make_ord,
    validate_ldba,
)
from .determinize import (  # noqa: E402
    choose_ord,
    construct,
    construct_dpa,
    construct_reduced_dpa,
    syntactic_oracle,
)
from .hoa import emit_dot, emit_hoa, parse_hoa  # noqa: E402
from .ltl import eval_lasso, parse_ltl, to_nnf  # noqa: E402
from .ltl2ldba import translate  # noqa: E402
from .pipeline import PipelineConfig, crossvalidate, negation_race, translate_pipeline  # noqa: E402
from .words import LassoWord  # noqa: E402

__all__ = [
    "Dpa", "Ldba", "LassoWord", "PipelineConfig", "choose_ord", "complement_dpa",
    "compress_colors", "construct", "construct_dpa", "construct_reduced_dpa", "crossvalidate",
    "dpa_accepts_lasso", "eliminate_jumps", "emit_dot", "emit_hoa", "eval_lasso",
    "ldba_accepts_lasso", "make_ord", "negation_race", "parse_hoa", "parse_ltl",
    "syntactic_oracle", "to_nnf", "translate", "translate_pipeline", "validate_ldba",
]
