"""Embed non-classical TPTP problems (modal, hybrid, PAL, dyadic deontic) into classical THF."""
from .api import embed_problem, embed_text, load_problem
from .errors import EmbeddingToolError
from .holkit import HolProblem
from .logicspec import extract_logic_spec, lookup_embedding, supported_logics
from .syntax import parse_problem, print_problem

__version__ = "0.1.0"

__all__ = [
    "embed_problem", "embed_text", "load_problem", "EmbeddingToolError", "HolProblem",
    "extract_logic_spec", "lookup_embedding", "supported_logics", "parse_problem",
    "print_problem",
]
