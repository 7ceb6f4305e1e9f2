"""Parsing and printing of TPTP problems with non-classical connectives."""
from .ast import *  # noqa: F401,F403
from .includes import resolve_includes
from .parser import parse_formula, parse_problem, parse_type
from .printer import print_annotated, print_problem, print_term, print_type
from .signature import Signature, formula_items, infer_signature

__all__ = [
    "parse_problem", "parse_formula", "parse_type", "print_problem", "print_term",
    "print_type", "print_annotated", "resolve_includes", "Signature", "infer_signature",
    "formula_items",
]
