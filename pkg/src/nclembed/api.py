"""Library entry points: text or AST in, embedded problem out."""
from __future__ import annotations

from pathlib import Path

from .holkit import HolProblem, unfold_definitions
from .logicspec import extract_logic_spec, lookup_embedding
from .syntax import parse_problem, print_problem, resolve_includes
from .syntax.ast import Problem


def embed_problem(problem: Problem, inline: bool = False) -> Problem | HolProblem:
    """Embed a problem according to its logic specification.

    A problem without a specification is returned unchanged.
    """
    spec, rest = extract_logic_spec(problem)
    if spec is None:
        return problem
    embedded = lookup_embedding(spec.logic_name)(rest, spec)
    return unfold_definitions(embedded) if inline else embedded


def load_problem(text: str, origin: str | Path | None = None, search_paths=()) -> Problem:
    problem = parse_problem(text)
    if problem.includes:
        problem = resolve_includes(problem, search_paths, origin)
    return problem


def embed_text(text: str, inline: bool = False, origin=None, search_paths=()) -> str:
    return print_problem(embed_problem(load_problem(text, origin, search_paths), inline))
