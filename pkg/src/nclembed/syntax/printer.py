"""TPTP printing.  Parenthesization is explicit: every printed formula re-parses
to the same AST."""
from __future__ import annotations

from .ast import (
    AnnotatedFormula, App, BaseType, Binary, Connective, Const, Include, ListTerm,
    MapType, Not, Quant, Term, TptpType, TypeDecl, Var,
)

_BINDER_PREFIX = {"!": "! ", "?": "? ", "^": "^"}


def print_type(t: TptpType, language: str = "thf") -> str:
    if isinstance(t, BaseType):
        return t.name

    def arg(a):
        s = print_type(a, language)
        return f"({s})" if isinstance(a, MapType) else s

    if language == "thf" or len(t.args) == 1:
        return " > ".join([arg(a) for a in t.args] + [print_type(t.result, language)])
    return "(" + " * ".join(arg(a) for a in t.args) + ") > " + print_type(t.result, language)


def print_connective(c: Connective, language: str = "thf") -> str:
    params = list(c.indices) + [f"{k} := {print_term(v, language)}" for k, v in c.params]
    if params:
        return "{" + c.name + "(" + ", ".join(params) + ")}"
    return "{" + c.name + "}"


def print_term(t: Term, language: str = "thf", ctx: str = "top") -> str:
    """``ctx`` is ``top`` (outermost or list item), ``body`` (under a binder),
    ``arg`` (operand position) or ``app`` (operand of ``@``)."""
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Connective):
        return print_connective(t, language)
    if isinstance(t, App):
        if language != "thf" and isinstance(t.head, (Const, Var, Connective)):
            head = print_term(t.head, language, "arg")
            return head + "(" + ", ".join(print_term(a, language) for a in t.args) + ")"
        parts = [print_term(x, language, "app") for x in (t.head, *t.args)]
        return "(" + " @ ".join(parts) + ")"
    if isinstance(t, Not):
        inner = "~ " + print_term(t.arg, language, "arg")
        return f"({inner})" if ctx == "app" else inner
    if isinstance(t, Binary):
        inner = (print_term(t.left, language, "arg") + f" {t.op} "
                 + print_term(t.right, language, "arg"))
        return inner if ctx == "top" else f"({inner})"
    if isinstance(t, Quant):
        vs = ", ".join(v.name if v.type is None else f"{v.name}: {print_type(v.type, language)}"
                       for v in t.vars)
        inner = _BINDER_PREFIX[t.binder] + f"[{vs}]: " + print_term(t.body, language, "body")
        if ctx in ("arg", "app"):
            return f"( {inner})" if t.binder == "^" else f"({inner})"
        return inner
    if isinstance(t, ListTerm):
        return "[" + ", ".join(print_term(i, language) for i in t.items) + "]"
    raise TypeError(f"not a term: {t!r}")


def print_annotated(f: AnnotatedFormula) -> str:
    if isinstance(f.content, TypeDecl):
        body = f"{f.content.symbol}: {print_type(f.content.type, f.language)}"
    else:
        body = print_term(f.content, f.language)
    return f"{f.language}({f.name}, {f.role}, {body})."


def print_include(inc: Include) -> str:
    if inc.names is None:
        return f"include('{inc.path}')."
    return f"include('{inc.path}', [{', '.join(inc.names)}])."


def print_problem(problem) -> str:
    """Print a ``Problem`` or ``HolProblem`` (anything exposing ``entries``)."""
    lines = []
    for e in problem.entries:
        lines.append(print_include(e) if isinstance(e, Include) else print_annotated(e))
    return "".join(line + "\n" for line in lines)
