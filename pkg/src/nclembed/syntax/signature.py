"""Symbol typing for source problems.

Declared symbols keep their declared types.  Undeclared symbols default to
``$i * ... * $i > $o`` when used as formulas and ``$i * ... * $i > $i`` when
used as terms.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import HolTypeError
from .ast import (
    BOOL, INDIVIDUAL, TTYPE, App, BaseType, Binary, Connective,
    Const, ListTerm, MapType, Not, Problem, Quant, Term, TptpType, TypeDecl, Var,
)


@dataclass
class Signature:
    types: list = field(default_factory=list)
    symbols: dict = field(default_factory=dict)

    def type_of(self, symbol: str) -> TptpType:
        return self.symbols[symbol]

    def is_predicate(self, symbol: str) -> bool:
        t = self.symbols[symbol]
        return (t.result if isinstance(t, MapType) else t) == BOOL


def is_symbol(name: str) -> bool:
    return not name.startswith(("$", "#", '"')) and not name[0].isdigit()


def formula_items(problem: Problem):
    """Annotated formulas that carry logical content (not types, not logic specs)."""
    return [f for f in problem.formulas if f.role not in ("type", "logic")]


def infer_signature(problem: Problem) -> Signature:
    sig = Signature()
    declared = {}
    for f in problem.formulas:
        if f.role == "type" and isinstance(f.content, TypeDecl):
            decl = f.content
            if decl.type == TTYPE:
                if decl.symbol not in sig.types:
                    sig.types.append(decl.symbol)
            else:
                declared[decl.symbol] = decl.type
    used: dict[str, TptpType] = {}

    def note(name: str, n: int, as_formula: bool):
        if name in declared:
            return
        res = BOOL if as_formula else INDIVIDUAL
        t = MapType((INDIVIDUAL,) * n, res) if n else res
        prev = used.get(name)
        if prev is not None and prev != t:
            raise HolTypeError(f"symbol '{name}' used inconsistently ({prev} vs {t})")
        used[name] = t

    def walk_formula(t: Term):
        if isinstance(t, Const):
            if is_symbol(t.name):
                note(t.name, 0, True)
        elif isinstance(t, Var):
            pass
        elif isinstance(t, App):
            if isinstance(t.head, Connective):
                walk_connective(t.head)
                for a in t.args:
                    walk_formula(a)
            elif isinstance(t.head, Const):
                if is_symbol(t.head.name):
                    note(t.head.name, len(t.args), True)
                for a in t.args:
                    walk_term(a)
            else:
                for a in t.args:
                    walk_term(a)
        elif isinstance(t, Not):
            walk_formula(t.arg)
        elif isinstance(t, Binary):
            if t.op in ("=", "!="):
                walk_term(t.left)
                walk_term(t.right)
            else:
                walk_formula(t.left)
                walk_formula(t.right)
        elif isinstance(t, Quant):
            walk_formula(t.body)
        elif isinstance(t, Connective):
            walk_connective(t)

    def walk_connective(c: Connective):
        for _, v in c.params:
            if isinstance(v, ListTerm):
                continue
            walk_formula(v)

    def walk_term(t: Term):
        if isinstance(t, Const):
            if is_symbol(t.name):
                note(t.name, 0, False)
        elif isinstance(t, App) and isinstance(t.head, Const):
            if is_symbol(t.head.name):
                note(t.head.name, len(t.args), False)
            for a in t.args:
                walk_term(a)
        elif isinstance(t, (App, Not, Binary, Quant, Connective)):
            walk_formula(t)

    for f in formula_items(problem):
        walk_formula(f.content)
    sig.symbols = {**used, **declared}
    for t in sig.symbols.values():
        for b in ((*t.args, t.result) if isinstance(t, MapType) else (t,)):
            if isinstance(b, BaseType) and not b.name.startswith("$") and b.name not in sig.types:
                sig.types.append(b.name)
    return sig


def variable_type(v) -> TptpType:
    return v.type if v.type is not None else INDIVIDUAL
