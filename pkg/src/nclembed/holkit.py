"""Classical higher-order (THF) term utilities and output problem assembly."""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .errors import HolTypeError
from .syntax.ast import (
    BOOL, TTYPE, AnnotatedFormula, App, BaseType, Binary, Connective, Const, ListTerm,
    MapType, Not, Problem, Quant, Term, TptpType, TypedVar, TypeDecl, Var,
)
from .syntax.printer import print_term, print_type

LOGICAL_OPS = ("&", "|", "=>", "<=", "<=>", "<~>", "~|", "~&")

RESERVED = re.compile(
    r"^m(world|rel|box|dia|not|and|or|impl|equiv|forall|exists|eiw|global|local|actual"
    r"|knows|common|announce|tc|obl|ob|better|opt)(_\w*)?$")


def fresh_name(base: str, used) -> str:
    if base not in used:
        return base
    i = 1
    while f"{base}{i}" in used:
        i += 1
    return f"{base}{i}"


# ---------------------------------------------------------------- variables


def free_vars(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Const, Connective)):
        return set()
    if isinstance(t, App):
        out = free_vars(t.head)
        for a in t.args:
            out |= free_vars(a)
        return out
    if isinstance(t, Not):
        return free_vars(t.arg)
    if isinstance(t, Binary):
        return free_vars(t.left) | free_vars(t.right)
    if isinstance(t, Quant):
        return free_vars(t.body) - {v.name for v in t.vars}
    if isinstance(t, ListTerm):
        out = set()
        for i in t.items:
            out |= free_vars(i)
        return out
    raise TypeError(f"not a term: {t!r}")


def all_var_names(t: Term) -> set:
    out = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            out.add(s.name)
        elif isinstance(s, App):
            stack.append(s.head)
            stack.extend(s.args)
        elif isinstance(s, Not):
            stack.append(s.arg)
        elif isinstance(s, Binary):
            stack.extend((s.left, s.right))
        elif isinstance(s, Quant):
            out.update(v.name for v in s.vars)
            stack.append(s.body)
        elif isinstance(s, ListTerm):
            stack.extend(s.items)
        elif isinstance(s, Connective):
            out.update(i[1:] for i in s.indices)
            stack.extend(v for _, v in s.params)
    return out


def substitute(t: Term, mapping: dict) -> Term:
    """Capture-avoiding simultaneous substitution of variables."""
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, (Const, Connective)):
        return t
    if isinstance(t, App):
        return App(substitute(t.head, mapping), tuple(substitute(a, mapping) for a in t.args))
    if isinstance(t, Not):
        return Not(substitute(t.arg, mapping))
    if isinstance(t, Binary):
        return Binary(t.op, substitute(t.left, mapping), substitute(t.right, mapping))
    if isinstance(t, ListTerm):
        return ListTerm(tuple(substitute(i, mapping) for i in t.items))
    if isinstance(t, Quant):
        bound = {v.name for v in t.vars}
        inner = {k: v for k, v in mapping.items() if k not in bound}
        body_free = free_vars(t.body)
        inner = {k: v for k, v in inner.items() if k in body_free}
        if not inner:
            return t
        incoming = set()
        for v in inner.values():
            incoming |= free_vars(v)
        new_vars, renames = [], {}
        used = incoming | body_free | bound | set(inner)
        for v in t.vars:
            if v.name in incoming:
                name = fresh_name(v.name, used)
                used.add(name)
                renames[v.name] = Var(name)
                new_vars.append(TypedVar(name, v.type))
            else:
                new_vars.append(v)
        body = substitute(t.body, renames) if renames else t.body
        return Quant(t.binder, tuple(new_vars), substitute(body, inner))
    raise TypeError(f"not a term: {t!r}")


def replace_constants(t: Term, mapping: dict) -> Term:
    """Replace constants by (closed) terms."""
    if isinstance(t, Const):
        return mapping.get(t.name, t)
    if isinstance(t, (Var, Connective)):
        return t
    if isinstance(t, App):
        return App(replace_constants(t.head, mapping),
                   tuple(replace_constants(a, mapping) for a in t.args))
    if isinstance(t, Not):
        return Not(replace_constants(t.arg, mapping))
    if isinstance(t, Binary):
        return Binary(t.op, replace_constants(t.left, mapping), replace_constants(t.right, mapping))
    if isinstance(t, Quant):
        return Quant(t.binder, t.vars, replace_constants(t.body, mapping))
    if isinstance(t, ListTerm):
        return ListTerm(tuple(replace_constants(i, mapping) for i in t.items))
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------- beta


def beta_normalize(t: Term) -> Term:
    """Full beta normal form (normal order); eta is left alone."""
    if isinstance(t, (Var, Const, Connective)):
        return t
    if isinstance(t, App):
        head = beta_normalize(t.head)
        args = list(t.args)
        while args and isinstance(head, Quant) and head.binder == "^":
            k = min(len(head.vars), len(args))
            mapping = {head.vars[i].name: args[i] for i in range(k)}
            body = head.body if k == len(head.vars) else Quant("^", head.vars[k:], head.body)
            head = beta_normalize(substitute(body, mapping))
            args = args[k:]
        if not args:
            return head
        return App(head, tuple(beta_normalize(a) for a in args))
    if isinstance(t, Not):
        return Not(beta_normalize(t.arg))
    if isinstance(t, Binary):
        return Binary(t.op, beta_normalize(t.left), beta_normalize(t.right))
    if isinstance(t, Quant):
        return Quant(t.binder, t.vars, beta_normalize(t.body))
    if isinstance(t, ListTerm):
        return ListTerm(tuple(beta_normalize(i) for i in t.items))
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------- typing


def _show(t: Term) -> str:
    try:
        return print_term(t)
    except TypeError:
        return repr(t)


def infer_type(t: Term, consts: dict, local: dict | None = None) -> TptpType:
    """Type of ``t`` given constant and bound-variable types; raises HolTypeError."""
    local = local or {}
    if isinstance(t, Var):
        if t.name not in local:
            raise HolTypeError(f"unbound variable {t.name}")
        return local[t.name]
    if isinstance(t, Const):
        if t.name in ("$true", "$false"):
            return BOOL
        if t.name not in consts:
            raise HolTypeError(f"undeclared constant {t.name}")
        return consts[t.name]
    if isinstance(t, App):
        ht = infer_type(t.head, consts, local)
        if not isinstance(ht, MapType) or len(t.args) > len(ht.args):
            raise HolTypeError(f"{_show(t)}: cannot apply {_show(t.head)} of type "
                               f"{print_type(ht)} to {len(t.args)} argument(s)")
        for expected, a in zip(ht.args, t.args):
            actual = infer_type(a, consts, local)
            if actual != expected:
                raise HolTypeError(f"{_show(t)}: argument {_show(a)} has type {print_type(actual)},"
                                   f" expected {print_type(expected)}")
        return ht.apply(len(t.args))
    if isinstance(t, Not):
        _expect(t.arg, BOOL, consts, local)
        return BOOL
    if isinstance(t, Binary):
        if t.op in LOGICAL_OPS:
            _expect(t.left, BOOL, consts, local)
            _expect(t.right, BOOL, consts, local)
            return BOOL
        if t.op in ("=", "!="):
            lt = infer_type(t.left, consts, local)
            rt = infer_type(t.right, consts, local)
            if lt != rt:
                raise HolTypeError(f"{_show(t)}: equation between {print_type(lt)} and "
                                   f"{print_type(rt)}")
            return BOOL
        raise HolTypeError(f"operator {t.op} is not classical HOL")
    if isinstance(t, Quant):
        inner = dict(local)
        for v in t.vars:
            if v.type is None:
                raise HolTypeError(f"variable {v.name} needs a type")
            inner[v.name] = v.type
        body = infer_type(t.body, consts, inner)
        if t.binder == "^":
            return MapType(tuple(v.type for v in t.vars), body)
        if body != BOOL:
            raise HolTypeError(f"{_show(t)}: quantified body has type {print_type(body)}")
        return BOOL
    raise HolTypeError(f"{_show(t)} is not a HOL term")


def _expect(t: Term, expected: TptpType, consts: dict, local: dict):
    actual = infer_type(t, consts, local)
    if actual != expected:
        raise HolTypeError(f"{_show(t)} has type {print_type(actual)}, expected "
                           f"{print_type(expected)}")


# ---------------------------------------------------------------- problems


@dataclass(frozen=True)
class HolProblem:
    declarations: tuple = ()
    definitions: tuple = ()
    axioms: tuple = ()
    formulas: tuple = ()
    logic: str | None = None
    # source formula name -> its lifted translation, before role wrapping
    lifted: dict = field(default_factory=dict)
    # introduced or user symbol -> semantic role, used to build finite interpretations
    origin: dict = field(default_factory=dict)

    @property
    def entries(self) -> tuple:
        return self.declarations + self.definitions + self.axioms + self.formulas

    def signature(self) -> dict:
        return {d.content.symbol: d.content.type for d in self.declarations
                if d.content.type != TTYPE}

    def base_types(self) -> list:
        return [d.content.symbol for d in self.declarations if d.content.type == TTYPE]

    def definition_map(self) -> dict:
        return {d.content.left.name: d.content.right for d in self.definitions}

    def to_problem(self) -> Problem:
        return Problem(self.entries)


def declaration(name: str, symbol: str, type_: TptpType) -> AnnotatedFormula:
    return AnnotatedFormula("thf", name, "type", TypeDecl(symbol, type_))


def definition(name: str, symbol: str, body: Term) -> AnnotatedFormula:
    return AnnotatedFormula("thf", name, "definition", Binary("=", Const(symbol), body))


def formula(name: str, role: str, body: Term) -> AnnotatedFormula:
    return AnnotatedFormula("thf", name, role, body)


def _check_type_wellformed(t: TptpType, base: set, where: str):
    parts = (*t.args, t.result) if isinstance(t, MapType) else (t,)
    for p in parts:
        if isinstance(p, MapType):
            _check_type_wellformed(p, base, where)
        elif p.name not in base:
            raise HolTypeError(f"{where}: unknown type {p.name}")


def assemble(decls=(), defs=(), axioms=(), user_formulas=(), *, logic=None,
             lifted=None, origin=None) -> HolProblem:
    """Type-check every entry and build a HolProblem in emission order."""
    names, base, consts = set(), {"$o", "$i", "$tType"}, {}
    for group in (decls, defs, axioms, user_formulas):
        for e in group:
            if e.language != "thf":
                raise HolTypeError(f"{e.name}: output formulas must use thf")
            if e.name in names:
                raise HolTypeError(f"duplicate formula name {e.name}")
            names.add(e.name)
    for d in decls:
        decl = d.content
        if not isinstance(decl, TypeDecl) or d.role != "type":
            raise HolTypeError(f"{d.name}: declaration segment holds only type declarations")
        if decl.symbol in consts or decl.symbol in base - {"$o", "$i", "$tType"}:
            raise HolTypeError(f"symbol {decl.symbol} declared twice")
        if decl.type == TTYPE:
            base.add(decl.symbol)
        else:
            _check_type_wellformed(decl.type, base, d.name)
            consts[decl.symbol] = decl.type
    defined = set()
    for d in defs:
        body = d.content
        if not (isinstance(body, Binary) and body.op == "=" and isinstance(body.left, Const)):
            raise HolTypeError(f"{d.name}: definitions must have the form c = term")
        sym = body.left.name
        if sym not in consts:
            raise HolTypeError(f"{d.name}: defined symbol {sym} is not declared")
        if sym in defined:
            raise HolTypeError(f"{d.name}: {sym} defined twice")
        _expect(body.right, consts[sym], consts, {})
        defined.add(sym)
    for e in (*axioms, *user_formulas):
        try:
            _expect(e.content, BOOL, consts, {})
        except HolTypeError as exc:
            raise HolTypeError(f"{e.name}: {exc}") from None
    return HolProblem(tuple(decls), tuple(defs), tuple(axioms), tuple(user_formulas),
                      logic, dict(lifted or {}), dict(origin or {}))


def unfold_definitions(problem: HolProblem) -> HolProblem:
    """Inline every definition and beta-normalize (the compact output form)."""
    expanded = {}
    for d in problem.definitions:
        sym = d.content.left.name
        expanded[sym] = beta_normalize(replace_constants(d.content.right, expanded))

    def unfold(t):
        return beta_normalize(replace_constants(t, expanded))

    decls = tuple(d for d in problem.declarations if d.content.symbol not in expanded)
    axioms = tuple(replace(a, content=unfold(a.content)) for a in problem.axioms)
    formulas = tuple(replace(f, content=unfold(f.content)) for f in problem.formulas)
    lifted = {k: unfold(v) for k, v in problem.lifted.items()}
    return replace(problem, declarations=decls, definitions=(), axioms=axioms,
                   formulas=formulas, lifted=lifted)


# ---------------------------------------------------------------- clashes


def _rename_type(t: TptpType, mapping: dict) -> TptpType:
    if isinstance(t, BaseType):
        return BaseType(mapping.get(t.name, t.name))
    return MapType(tuple(_rename_type(a, mapping) for a in t.args), _rename_type(t.result, mapping))


def _rename_in_term(t: Term, mapping: dict) -> Term:
    if isinstance(t, Const):
        return Const(mapping.get(t.name, t.name))
    if isinstance(t, Var):
        return t
    if isinstance(t, Connective):
        indices = tuple("#" + mapping.get(i[1:], i[1:]) for i in t.indices)
        return Connective(t.name, indices,
                          tuple((k, _rename_in_term(v, mapping)) for k, v in t.params))
    if isinstance(t, App):
        return App(_rename_in_term(t.head, mapping), tuple(_rename_in_term(a, mapping) for a in t.args))
    if isinstance(t, Not):
        return Not(_rename_in_term(t.arg, mapping))
    if isinstance(t, Binary):
        return Binary(t.op, _rename_in_term(t.left, mapping), _rename_in_term(t.right, mapping))
    if isinstance(t, Quant):
        vs = tuple(TypedVar(v.name, None if v.type is None else _rename_type(v.type, mapping))
                   for v in t.vars)
        return Quant(t.binder, vs, _rename_in_term(t.body, mapping))
    if isinstance(t, ListTerm):
        return ListTerm(tuple(_rename_in_term(i, mapping) for i in t.items))
    raise TypeError(f"not a term: {t!r}")


def rename_reserved_symbols(problem: Problem):
    """Rename user symbols and types that collide with reserved ``m``-prefixed names.

    Returns the renamed problem and the mapping old -> new.
    """
    symbols = set()
    for f in problem.formulas:
        if isinstance(f.content, TypeDecl):
            symbols.add(f.content.symbol)
        else:
            stack = [f.content]
            while stack:
                s = stack.pop()
                if isinstance(s, Const):
                    symbols.add(s.name)
                elif isinstance(s, App):
                    stack.append(s.head)
                    stack.extend(s.args)
                elif isinstance(s, Not):
                    stack.append(s.arg)
                elif isinstance(s, Binary):
                    stack.extend((s.left, s.right))
                elif isinstance(s, Quant):
                    stack.append(s.body)
                    for v in s.vars:
                        if isinstance(v.type, BaseType):
                            symbols.add(v.type.name)
                elif isinstance(s, Connective):
                    stack.extend(v for _, v in s.params)
                    symbols.update(i[1:] for i in s.indices)
                elif isinstance(s, ListTerm):
                    stack.extend(s.items)
    clashes = sorted(s for s in symbols if RESERVED.match(s))
    if not clashes:
        return problem, {}
    used = set(symbols)
    mapping = {}
    for s in clashes:
        new = fresh_name(s, used)
        if RESERVED.match(new):
            new = fresh_name("x" + s, used)
        used.add(new)
        mapping[s] = new
    entries = []
    for e in problem.entries:
        if isinstance(e, AnnotatedFormula):
            if isinstance(e.content, TypeDecl):
                c = TypeDecl(mapping.get(e.content.symbol, e.content.symbol),
                             _rename_type(e.content.type, mapping))
            elif e.role == "logic":
                c = e.content
            else:
                c = _rename_in_term(e.content, mapping)
            e = replace(e, content=c)
        entries.append(e)
    return Problem(tuple(entries)), mapping


class ProblemBuilder:
    """Collects output entries; introduced entry names never collide with user ones."""

    def __init__(self, user_formula_names=()):
        self.decls, self.defs, self.axioms, self.formulas = [], [], [], []
        self.names = set(user_formula_names)
        self.declared = {}
        self.origin = {}
        self.lifted = {}

    def entry_name(self, base: str) -> str:
        name = fresh_name(base, self.names)
        self.names.add(name)
        return name

    def declare(self, symbol: str, type_: TptpType, origin: tuple | None = None):
        if symbol in self.declared:
            return
        self.declared[symbol] = type_
        self.decls.append(declaration(self.entry_name(f"{symbol}_type"), symbol, type_))
        if origin is not None:
            self.origin[symbol] = origin

    def define(self, symbol: str, type_: TptpType, body: Term):
        self.declare(symbol, type_)
        self.defs.append(definition(self.entry_name(f"{symbol}_def"), symbol, body))

    def axiom(self, base: str, body: Term):
        self.axioms.append(formula(self.entry_name(base), "axiom", body))

    def user_formula(self, name: str, role: str, body: Term, lifted: Term | None = None):
        self.formulas.append(formula(name, role, body))
        if lifted is not None:
            self.lifted[name] = lifted

    def build(self, logic: str) -> HolProblem:
        return assemble(self.decls, self.defs, self.axioms, self.formulas, logic=logic,
                        lifted=self.lifted, origin=self.origin)
