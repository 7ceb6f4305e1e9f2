"""Recursive-descent parser for the TFF/TXF/THF subset plus non-classical connectives."""
from __future__ import annotations

from ..errors import TptpSyntaxError
from .ast import (
    BINARY_CONNECTIVES, EQUALITY_OPS, AnnotatedFormula, App, BaseType, Binary,
    Connective, Const, Include, ListTerm, MapType, Not, Problem, Quant, Term,
    TptpType, TypedVar, TypeDecl, Var,
)
from .lexer import Token, tokenize

LANGUAGES = ("tff", "thf", "fof")
_ATOM_KINDS = ("lower", "upper", "dollar", "single", "distinct", "number", "index")


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token helpers
    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text == text

    def take(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        shown = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise TptpSyntaxError(f"{message}, found {shown}", tok.line, tok.column, tok.text)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.take()

    # -- top level
    def problem(self) -> Problem:
        entries = []
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "lower" and tok.text == "include":
                entries.append(self.include())
            elif tok.kind == "lower" and tok.text in LANGUAGES:
                entries.append(self.annotated())
            else:
                self.error("expected an annotated formula or include directive")
        return Problem(tuple(entries))

    def include(self) -> Include:
        self.take()
        self.expect("(")
        tok = self.take()
        if tok.kind != "single":
            self.error("expected a quoted file name", tok)
        names = None
        if self.at(","):
            self.take()
            self.expect("[")
            names = []
            if not self.at("]"):
                names.append(self.formula_name())
                while self.at(","):
                    self.take()
                    names.append(self.formula_name())
            self.expect("]")
            names = tuple(names)
        self.expect(")")
        self.expect(".")
        return Include(tok.text[1:-1], names)

    def formula_name(self) -> str:
        tok = self.take()
        if tok.kind not in ("lower", "upper", "single", "number"):
            self.error("expected a formula name", tok)
        return tok.text

    def annotated(self) -> AnnotatedFormula:
        language = self.take().text
        self.expect("(")
        name = self.formula_name()
        self.expect(",")
        role_tok = self.take()
        if role_tok.kind != "lower":
            self.error("expected a formula role", role_tok)
        role = role_tok.text
        self.expect(",")
        if role == "type":
            content = self.type_decl()
        else:
            content = self.formula()
        if self.at(","):
            self.skip_annotations()
        self.expect(")")
        self.expect(".")
        return AnnotatedFormula(language, name, role, content)

    def skip_annotations(self):
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                self.error("unterminated annotated formula")
            if tok.kind == "op" and tok.text in "([{":
                depth += 1
            elif tok.kind == "op" and tok.text in ")]}":
                if depth == 0:
                    return
                depth -= 1
            self.take()

    # -- types
    def type_decl(self) -> TypeDecl:
        if self.at("("):
            self.take()
            decl = self.type_decl()
            self.expect(")")
            return decl
        tok = self.take()
        if tok.kind not in ("lower", "single", "dollar"):
            self.error("expected a symbol in type declaration", tok)
        self.expect(":")
        return TypeDecl(tok.text, self.type_expr())

    def type_expr(self) -> TptpType:
        parts = self.type_product()
        if self.at(">"):
            self.take()
            return MapType(tuple(parts), self.type_expr())
        if len(parts) > 1:
            self.error("product type must be followed by '>'")
        return parts[0]

    def type_product(self) -> list:
        parts = self.type_unit()
        while self.at("*"):
            self.take()
            parts += self.type_unit()
        return parts

    def type_unit(self) -> list:
        if self.at("("):
            self.take()
            parts = self.type_product()
            if self.at(">"):
                self.take()
                parts = [MapType(tuple(parts), self.type_expr())]
            self.expect(")")
            return parts
        tok = self.take()
        if tok.kind not in ("lower", "dollar", "single"):
            self.error("expected a type", tok)
        return [BaseType(tok.text)]

    # -- formulas
    def formula(self) -> Term:
        left = self.unitary_eq()
        tok = self.peek()
        if tok.kind == "op" and tok.text in BINARY_CONNECTIVES:
            op = self.take().text
            node = Binary(op, left, self.unitary_eq())
            if op in ("&", "|"):
                while self.at(op):
                    self.take()
                    node = Binary(op, node, self.unitary_eq())
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text in BINARY_CONNECTIVES:
                self.error("mixed binary connectives need parentheses")
            return node
        return left

    def unitary_eq(self) -> Term:
        left = self.unitary()
        tok = self.peek()
        if tok.kind == "op" and tok.text in EQUALITY_OPS:
            op = self.take().text
            return Binary(op, left, self.unitary())
        return left

    def unitary(self) -> Term:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "~":
            self.take()
            return Not(self.unitary_eq())
        if tok.kind == "op" and tok.text in ("!", "?", "^"):
            return self.quantified()
        return self.application()

    def quantified(self) -> Term:
        binder = self.take().text
        self.expect("[")
        variables = [self.typed_var()]
        while self.at(","):
            self.take()
            variables.append(self.typed_var())
        self.expect("]")
        self.expect(":")
        return Quant(binder, tuple(variables), self.unitary_eq())

    def typed_var(self) -> TypedVar:
        tok = self.take()
        if tok.kind != "upper":
            self.error("expected a variable", tok)
        if self.at(":"):
            self.take()
            return TypedVar(tok.text, self.type_expr())
        return TypedVar(tok.text)

    def application(self) -> Term:
        term = self.atom()
        if self.at("(") and isinstance(term, (Const, Var, Connective)):
            self.take()
            args = [self.formula()]
            while self.at(","):
                self.take()
                args.append(self.formula())
            self.expect(")")
            term = App(term, tuple(args))
        while self.at("@"):
            self.take()
            arg = self.atom()
            if self.at("(") and isinstance(arg, (Const, Var, Connective)):
                self.take()
                inner = [self.formula()]
                while self.at(","):
                    self.take()
                    inner.append(self.formula())
                self.expect(")")
                arg = App(arg, tuple(inner))
            term = App(term, (arg,))
        return term

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "op":
            if tok.text == "(":
                self.take()
                inner = self.formula()
                self.expect(")")
                return inner
            if tok.text == "[":
                self.take()
                items = []
                if not self.at("]"):
                    items.append(self.formula())
                    while self.at(","):
                        self.take()
                        items.append(self.formula())
                self.expect("]")
                return ListTerm(tuple(items))
            if tok.text == "{":
                return self.connective()
            self.error("expected a term")
        if tok.kind == "upper":
            self.take()
            return Var(tok.text)
        if tok.kind in _ATOM_KINDS:
            self.take()
            return Const(tok.text)
        self.error("expected a term")

    def connective(self) -> Connective:
        open_tok = self.take()
        name_tok = self.take()
        if name_tok.kind != "dollar":
            self.error("connective names start with '$' or '$$'", name_tok)
        indices, params = [], []
        if self.at("("):
            self.take()
            while True:
                tok = self.peek()
                if tok.kind == "index":
                    indices.append(self.take().text)
                elif tok.kind in ("dollar", "lower") and self.peek(1).text == ":=":
                    key = self.take().text
                    self.take()
                    params.append((key, self.formula()))
                else:
                    self.error("expected '#index' or 'key := value' in connective")
                if self.at(","):
                    self.take()
                    continue
                break
            self.expect(")")
        if not self.at("}"):
            tok = self.peek()
            shown = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise TptpSyntaxError(
                f"unbalanced '{{' opened at line {open_tok.line}, column {open_tok.column}: "
                f"expected '}}', found {shown}", tok.line, tok.column, tok.text)
        self.take()
        return Connective(name_tok.text, tuple(indices), tuple(params))


def parse_problem(text: str) -> Problem:
    return _Parser(text).problem()


def parse_formula(text: str) -> Term:
    p = _Parser(text)
    term = p.formula()
    if p.peek().kind != "eof":
        p.error("trailing input after formula")
    return term


def parse_type(text: str) -> TptpType:
    p = _Parser(text)
    t = p.type_expr()
    if p.peek().kind != "eof":
        p.error("trailing input after type")
    return t
