"""AST shared by source (TFF/TXF/THF + non-classical) and target (THF) problems.

One term language covers both: first-order applications ``f(a, b)`` and
higher-order applications ``f @ a @ b`` become the same :class:`App` node,
and a non-classical connective ``{$box(#i)}`` is an ordinary head term.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

# ---------------------------------------------------------------- types


@dataclass(frozen=True, slots=True)
class BaseType:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class MapType:
    """``args -> result``.  Kept flat: the result is never itself a MapType."""

    args: tuple
    result: "TptpType"

    def __post_init__(self):
        if not self.args:
            raise ValueError("mapping type needs at least one argument")
        if isinstance(self.result, MapType):
            object.__setattr__(self, "args", tuple(self.args) + self.result.args)
            object.__setattr__(self, "result", self.result.result)
        else:
            object.__setattr__(self, "args", tuple(self.args))
        if self.result == TTYPE:
            raise ValueError("mapping type cannot return $tType")

    def apply(self, n: int) -> "TptpType":
        """Type left after supplying ``n`` arguments."""
        if n > len(self.args):
            raise ValueError("too many arguments")
        if n == len(self.args):
            return self.result
        return MapType(self.args[n:], self.result)


TptpType = Union[BaseType, MapType]

BOOL = BaseType("$o")
INDIVIDUAL = BaseType("$i")
TTYPE = BaseType("$tType")


def map_type(*types: TptpType) -> TptpType:
    """``map_type(a, b, c)`` is ``a > b > c``."""
    if len(types) == 1:
        return types[0]
    return MapType(tuple(types[:-1]), types[-1])


def result_type(t: TptpType) -> TptpType:
    return t.result if isinstance(t, MapType) else t


def arity(t: TptpType) -> int:
    return len(t.args) if isinstance(t, MapType) else 0


# ---------------------------------------------------------------- terms


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Const:
    """Constants, functors, defined words (``$true``), and ``#index`` tokens."""

    name: str


@dataclass(frozen=True, slots=True)
class Connective:
    """A non-classical connective ``{name(#idx, ..., key := value, ...)}``."""

    name: str
    indices: tuple = ()
    params: tuple = ()

    def param(self, key: str):
        for k, v in self.params:
            if k == key:
                return v
        return None


@dataclass(frozen=True, slots=True)
class App:
    head: "Term"
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError("application without arguments")
        if isinstance(self.head, App):
            object.__setattr__(self, "args", self.head.args + tuple(self.args))
            object.__setattr__(self, "head", self.head.head)
        else:
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True, slots=True)
class Not:
    arg: "Term"


BINARY_CONNECTIVES = ("&", "|", "=>", "<=", "<=>", "<~>", "~|", "~&")
EQUALITY_OPS = ("=", "!=", "==")


@dataclass(frozen=True, slots=True)
class Binary:
    op: str
    left: "Term"
    right: "Term"


@dataclass(frozen=True, slots=True)
class TypedVar:
    name: str
    type: TptpType | None = None


@dataclass(frozen=True, slots=True)
class Quant:
    """``!`` (forall), ``?`` (exists) or ``^`` (lambda)."""

    binder: str
    vars: tuple
    body: "Term"

    def __post_init__(self):
        if not self.vars:
            raise ValueError("binder without variables")
        object.__setattr__(self, "vars", tuple(self.vars))


@dataclass(frozen=True, slots=True)
class ListTerm:
    items: tuple = ()


Term = Union[Var, Const, Connective, App, Not, Binary, Quant, ListTerm]

TRUE = Const("$true")
FALSE = Const("$false")


def app(head: Term, *args: Term) -> Term:
    return App(head, args) if args else head


def lam(vars, body: Term) -> Term:
    return Quant("^", tuple(TypedVar(n, t) for n, t in vars), body)


def forall(vars, body: Term) -> Term:
    return Quant("!", tuple(TypedVar(n, t) for n, t in vars), body)


def exists(vars, body: Term) -> Term:
    return Quant("?", tuple(TypedVar(n, t) for n, t in vars), body)


def conj(*parts: Term) -> Term:
    out = parts[0]
    for p in parts[1:]:
        out = Binary("&", out, p)
    return out


def disj(*parts: Term) -> Term:
    out = parts[0]
    for p in parts[1:]:
        out = Binary("|", out, p)
    return out


def implies(a: Term, b: Term) -> Term:
    return Binary("=>", a, b)


def iff(a: Term, b: Term) -> Term:
    return Binary("<=>", a, b)


def equals(a: Term, b: Term) -> Term:
    return Binary("=", a, b)


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order traversal, including connective parameter values."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, App):
            stack.extend(reversed(s.args))
            stack.append(s.head)
        elif isinstance(s, Not):
            stack.append(s.arg)
        elif isinstance(s, Binary):
            stack.append(s.right)
            stack.append(s.left)
        elif isinstance(s, Quant):
            stack.append(s.body)
        elif isinstance(s, ListTerm):
            stack.extend(reversed(s.items))
        elif isinstance(s, Connective):
            stack.extend(reversed([v for _, v in s.params]))


# ---------------------------------------------------------------- problems


@dataclass(frozen=True, slots=True)
class TypeDecl:
    symbol: str
    type: TptpType


@dataclass(frozen=True, slots=True)
class AnnotatedFormula:
    language: str
    name: str
    role: str
    content: Union[Term, TypeDecl]


@dataclass(frozen=True, slots=True)
class Include:
    path: str
    names: tuple | None = None


@dataclass(frozen=True)
class Problem:
    entries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def formulas(self) -> tuple:
        return tuple(e for e in self.entries if isinstance(e, AnnotatedFormula))

    @property
    def includes(self) -> tuple:
        return tuple(e for e in self.entries if isinstance(e, Include))
