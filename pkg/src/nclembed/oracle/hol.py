"""Finite evaluation of classical HOL terms.

Values: ``$o`` is a bitset over the models of a batch, base types are carrier
indices, functions are one-argument Python callables.  Terms are compiled to
Python source once and cached; quantifiers over function types enumerate the
whole (budgeted) function space.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from ..errors import BudgetExceededError, OracleError
from ..holkit import HolProblem, infer_type
from ..syntax.ast import (
    BOOL, App, BaseType, Binary, Const, MapType, Not, Quant, Term, TptpType, Var,
    subterms,
)
from .models import ModelBatch


class _LazyCarrier:
    def __init__(self, build):
        self._build = build
        self._items = None

    def __iter__(self):
        if self._items is None:
            self._items = self._build()
        return iter(self._items)


class FiniteInterp:
    """Carriers for base types plus values for constants, over a batch of ``size`` models."""

    def __init__(self, size: int, carriers: dict, constants: dict | None = None,
                 types: dict | None = None, budget: int = 1 << 16):
        self.size = size
        self.M = (1 << size) - 1
        self.base = {k: list(v) for k, v in carriers.items()}
        self.constants = dict(constants or {})
        self.types = dict(types or {})
        self.budget = budget
        self._spaces = {}
        self._eq = {}

    # -- carriers
    def elements(self, t: TptpType) -> list:
        if t == BOOL:
            return [0, self.M]
        if isinstance(t, BaseType):
            if t.name not in self.base:
                raise OracleError(f"no carrier for type {t.name}")
            return self.base[t.name]
        if t not in self._spaces:
            self._spaces[t] = self._function_space(t)
        return self._spaces[t]

    def cardinality(self, t: TptpType) -> int:
        if t == BOOL:
            return 2
        if isinstance(t, BaseType):
            return len(self.elements(t))
        out = self.cardinality(t.apply(1))
        return out ** self.cardinality(t.args[0])

    def _function_space(self, t: MapType) -> list:
        count = self.cardinality(t)
        if count > self.budget:
            raise BudgetExceededError(f"function space of {t} has {count} elements "
                                      f"(budget {self.budget})")
        dom = self.elements(t.args[0])
        codomain = self.elements(t.apply(1))
        out = []
        for values in itertools.product(codomain, repeat=len(dom)):
            out.append(self.table(t.args[0], dict(zip(self.keys(t.args[0], dom), values))))
        return out

    def carrier(self, t: TptpType):
        return _LazyCarrier(lambda: self.elements(t))

    # -- graphs of functions
    def keys(self, t: TptpType, items) -> list:
        return [self.graph(x, t) for x in items]

    def graph(self, x, t: TptpType):
        """Hashable extension of ``x`` (itself for non-functions)."""
        if not isinstance(t, MapType):
            return x
        rest = t.apply(1)
        return tuple(self.graph(x(a), rest) for a in self.elements(t.args[0]))

    def table(self, arg: TptpType, mapping: dict):
        if isinstance(arg, BaseType) or arg == BOOL:
            if arg == BOOL:
                return lambda a, m=mapping: m[a]
            return tuple(mapping[a] for a in self.elements(arg)).__getitem__
        return lambda a, m=mapping, ty=arg: m[self.graph(a, ty)]

    def tabulate(self, x, t: TptpType):
        """A table-backed copy of function ``x`` plus its graph."""
        if not isinstance(t, MapType):
            return x, x
        rest = t.apply(1)
        pairs = [self.tabulate(x(a), rest) for a in self.elements(t.args[0])]
        key = tuple(k for k, _ in pairs)
        if isinstance(t.args[0], BaseType) and t.args[0] != BOOL:
            return key, tuple(v for _, v in pairs).__getitem__
        mapping = dict(zip(self.keys(t.args[0], self.elements(t.args[0])), (v for _, v in pairs)))
        return key, self.table(t.args[0], mapping)

    def equality(self, t: TptpType):
        if t in self._eq:
            return self._eq[t]
        M = self.M
        if t == BOOL:
            fn = lambda a, b: M ^ (a ^ b)
        elif isinstance(t, BaseType):
            fn = lambda a, b: M if a == b else 0
        else:
            sub = self.equality(t.apply(1))
            dom = t.args[0]

            def fn(a, b):
                acc = M
                for x in self.elements(dom):
                    acc &= sub(a(x), b(x))
                    if not acc:
                        break
                return acc
        self._eq[t] = fn
        return fn

    # -- memoized definitions
    def memoize(self, f, t: TptpType):
        """Cache ``f`` on the graphs of its leading first-order arguments."""
        if not isinstance(t, MapType) or not _first_order(t.args[0]):
            return f
        arg, rest = t.args[0], t.apply(1)
        cache = {}

        def memo(x):
            key, tab = self.tabulate(x, arg)
            hit = cache.get(key)
            if hit is None:
                hit = cache[key] = self.memoize(f(tab), rest)
            return hit
        return memo

    def define(self, symbol: str, t: TptpType, body: Term):
        self.types[symbol] = t
        self.constants[symbol] = self.memoize(eval_hol(self, body), t)


def _first_order(t: TptpType) -> bool:
    if not isinstance(t, MapType):
        return True
    return all(not isinstance(a, MapType) for a in t.args) and not isinstance(t.result, MapType)


def _size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


class _Compiler:
    def __init__(self, types: dict):
        self.types = types
        self.consts = {}
        self.carriers = {}
        self.eqs = {}
        self.free = {}
        self.counter = itertools.count()

    def ident(self, table: dict, key, prefix: str) -> str:
        if key not in table:
            table[key] = f"{prefix}{len(table)}"
        return table[key]

    def tmp(self) -> str:
        return f"t{next(self.counter)}"

    def var(self, name: str) -> str:
        return "v_" + name

    def expr(self, t: Term, local: dict) -> str:
        if isinstance(t, Var):
            if t.name not in local:
                raise OracleError(f"unbound variable {t.name}")
            return self.var(t.name)
        if isinstance(t, Const):
            if t.name == "$true":
                return "M"
            if t.name == "$false":
                return "0"
            return self.ident(self.consts, t.name, "c")
        if isinstance(t, App):
            out = self.expr(t.head, local)
            for a in t.args:
                out = f"{out}({self.expr(a, local)})"
            return out
        if isinstance(t, Not):
            return f"(M ^ {self.expr(t.arg, local)})"
        if isinstance(t, Binary):
            return self.binary(t, local)
        if isinstance(t, Quant):
            inner = dict(local)
            for v in t.vars:
                inner[v.name] = v.type
            body = self.expr(t.body, inner)
            if t.binder == "^":
                for v in reversed(t.vars):
                    body = f"(lambda {self.var(v.name)}: {body})"
                return body
            loops = " ".join(f"for {self.var(v.name)} in {self.ident(self.carriers, v.type, 'k')}"
                             for v in t.vars)
            helper = "_ALL" if t.binder == "!" else "_ANY"
            return f"{helper}({body} {loops})"
        raise OracleError(f"cannot evaluate {t!r}")

    def binary(self, t: Binary, local: dict) -> str:
        op = t.op
        if op in ("=", "!="):
            ty = infer_type(t.left, self.types, local)
            a, b = self.expr(t.left, local), self.expr(t.right, local)
            if ty == BOOL:
                core = f"(M ^ ({a} ^ {b}))"
            elif isinstance(ty, BaseType):
                core = f"(M if {a} == {b} else 0)"
            else:
                core = f"{self.ident(self.eqs, ty, 'e')}({a}, {b})"
            return core if op == "=" else f"(M ^ {core})"
        left, right = t.left, t.right
        if op == "<=":
            op, left, right = "=>", right, left
        a, b = self.expr(left, local), self.expr(right, local)
        left_first = _size(left) <= _size(right)
        x = self.tmp()
        if op in ("&", "~&"):
            first, second = (a, b) if left_first else (b, a)
            core = f"(0 if ({x} := {first}) == 0 else ({x} & {second}))"
            return core if op == "&" else f"(M ^ {core})"
        if op in ("|", "~|"):
            first, second = (a, b) if left_first else (b, a)
            core = f"(M if ({x} := {first}) == M else ({x} | {second}))"
            return core if op == "|" else f"(M ^ {core})"
        if op == "=>":
            if left_first:
                return f"(M if ({x} := {a}) == 0 else ((M ^ {x}) | {b}))"
            return f"(M if ({x} := {b}) == M else ((M ^ {a}) | {x}))"
        if op == "<=>":
            return f"(M ^ ({a} ^ {b}))"
        if op == "<~>":
            return f"({a} ^ {b})"
        raise OracleError(f"operator {op}")


@lru_cache(maxsize=4096)
def _compile(term: Term, types_key: tuple, free: tuple):
    types = dict(types_key)
    comp = _Compiler(types)
    local = dict(free)
    body = comp.expr(term, local)
    lines = ["def _factory(M, C, K, EQ, ENV, _ALL, _ANY):"]
    for name, ident in comp.consts.items():
        lines.append(f"    {ident} = C[{name!r}]")
    for ty, ident in comp.carriers.items():
        lines.append(f"    {ident} = K({ident}_t)")
    for ty, ident in comp.eqs.items():
        lines.append(f"    {ident} = EQ({ident}_t)")
    for name, _ in free:
        lines.append(f"    {comp.var(name)} = ENV[{name!r}]")
    lines.append(f"    return {body}")
    namespace = {f"{i}_t": ty for ty, i in comp.carriers.items()}
    namespace.update({f"{i}_t": ty for ty, i in comp.eqs.items()})
    exec(compile("\n".join(lines), "<hol>", "exec"), namespace)
    return namespace["_factory"]


def eval_hol(interp: FiniteInterp, term: Term, env: dict | None = None,
             env_types: dict | None = None):
    """Value of ``term``; free variables take values from ``env`` (types in ``env_types``)."""
    env = env or {}
    env_types = env_types or {}
    used = {c.name for c in subterms(term) if isinstance(c, Const)}
    types_key = tuple(sorted((k, v) for k, v in interp.types.items() if k in used))
    free = tuple(sorted((k, env_types[k]) for k in env))
    factory = _compile(term, types_key, free)
    M = interp.M

    def _all(values):
        acc = M
        for v in values:
            acc &= v
            if not acc:
                return 0
        return acc

    def _any(values):
        acc = 0
        for v in values:
            acc |= v
            if acc == M:
                return M
        return acc

    return factory(M, interp.constants, interp.carrier, interp.equality, env, _all, _any)


# ---------------------------------------------------------------- interpretations of batches

def _nested(dims: list, leaf):
    """Curried table over index ranges ``dims``; ``leaf(indices)`` gives the values."""
    def build(prefix):
        if len(prefix) == len(dims):
            return leaf(tuple(prefix))
        return tuple(build(prefix + [i]) for i in range(dims[len(prefix)])).__getitem__
    return build([])


def interp_from_batch(batch: ModelBatch, problem: HolProblem,
                      budget: int = 1 << 16) -> FiniteInterp:
    """Interpret the symbols of an embedded problem in the models of ``batch``."""
    n = batch.worlds
    origin = problem.origin
    carriers = {}
    for t in problem.base_types():
        role = origin.get(t, ())
        if role[:1] == ("world",):
            carriers[t] = range(n)
        elif role[:1] == ("domain",):
            carriers[t] = range(batch.domains.get(role[1], 1))
        else:
            carriers[t] = range(1)
    carriers.setdefault("$i", range(batch.domains.get("$i", 1)))
    interp = FiniteInterp(batch.size, carriers, budget=budget)
    sig = problem.signature()
    interp.types.update(sig)
    size = lambda ty: len(interp.elements(ty))
    defined = set(problem.definition_map())
    for sym, ty in sig.items():
        if sym in defined:
            continue
        role = origin.get(sym)
        if role is None:
            raise OracleError(f"no interpretation for {sym}")
        kind = role[0]
        args = list(ty.args) if isinstance(ty, MapType) else []
        dims = [size(a) for a in args]
        if kind == "relation":
            value = _nested(dims, lambda k, i=role[1]: batch.entry(("R", i) + k))
        elif kind == "predicate":
            value = _nested(dims, lambda k, p=role[1]: batch.entry(("P", p, k[:-1], k[-1])))
        elif kind == "exists":
            value = _nested(dims, lambda k, t=role[1]: batch.entry(("E", t) + k))
        elif kind == "betterness":
            value = _nested(dims, lambda k: batch.entry(("B",) + k))
        elif kind == "function":
            table = batch.functions[role[1]]
            value = _nested(dims, lambda k, tab=table: tab[k]) if dims else table[()]
        elif kind == "nominal":
            value = batch.nominals[role[1]]
        elif kind == "actual":
            value = 0
        elif kind == "ob":
            value = _ob_function(interp, batch)
        else:
            raise OracleError(f"unknown symbol role {kind} for {sym}")
        interp.constants[sym] = value
    for d in problem.definitions:
        sym = d.content.left.name
        interp.define(sym, sig[sym], d.content.right)
    return interp


def _ob_function(interp: FiniteInterp, batch: ModelBatch):
    n, M = batch.worlds, interp.M

    def extension_bits(x):
        vals = [x(w) for w in range(n)]
        out = []
        for s in range(1 << n):
            acc = M
            for w, v in enumerate(vals):
                acc &= v if s >> w & 1 else M ^ v
            out.append(acc)
        return out

    def ob(x):
        ex = extension_bits(x)

        def given(y):
            ey = extension_bits(y)
            acc = 0
            for s in range(1 << n):
                if ex[s]:
                    for t in range(1 << n):
                        acc |= ex[s] & ey[t] & batch.entry(("O", s, t))
            return acc
        return given
    return ob
