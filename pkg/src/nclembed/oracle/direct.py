"""Possible-worlds semantics evaluated directly on source formulas.

Independent of the embedding: it walks the source AST and computes, for every
world, the bitset of models (within a batch) where the formula is true.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import NotPropositionalError, OracleError
from ..logicspec import (
    LogicSpec, ModalConfig, lookup_embedding, validate_ddl_config, validate_modal_config, validate_pal_config,
)
from ..syntax.ast import App, Binary, Connective, Const, Not, Quant, Term, Var
from ..syntax.signature import is_symbol, variable_type
from .models import FiniteModel, ModelBatch


@dataclass(frozen=True)
class OracleLogic:
    kind: str                      # modal | hybrid | pal | ddl
    modal: ModalConfig | None = None
    system: str | None = None      # aqvistE | carmoJones

    @property
    def propositional(self) -> bool:
        return self.kind in ("pal", "ddl")


def oracle_logic(spec: LogicSpec) -> OracleLogic:
    if spec.logic_name in ("$modal", "$$hybrid"):
        kind = "modal" if spec.logic_name == "$modal" else "hybrid"
        return OracleLogic(kind, modal=validate_modal_config(spec))
    if spec.logic_name == "$$pal":
        validate_pal_config(spec)
        return OracleLogic("pal")
    if spec.logic_name == "$$ddl":
        return OracleLogic("ddl", system=validate_ddl_config(spec).system)
    lookup_embedding(spec.logic_name)
    raise OracleError(f"no direct semantics for {spec.logic_name}")


def _index(c: Connective) -> str:
    return c.indices[0][1:] if c.indices else ""


class DirectEvaluator:
    def __init__(self, batch: ModelBatch, logic: OracleLogic):
        self.b = batch
        self.logic = logic
        self.n = batch.worlds
        self.M = batch.full
        self._cache = {}
        self._closures = {}

    # -- helpers
    def const(self, value: int) -> tuple:
        return (value,) * self.n

    def rel(self, idx, u, v) -> int:
        return self.b.entry(("R", idx, u, v))

    def semantics(self, type_name: str) -> str:
        if self.logic.modal is None:
            return "constant"
        return self.logic.modal.quantification_for(type_name)

    def term(self, t: Term, env: dict) -> int:
        if isinstance(t, Var):
            if t.name not in env:
                raise OracleError(f"unbound variable {t.name}")
            return env[t.name]
        if isinstance(t, Const):
            return self.b.functions[t.name][()]
        if isinstance(t, App) and isinstance(t.head, Const):
            args = tuple(self.term(a, env) for a in t.args)
            return self.b.functions[t.head.name][args]
        raise OracleError(f"unsupported term {t!r}")

    # -- formulas
    def vec(self, f: Term, env: dict | None = None, dom: tuple | None = None) -> tuple:
        """Truth value of ``f`` at each world; ``dom`` is the PAL surviving-world set."""
        env = env or {}
        key = (f, tuple(sorted(env.items())), dom)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self._vec(f, env, dom)
        return hit

    def _vec(self, f, env, dom):
        M, n = self.M, self.n
        if isinstance(f, Const):
            if f.name == "$true":
                return self.const(M)
            if f.name == "$false":
                return self.const(0)
            if not is_symbol(f.name):
                raise OracleError(f"{f.name} is not a formula")
            return tuple(self.b.entry(("P", f.name, (), w)) for w in range(n))
        if isinstance(f, Var):
            if self.logic.kind == "hybrid" and f.name in env:
                return tuple(M if w == env[f.name] else 0 for w in range(n))
            raise OracleError(f"variable {f.name} in formula position")
        if isinstance(f, Not):
            return tuple(M ^ x for x in self.vec(f.arg, env, dom))
        if isinstance(f, Binary):
            return self._binary(f, env, dom)
        if isinstance(f, Quant):
            return self._quant(f, env, dom)
        if isinstance(f, App) and isinstance(f.head, Connective):
            return self._connective(f.head, f.args, env, dom)
        if isinstance(f, App) and isinstance(f.head, Const):
            if self.logic.propositional:
                raise NotPropositionalError(f"{f.head.name} has arguments")
            args = tuple(self.term(a, env) for a in f.args)
            return tuple(self.b.entry(("P", f.head.name, args, w)) for w in range(n))
        raise OracleError(f"cannot evaluate {f!r}")

    def _binary(self, f, env, dom):
        M = self.M
        if f.op in ("=", "!="):
            if self.logic.propositional:
                raise NotPropositionalError("equality in a propositional logic")
            same = self.term(f.left, env) == self.term(f.right, env)
            return self.const(M if same == (f.op == "=") else 0)
        a, b = self.vec(f.left, env, dom), self.vec(f.right, env, dom)
        op = {
            "&": lambda x, y: x & y,
            "|": lambda x, y: x | y,
            "=>": lambda x, y: (M ^ x) | y,
            "<=": lambda x, y: (M ^ y) | x,
            "<=>": lambda x, y: M ^ (x ^ y),
            "<~>": lambda x, y: x ^ y,
            "~|": lambda x, y: M ^ (x | y),
            "~&": lambda x, y: M ^ (x & y),
        }.get(f.op)
        if op is None:
            raise OracleError(f"operator {f.op}")
        return tuple(op(x, y) for x, y in zip(a, b))

    def _quant(self, f, env, dom):
        if self.logic.propositional:
            raise NotPropositionalError("quantifier in a propositional logic")
        if f.binder == "^":
            raise OracleError("lambda in a modal formula")
        v, rest = f.vars[0], f.vars[1:]
        body = Quant(f.binder, rest, f.body) if rest else f.body
        tname = variable_type(v).name
        size = self.b.domains[tname]
        sem = self.semantics(tname)
        M = self.M
        out = []
        for w in range(self.n):
            acc = M if f.binder == "!" else 0
            for d in range(size):
                val = self.vec(body, {**env, v.name: d}, dom)[w]
                ex = M if sem == "constant" else self.b.entry(("E", tname, d, w))
                if f.binder == "!":
                    acc &= (M ^ ex) | val
                else:
                    acc |= ex & val
            out.append(acc)
        return tuple(out)

    def _connective(self, c, args, env, dom):
        M, n = self.M, self.n
        kind = self.logic.kind
        name = c.name
        if name in ("$box", "$dia") and kind in ("modal", "hybrid"):
            idx = _index(c)
            phi = self.vec(args[0], env, dom)
            if name == "$box":
                return tuple(self._all((M ^ self.rel(idx, w, v)) | phi[v] for v in range(n))
                             for w in range(n))
            return tuple(self._any(self.rel(idx, w, v) & phi[v] for v in range(n))
                         for w in range(n))
        if kind == "hybrid":
            if name == "$$nominal":
                at = self.b.nominals[args[0].name]
                return tuple(M if w == at else 0 for w in range(n))
            if name == "$$shift":
                s = c.indices[0][1:]
                at = env[s] if s in env else self.b.nominals[s]
                return self.const(self.vec(args[0], env, dom)[at])
            if name == "$$bind":
                x = c.indices[0][1:]
                return tuple(self.vec(args[0], {**env, x: w}, dom)[w] for w in range(n))
        if kind == "pal":
            return self._pal(c, args, dom)
        if kind == "ddl" and name == "$$obl":
            return self._obl(self.vec(args[0], env, dom), self.vec(args[1], env, dom))
        raise OracleError(f"connective {name} outside the {kind} fragment")

    def _all(self, parts):
        acc = self.M
        for p in parts:
            acc &= p
            if not acc:
                break
        return acc

    def _any(self, parts):
        acc = 0
        for p in parts:
            acc |= p
            if acc == self.M:
                break
        return acc

    # -- PAL: announcements restrict the model; common knowledge by closure fixpoint
    def _pal(self, c, args, dom):
        M, n = self.M, self.n
        dom = dom if dom is not None else self.const(M)
        if c.name == "$$knows":
            agent = c.indices[0][1:]
            phi = self.vec(args[0], {}, dom)
            return tuple(self._all((M ^ (dom[v] & self.rel(agent, w, v))) | phi[v]
                                   for v in range(n)) for w in range(n))
        if c.name == "$$common":
            group = sorted({i.name.lstrip("#") for i in c.param("$$group").items})
            reach = self._closure(tuple(group), dom)
            phi = self.vec(args[0], {}, dom)
            return tuple(self._all((M ^ reach[w][v]) | phi[v] for v in range(n))
                         for w in range(n))
        if c.name == "$$announce":
            psi = self.vec(c.param("$$formula"), {}, dom)
            restricted = tuple(d & p for d, p in zip(dom, psi))
            phi = self.vec(args[0], {}, restricted)
            return tuple((M ^ p) | x for p, x in zip(psi, phi))
        raise OracleError(f"connective {c.name} outside the pal fragment")

    def _closure(self, group, dom):
        key = (group, dom)
        if key in self._closures:
            return self._closures[key]
        n = self.n
        step = [[dom[u] & dom[v] & self._any(self.rel(a, u, v) for a in group)
                 for v in range(n)] for u in range(n)]
        reach = [row[:] for row in step]
        changed = True
        while changed:
            changed = False
            for u in range(n):
                for v in range(n):
                    new = reach[u][v]
                    for z in range(n):
                        new |= reach[u][z] & step[z][v]
                    if new != reach[u][v]:
                        reach[u][v] = new
                        changed = True
        self._closures[key] = reach
        return reach

    # -- DDL
    def _obl(self, psi, phi):
        M, n = self.M, self.n
        if self.logic.system == "aqvistE":
            best = [phi[v] & self._all((M ^ phi[u]) | self.b.entry(("B", v, u)) for u in range(n))
                    for v in range(n)]
            return self.const(self._all((M ^ best[v]) | psi[v] for v in range(n)))
        value = 0
        ext_phi = [self._extension(phi, x) for x in range(1 << n)]
        ext_psi = [self._extension(psi, y) for y in range(1 << n)]
        for x in range(1 << n):
            if not ext_phi[x]:
                continue
            for y in range(1 << n):
                value |= ext_phi[x] & ext_psi[y] & self.b.entry(("O", x, y))
        return self.const(value)

    def _extension(self, vec, worlds: int) -> int:
        """Models in which ``vec`` is true exactly at the worlds in the bitmask."""
        M = self.M
        acc = M
        for w, val in enumerate(vec):
            acc &= val if worlds >> w & 1 else M ^ val
        return acc


def eval_direct(model: FiniteModel, world: int, f: Term, logic: OracleLogic,
                env: dict | None = None) -> bool:
    """Truth of ``f`` at ``world`` of a single model."""
    ev = DirectEvaluator(model.as_batch(), logic)
    return bool(ev.vec(f, env or {})[world])
