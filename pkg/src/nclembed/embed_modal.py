"""Shallow embedding of quantified multi-modal logics (``$modal``) and their
hybrid extension (``$$hybrid``) into classical HOL.

Worlds are the type ``mworld``; a modal proposition becomes a predicate on
worlds (``mworld > $o``).  Axiom schemes become conditions on the
accessibility relations; quantification semantics is handled per type with an
exists-in-world predicate ``meiw_<type>``.
"""
from __future__ import annotations

import re

from .errors import (
    HolTypeError, MalformedConnectiveError, NotPropositionalError, UnsupportedConnectiveError, UnsupportedParameterError,
)
from .holkit import ProblemBuilder, all_var_names, fresh_name, rename_reserved_symbols
from .logicspec import LogicSpec, ModalConfig, validate_modal_config
from .syntax.ast import (
    BOOL, FALSE, TRUE, TTYPE, App, BaseType, Binary, Connective, Const, MapType, Not,
    Problem, Quant, Term, TptpType, Var, app, conj, equals, exists, forall,
    implies, lam,
)
from .syntax.signature import formula_items, infer_signature, is_symbol, variable_type

WORLD = BaseType("mworld")
PROP = MapType((WORLD,), BOOL)

MODAL_CONNECTIVES = ("$box", "$dia")
HYBRID_CONNECTIVES = ("$$nominal", "$$shift", "$$bind")
GLOBAL_ROLES = ("axiom", "lemma", "theorem", "definition", "assumption", "corollary")


def _ident(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_]", "_", text)


def relation_name(index: str) -> str:
    return "mrel" if not index else f"mrel_{_ident(index)}"


def box_name(index: str) -> str:
    return "mbox" if not index else f"mbox_{_ident(index)}"


def dia_name(index: str) -> str:
    return "mdia" if not index else f"mdia_{_ident(index)}"


def _rel(index, u, v):
    return app(Const(relation_name(index)), u, v)


def frame_condition(scheme: str, relation: str) -> Term | None:
    """Closed frame condition on ``relation`` for an axiom scheme (None for K)."""
    r = Const(relation)
    U, V, W, Z = Var("U"), Var("V"), Var("W"), Var("Z")
    if scheme == "K":
        return None
    if scheme == "T":
        return forall([("W", WORLD)], app(r, W, W))
    if scheme == "B":
        return forall([("W", WORLD), ("V", WORLD)], implies(app(r, W, V), app(r, V, W)))
    if scheme == "D":
        return forall([("W", WORLD)], exists([("V", WORLD)], app(r, W, V)))
    if scheme == "4":
        return forall([("W", WORLD), ("V", WORLD), ("U", WORLD)],
                      implies(conj(app(r, W, V), app(r, V, U)), app(r, W, U)))
    if scheme == "5":
        return forall([("U", WORLD), ("V", WORLD), ("W", WORLD)],
                      implies(conj(app(r, U, V), app(r, U, W)), app(r, V, W)))
    if scheme == "CD":
        return forall([("U", WORLD), ("V", WORLD), ("W", WORLD)],
                      implies(conj(app(r, U, V), app(r, U, W)), equals(V, W)))
    if scheme == "C4":
        return forall([("U", WORLD), ("V", WORLD)],
                      implies(app(r, U, V),
                              exists([("Z", WORLD)], conj(app(r, U, Z), app(r, Z, V)))))
    if scheme == "universal":
        return forall([("U", WORLD), ("V", WORLD)], app(r, U, V))
    raise ValueError(f"unknown axiom scheme {scheme}")


_CONDITION_NAMES = {"T": "reflexive", "B": "symmetric", "D": "serial", "4": "transitive",
                    "5": "euclidean", "CD": "functional", "C4": "dense",
                    "universal": "universal"}
_SCHEME_ORDER = ("T", "B", "D", "4", "5", "CD", "C4", "universal")


def frame_axioms(index: str, schemes) -> list:
    """``(name, axiom)`` pairs, one per non-K scheme, over the index's relation."""
    rel = relation_name(index)
    return [(f"{rel}_{_CONDITION_NAMES[s]}", frame_condition(s, rel))
            for s in _SCHEME_ORDER if s in schemes]


def lifted_connective_definitions(prop: TptpType, world_args) -> dict:
    """Pointwise classical connectives on lifted propositions.

    ``world_args`` lists the (name, type) parameters a proposition is applied
    to: ``[("W", mworld)]`` for modal propositions, domain + world for PAL.
    """
    params = [n for n, _ in world_args]

    def at(a):
        return app(Var(a), *(Var(p) for p in params))

    def pointwise(names, body):
        return lam([(n, prop) for n in names] + list(world_args), body)

    return {
        "mnot": pointwise(["A"], Not(at("A"))),
        "mand": pointwise(["A", "B"], Binary("&", at("A"), at("B"))),
        "mor": pointwise(["A", "B"], Binary("|", at("A"), at("B"))),
        "mimpl": pointwise(["A", "B"], Binary("=>", at("A"), at("B"))),
        "mequiv": pointwise(["A", "B"], Binary("<=>", at("A"), at("B"))),
    }


def connective_types(prop: TptpType) -> dict:
    return {"mnot": MapType((prop,), prop), "mand": MapType((prop, prop), prop),
            "mor": MapType((prop, prop), prop), "mimpl": MapType((prop, prop), prop),
            "mequiv": MapType((prop, prop), prop)}


def lift_binary(op: str, a: Term, b: Term) -> Term:
    def c(name):
        return Const(name)
    if op == "&":
        return app(c("mand"), a, b)
    if op == "|":
        return app(c("mor"), a, b)
    if op == "=>":
        return app(c("mimpl"), a, b)
    if op == "<=":
        return app(c("mimpl"), b, a)
    if op == "<=>":
        return app(c("mequiv"), a, b)
    if op == "<~>":
        return app(c("mnot"), app(c("mequiv"), a, b))
    if op == "~|":
        return app(c("mnot"), app(c("mor"), a, b))
    if op == "~&":
        return app(c("mnot"), app(c("mand"), a, b))
    raise UnsupportedConnectiveError(f"binary connective {op} cannot be lifted")


class PropositionalLifter:
    """Lifts propositional formulas over ``world_args``; subclasses handle connectives."""

    logic = ""

    def __init__(self, world_args):
        self.world_args = list(world_args)

    def constant(self, value: Term) -> Term:
        return lam(self.world_args, value)

    def atom(self, name: str) -> Term:
        return Const(name)

    def connective(self, c: Connective, args) -> Term:
        raise UnsupportedConnectiveError(f"connective {{{c.name}}} is not part of {self.logic}")

    def convert(self, t: Term) -> Term:
        if isinstance(t, Const):
            if t.name == "$true":
                return self.constant(TRUE)
            if t.name == "$false":
                return self.constant(FALSE)
            if is_symbol(t.name):
                return self.atom(t.name)
        elif isinstance(t, Not):
            return app(Const("mnot"), self.convert(t.arg))
        elif isinstance(t, Binary) and t.op not in ("=", "!=", "=="):
            return lift_binary(t.op, self.convert(t.left), self.convert(t.right))
        elif isinstance(t, App) and isinstance(t.head, Connective):
            return self.connective(t.head, t.args)
        elif isinstance(t, Connective):
            raise MalformedConnectiveError(f"connective {t.name} must be applied to arguments")
        raise NotPropositionalError(f"{self.logic} is propositional; cannot embed {t!r}")


def check_propositional(problem: Problem, logic: str):
    """Every user symbol must be a propositional atom; returns them in order."""
    sig = infer_signature(problem)
    if sig.types:
        raise NotPropositionalError(f"{logic} does not allow user types ({sig.types[0]})")
    for sym, t in sig.symbols.items():
        if t != BOOL:
            raise NotPropositionalError(f"{logic} symbol {sym} is not a proposition")
    return list(sig.symbols)


def type_suffixes(types) -> dict:
    out, used = {}, set()
    for t in types:
        base = _ident(t[1:] if t.startswith("$") else t)
        name = fresh_name(base, used)
        used.add(name)
        out[t] = name
    return out


def lift_type(t: TptpType, extra=(WORLD,)) -> TptpType:
    """Give ``$o``-resulting symbol types their world argument(s)."""
    if isinstance(t, MapType):
        if BOOL in t.args:
            raise HolTypeError("symbols with $o arguments are not supported")
        if t.result == BOOL:
            return MapType(t.args + tuple(extra), BOOL)
        return t
    if t == BOOL:
        return MapType(tuple(extra), BOOL)
    return t


class _ModalTranslator:
    def __init__(self, problem: Problem, config: ModalConfig, hybrid: bool):
        self.problem = problem
        self.config = config
        self.hybrid = hybrid
        self.indices: list = []
        self.quantified_types: list = []
        self.nominals: list = []
        user_vars = set()
        for f in formula_items(problem):
            user_vars |= all_var_names(f.content)
        self.world_var = fresh_name("W", user_vars)

    # -- discovery
    def scan(self, t: Term, bound_worlds=frozenset()):
        if isinstance(t, App) and isinstance(t.head, Connective):
            c = t.head
            self.check_connective(c)
            if c.name in MODAL_CONNECTIVES:
                idx = self.index_of(c)
                if idx not in self.indices:
                    self.indices.append(idx)
            elif c.name == "$$nominal":
                if len(t.args) != 1 or not isinstance(t.args[0], Const):
                    raise MalformedConnectiveError("{$$nominal} takes one nominal symbol")
                self.add_nominal(t.args[0].name)
            elif c.name == "$$shift":
                target = self.single_index(c)
                if target not in bound_worlds:
                    self.add_nominal(target)
            elif c.name == "$$bind":
                bound_worlds = bound_worlds | {self.single_index(c)}
            for a in t.args:
                self.scan(a, bound_worlds)
            return
        if isinstance(t, Connective):
            self.check_connective(t)
            raise MalformedConnectiveError(f"connective {t.name} must be applied to arguments")
        if isinstance(t, Quant):
            if t.binder == "^":
                raise UnsupportedConnectiveError("lambda abstraction in a modal formula")
            for v in t.vars:
                name = variable_type(v)
                if not isinstance(name, BaseType) or name in (BOOL, TTYPE):
                    raise UnsupportedParameterError(
                        f"quantification over {name} is not supported")
                if name.name not in self.quantified_types:
                    self.quantified_types.append(name.name)
            self.scan(t.body, bound_worlds - {v.name for v in t.vars})
        elif isinstance(t, App):
            for a in t.args:
                self.scan(a, bound_worlds)
        elif isinstance(t, Not):
            self.scan(t.arg, bound_worlds)
        elif isinstance(t, Binary):
            self.scan(t.left, bound_worlds)
            self.scan(t.right, bound_worlds)

    def check_connective(self, c: Connective):
        allowed = MODAL_CONNECTIVES + (HYBRID_CONNECTIVES if self.hybrid else ())
        if c.name not in allowed:
            logic = "$$hybrid" if self.hybrid else "$modal"
            raise UnsupportedConnectiveError(f"connective {{{c.name}}} is not part of {logic}")
        if c.params:
            raise MalformedConnectiveError(f"{{{c.name}}} takes no key := value arguments")

    def index_of(self, c: Connective) -> str:
        if len(c.indices) > 1:
            raise MalformedConnectiveError(f"{{{c.name}}} takes at most one index")
        return c.indices[0][1:] if c.indices else ""

    def single_index(self, c: Connective) -> str:
        if len(c.indices) != 1:
            raise MalformedConnectiveError(f"{{{c.name}}} needs exactly one #index")
        return c.indices[0][1:]

    def add_nominal(self, name: str):
        if name not in self.nominals:
            self.nominals.append(name)

    # -- translation
    def world_lambda(self, body_at) -> Term:
        w = self.world_var
        return lam([(w, WORLD)], body_at(Var(w)))

    def convert(self, t: Term, env: dict) -> Term:
        """``env`` maps in-scope variable names to ``"world"`` or their type."""
        if isinstance(t, Const):
            if t.name == "$true":
                return self.world_lambda(lambda w: TRUE)
            if t.name == "$false":
                return self.world_lambda(lambda w: FALSE)
            return t
        if isinstance(t, Var):
            if env.get(t.name) == "world":
                return self.world_lambda(lambda w: equals(w, t))
            raise UnsupportedConnectiveError(f"variable {t.name} used as a formula")
        if isinstance(t, Not):
            return app(Const("mnot"), self.convert(t.arg, env))
        if isinstance(t, Binary):
            if t.op in ("=", "!="):
                left, right = self.term(t.left, env), self.term(t.right, env)
                return self.world_lambda(lambda w: Binary(t.op, left, right))
            if t.op == "==":
                raise UnsupportedConnectiveError("== is only allowed in logic specifications")
            return lift_binary(t.op, self.convert(t.left, env), self.convert(t.right, env))
        if isinstance(t, Quant):
            inner = dict(env)
            for v in t.vars:
                inner[v.name] = variable_type(v)
            body = self.convert(t.body, inner)
            for v in reversed(t.vars):
                vt = variable_type(v)
                q = "mforall" if t.binder == "!" else "mexists"
                body = app(Const(f"{q}_{self.suffix[vt.name]}"), lam([(v.name, vt)], body))
            return body
        if isinstance(t, App):
            if isinstance(t.head, Connective):
                return self.convert_connective(t.head, t.args, env)
            if isinstance(t.head, Const):
                return App(t.head, tuple(self.term(a, env) for a in t.args))
        raise UnsupportedConnectiveError(f"cannot embed formula {t!r}")

    def convert_connective(self, c: Connective, args, env) -> Term:
        if c.name in MODAL_CONNECTIVES:
            if len(args) != 1:
                raise MalformedConnectiveError(f"{{{c.name}}} takes one argument")
            idx = self.index_of(c)
            op = box_name(idx) if c.name == "$box" else dia_name(idx)
            return app(Const(op), self.convert(args[0], env))
        if c.name == "$$nominal":
            n = Const(args[0].name)
            return self.world_lambda(lambda w: equals(w, n))
        if c.name == "$$shift":
            if len(args) != 1:
                raise MalformedConnectiveError("{$$shift} takes one argument")
            target = self.single_index(c)
            where = Var(target) if env.get(target) == "world" else Const(target)
            body = self.convert(args[0], env)
            return self.world_lambda(lambda w: app(body, where))
        if c.name == "$$bind":
            if len(args) != 1:
                raise MalformedConnectiveError("{$$bind} takes one argument")
            x = self.single_index(c)
            inner = dict(env)
            inner[x] = "world"
            body = self.convert(args[0], inner)
            return self.world_lambda(
                lambda w: app(lam([(x, WORLD)], app(body, w)), w))
        raise UnsupportedConnectiveError(f"connective {{{c.name}}}")

    def term(self, t: Term, env: dict) -> Term:
        if isinstance(t, Var):
            if t.name not in env or env[t.name] == "world":
                raise UnsupportedConnectiveError(f"variable {t.name} is not an individual here")
            return t
        if isinstance(t, Const):
            if not is_symbol(t.name):
                raise UnsupportedConnectiveError(f"term {t.name} is not supported")
            return t
        if isinstance(t, App) and isinstance(t.head, Const):
            return App(t.head, tuple(self.term(a, env) for a in t.args))
        raise UnsupportedConnectiveError(f"unsupported term {t!r}")


def _quantifier_definitions(type_name: str, suffix: str, semantics: str, ty: TptpType):
    pred = MapType((ty, WORLD), BOOL)
    P, W, X = Var("P"), Var("W"), Var("X")
    if semantics == "constant":
        fa = forall([("X", ty)], app(P, X, W))
        ex = exists([("X", ty)], app(P, X, W))
    else:
        eiw = Const(f"meiw_{suffix}")
        fa = forall([("X", ty)], implies(app(eiw, X, W), app(P, X, W)))
        ex = exists([("X", ty)], conj(app(eiw, X, W), app(P, X, W)))
    params = [("P", pred), ("W", WORLD)]
    qtype = MapType((pred,), PROP)
    return [(f"mforall_{suffix}", qtype, lam(params, fa)),
            (f"mexists_{suffix}", qtype, lam(params, ex))]


def role_wrapper(role: str, has_hypotheses: bool) -> str:
    if role == "hypothesis":
        return "mlocal"
    if role == "conjecture":
        return "mlocal" if has_hypotheses else "mglobal"
    return "mglobal"


def embed_modal_problem(problem: Problem, config: ModalConfig, hybrid: bool = False,
                        logic: str | None = None):
    logic = logic or ("$$hybrid" if hybrid else "$modal")
    if any(f.role == "logic" for f in problem.formulas):
        raise UnsupportedParameterError("logic specification must be removed before embedding")
    original = problem
    problem, renaming = rename_reserved_symbols(problem)
    back = {v: k for k, v in renaming.items()}
    tr = _ModalTranslator(problem, config, hybrid)
    items = formula_items(problem)
    for f in items:
        tr.scan(f.content)
    sig = infer_signature(problem)
    for n in tr.nominals:
        t = sig.symbols.pop(n, None)
        if t is not None and t not in (BOOL, WORLD):
            raise HolTypeError(f"nominal {n} is also used as a non-nominal symbol")
    has_hyp = any(f.role == "hypothesis" for f in items)

    b = ProblemBuilder(f.name for f in original.formulas)
    b.declare("mworld", TTYPE, ("world",))
    for t in sig.types:
        b.declare(t, TTYPE, ("domain", back.get(t, t)))
    for idx in tr.indices:
        b.declare(relation_name(idx), MapType((WORLD, WORLD), BOOL), ("relation", idx))
    if has_hyp:
        b.declare("mactual", WORLD, ("actual",))
    for n in tr.nominals:
        b.declare(n, WORLD, ("nominal", back.get(n, n)))
    for sym, t in sig.symbols.items():
        kind = "predicate" if (t.result if isinstance(t, MapType) else t) == BOOL else "function"
        b.declare(sym, lift_type(t), (kind, back.get(sym, sym)))

    tr.suffix = type_suffixes(sorted({"$i", *tr.quantified_types}, key=lambda s: (s != "$i", s)))
    eiw_types = []
    for tname in tr.quantified_types:
        if config.quantification_for(back.get(tname, tname)) != "constant":
            s = tr.suffix[tname]
            b.declare(f"meiw_{s}", MapType((BaseType(tname), WORLD), BOOL),
                      ("exists", back.get(tname, tname)))
            eiw_types.append(tname)

    for name, body in lifted_connective_definitions(PROP, [("W", WORLD)]).items():
        b.define(name, connective_types(PROP)[name], body)
    box_type = MapType((PROP,), PROP)
    for idx in tr.indices:
        phi, w, v = Var("Phi"), Var("W"), Var("V")
        b.define(box_name(idx), box_type, lam(
            [("Phi", PROP), ("W", WORLD)],
            forall([("V", WORLD)], implies(_rel(idx, w, v), app(phi, v)))))
        b.define(dia_name(idx), box_type, lam(
            [("Phi", PROP), ("W", WORLD)],
            exists([("V", WORLD)], conj(_rel(idx, w, v), app(phi, v)))))
    for tname in tr.quantified_types:
        sem = config.quantification_for(back.get(tname, tname))
        for sym, ty, body in _quantifier_definitions(tname, tr.suffix[tname], sem,
                                                     BaseType(tname)):
            b.define(sym, ty, body)
    b.define("mglobal", MapType((PROP,), BOOL),
             lam([("A", PROP)], forall([("W", WORLD)], app(Var("A"), Var("W")))))
    if has_hyp:
        b.define("mlocal", MapType((PROP,), BOOL),
                 lam([("A", PROP)], app(Var("A"), Const("mactual"))))

    for idx in tr.indices:
        for name, ax in frame_axioms(idx, config.schemes_for(idx)):
            b.axiom(name, ax)
    for tname in eiw_types:
        s = tr.suffix[tname]
        eiw, ty = Const(f"meiw_{s}"), BaseType(tname)
        X, W, V = Var("X"), Var("W"), Var("V")
        b.axiom(f"meiw_{s}_nonempty",
                forall([("W", WORLD)], exists([("X", ty)], app(eiw, X, W))))
        sem = config.quantification_for(back.get(tname, tname))
        if sem in ("cumulative", "decreasing"):
            for idx in tr.indices:
                rel = _rel(idx, W, V)
                if sem == "cumulative":
                    cond = implies(conj(app(eiw, X, W), rel), app(eiw, X, V))
                else:
                    cond = implies(conj(app(eiw, X, V), rel), app(eiw, X, W))
                b.axiom(f"meiw_{s}_{sem}_{relation_name(idx)}",
                        forall([("X", ty), ("W", WORLD), ("V", WORLD)], cond))

    for f in items:
        lifted = tr.convert(f.content, {})
        wrapper = role_wrapper(f.role, has_hyp)
        b.user_formula(f.name, f.role, app(Const(wrapper), lifted), lifted)
    return b.build(logic)


def embed_from_spec(problem: Problem, spec: LogicSpec):
    config = validate_modal_config(spec)
    return embed_modal_problem(problem, config, hybrid=spec.logic_name == "$$hybrid",
                               logic=spec.logic_name)
