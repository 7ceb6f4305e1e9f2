"""Dyadic deontic logic (``$$ddl``) as classical HOL.

``{$$obl}(psi, phi)`` reads "psi is obligatory given phi".  System E is
embedded through a betterness relation and its best worlds; Carmo-Jones
through a primitive ``mob`` function constrained by conditions 5a-5e.
"""
from __future__ import annotations

from .embed_modal import (
    PROP, WORLD, PropositionalLifter, check_propositional, connective_types,
    lifted_connective_definitions, role_wrapper,
)
from .errors import MalformedConnectiveError
from .holkit import ProblemBuilder, rename_reserved_symbols
from .logicspec import DdlConfig, LogicSpec, validate_ddl_config
from .syntax.ast import (
    BOOL, FALSE, TTYPE, App, Connective, Const, MapType, Not, Problem, Term, Var, app, conj,
    disj, exists, forall, iff, implies, lam,
)
from .syntax.signature import formula_items

OBL_TYPE = MapType((PROP, PROP), PROP)
OB_TYPE = MapType((PROP, PROP), BOOL)


def opt_definition() -> Term:
    """Worlds satisfying Phi that are at least as good as every Phi-world."""
    Phi, V, U = Var("Phi"), Var("V"), Var("U")
    return lam([("Phi", PROP), ("V", WORLD)],
               conj(app(Phi, V),
                    forall([("U", WORLD)], implies(app(Phi, U), app(Const("mbetter"), V, U)))))


def e_obligation_definition() -> Term:
    Psi, Phi, V = Var("Psi"), Var("Phi"), Var("V")
    return lam([("Psi", PROP), ("Phi", PROP), ("W", WORLD)],
               forall([("V", WORLD)], implies(app(Const("mopt"), Phi, V), app(Psi, V))))


def cj_obligation_definition() -> Term:
    return lam([("Psi", PROP), ("Phi", PROP), ("W", WORLD)],
               app(Const("mob"), Var("Phi"), Var("Psi")))


def cj_ob_axioms() -> list:
    """Named conditions 5a-5e on ``mob`` over sets of worlds."""
    X, Y, Z, W = Var("X"), Var("Y"), Var("Z"), Var("W")
    ob = Const("mob")
    sets = [("X", PROP), ("Y", PROP), ("Z", PROP)]

    def at(s):
        return app(s, W)

    def every(body):
        return forall([("W", WORLD)], body)

    def some(body):
        return exists([("W", WORLD)], body)

    def subset(a, b):
        return every(implies(at(a), at(b)))

    a = forall([("X", PROP)], Not(app(ob, X, lam([("W", WORLD)], FALSE))))
    b = forall(sets, implies(every(iff(conj(at(X), at(Y)), conj(at(X), at(Z)))),
                             iff(app(ob, X, Y), app(ob, X, Z))))
    c = forall(sets, implies(conj(some(conj(at(X), at(Y), at(Z))), app(ob, X, Y), app(ob, X, Z)),
                             app(ob, X, lam([("W", WORLD)], conj(at(Y), at(Z))))))
    d = forall(sets, implies(conj(subset(Y, X), app(ob, X, Y), subset(X, Z)),
                             app(ob, Z, lam([("W", WORLD)],
                                            disj(conj(at(Z), Not(at(X))), at(Y))))))
    e = forall(sets, implies(conj(subset(Y, X), app(ob, X, Z), some(conj(at(Y), at(Z)))),
                             app(ob, Y, Z)))
    return [("mob_5a", a), ("mob_5b", b), ("mob_5c", c), ("mob_5d", d), ("mob_5e", e)]


class _DdlLifter(PropositionalLifter):
    logic = "$$ddl"

    def __init__(self):
        super().__init__([("W", WORLD)])

    def connective(self, c: Connective, args) -> Term:
        if c.name == "$$obl":
            if c.indices or c.params or len(args) != 2:
                raise MalformedConnectiveError(
                    "{$$obl} takes two arguments: the obligation and its condition")
            return app(Const("mobl"), self.convert(args[0]), self.convert(args[1]))
        return super().connective(c, args)


def embed_ddl_problem(problem: Problem, config: DdlConfig):
    problem, renaming = rename_reserved_symbols(problem)
    back = {v: k for k, v in renaming.items()}
    atoms = check_propositional(problem, "$$ddl")
    items = formula_items(problem)
    lifter = _DdlLifter()
    lifted = [(f, lifter.convert(f.content)) for f in items]
    has_hyp = any(f.role == "hypothesis" for f in items)

    b = ProblemBuilder(f.name for f in problem.formulas)
    b.declare("mworld", TTYPE, ("world",))
    if config.system == "aqvistE":
        b.declare("mbetter", MapType((WORLD, WORLD), BOOL), ("betterness",))
    else:
        b.declare("mob", OB_TYPE, ("ob",))
    if has_hyp:
        b.declare("mactual", WORLD, ("actual",))
    for p in atoms:
        b.declare(p, PROP, ("predicate", back.get(p, p)))
    types = connective_types(PROP)
    for name, body in lifted_connective_definitions(PROP, lifter.world_args).items():
        b.define(name, types[name], body)
    if config.system == "aqvistE":
        b.define("mopt", MapType((PROP,), PROP), opt_definition())
        b.define("mobl", OBL_TYPE, e_obligation_definition())
    else:
        b.define("mobl", OBL_TYPE, cj_obligation_definition())
    b.define("mglobal", MapType((PROP,), BOOL),
             lam([("A", PROP)], forall([("W", WORLD)], app(Var("A"), Var("W")))))
    if has_hyp:
        b.define("mlocal", MapType((PROP,), BOOL),
                 lam([("A", PROP)], app(Var("A"), Const("mactual"))))
    if config.system == "carmoJones":
        for name, ax in cj_ob_axioms():
            b.axiom(name, ax)
    for f, term in lifted:
        b.user_formula(f.name, f.role,
                       App(Const(role_wrapper(f.role, has_hyp)), (term,)), term)
    return b.build("$$ddl")


def embed_from_spec(problem: Problem, spec: LogicSpec):
    return embed_ddl_problem(problem, validate_ddl_config(spec))
