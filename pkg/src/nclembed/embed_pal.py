"""Public announcement logic (``$$pal``) as classical HOL.

Formulas denote functions of a domain restriction ``D: mworld > $o`` (the
worlds surviving the announcements so far) and a world.  Knowledge relations
are equivalence relations, one per agent.
"""
from __future__ import annotations

from .embed_modal import (
    PROP, WORLD, PropositionalLifter, check_propositional, connective_types,
    frame_condition, lifted_connective_definitions, relation_name, _ident,
)
from .errors import MalformedConnectiveError
from .holkit import ProblemBuilder, rename_reserved_symbols
from .logicspec import LogicSpec, validate_pal_config
from .syntax.ast import (
    BOOL, TRUE, TTYPE, App, Connective, Const, ListTerm, MapType, Problem, Term, Var, app, conj,
    disj, forall, implies, lam,
)
from .syntax.signature import formula_items

SIGMA = MapType((PROP, WORLD), BOOL)
RELATION = MapType((WORLD, WORLD), BOOL)
FULL_DOMAIN = lam([("U", WORLD)], TRUE)


def knows_name(agent: str) -> str:
    return f"mknows_{_ident(agent)}"


def common_name(group) -> str:
    return "mcommon_" + "_".join(_ident(a) for a in group)


def transitive_closure_definition() -> Term:
    """``mtc R X Y``: (X, Y) lies in every transitive relation containing R."""
    R, Q, X, Y, U, V, Z = (Var(n) for n in "RQXYUVZ")
    contains = forall([("U", WORLD), ("V", WORLD)], implies(app(R, U, V), app(Q, U, V)))
    transitive = forall([("U", WORLD), ("V", WORLD), ("Z", WORLD)],
                        implies(conj(app(Q, U, V), app(Q, V, Z)), app(Q, U, Z)))
    return lam([("R", RELATION), ("X", WORLD), ("Y", WORLD)],
               forall([("Q", RELATION)], implies(conj(contains, transitive), app(Q, X, Y))))


def knows_definition(agent: str) -> Term:
    A, D, W, V = Var("A"), Var("D"), Var("W"), Var("V")
    return lam([("A", SIGMA), ("D", PROP), ("W", WORLD)],
               forall([("V", WORLD)],
                      implies(app(D, V), implies(app(Const(relation_name(agent)), W, V),
                                                 app(A, D, V)))))


def common_definition(group) -> Term:
    A, D, W, V, U, Z = (Var(n) for n in ("A", "D", "W", "V", "U", "Z"))
    union = disj(*(app(Const(relation_name(a)), U, Z) for a in group))
    step = lam([("U", WORLD), ("Z", WORLD)], conj(app(D, Z), union))
    return lam([("A", SIGMA), ("D", PROP), ("W", WORLD)],
               forall([("V", WORLD)],
                      implies(app(Const("mtc"), step, W, V), app(A, D, V))))


def announce_definition() -> Term:
    P, A, D, W, U = (Var(n) for n in ("P", "A", "D", "W", "U"))
    restricted = lam([("U", WORLD)], conj(app(D, U), app(P, D, U)))
    return lam([("P", SIGMA), ("A", SIGMA), ("D", PROP), ("W", WORLD)],
               implies(app(P, D, W), app(A, restricted, W)))


class _PalLifter(PropositionalLifter):
    logic = "$$pal"

    def __init__(self):
        super().__init__([("D", PROP), ("W", WORLD)])
        self.agents: list = []
        self.groups: list = []
        self.announces = False

    def atom(self, name):
        return lam(self.world_args, app(Const(name), Var("W")))

    def _agent(self, name: str):
        if name not in self.agents:
            self.agents.append(name)
        return name

    def connective(self, c: Connective, args) -> Term:
        if c.name == "$$knows":
            if len(c.indices) != 1 or c.params or len(args) != 1:
                raise MalformedConnectiveError("{$$knows(#agent)} takes one index and one argument")
            agent = self._agent(c.indices[0][1:])
            return app(Const(knows_name(agent)), self.convert(args[0]))
        if c.name == "$$common":
            if c.indices or len(args) != 1 or [k for k, _ in c.params] != ["$$group"]:
                raise MalformedConnectiveError("{$$common($$group := [...])} takes one argument")
            value = c.param("$$group")
            if not isinstance(value, ListTerm) or not value.items:
                raise MalformedConnectiveError("$$group must be a non-empty list of agents")
            names = []
            for item in value.items:
                if not isinstance(item, Const):
                    raise MalformedConnectiveError(f"bad agent in $$group: {item!r}")
                names.append(self._agent(item.name.lstrip("#")))
            group = tuple(sorted(set(names)))
            if group not in self.groups:
                self.groups.append(group)
            return app(Const(common_name(group)), self.convert(args[0]))
        if c.name == "$$announce":
            if c.indices or len(args) != 1 or [k for k, _ in c.params] != ["$$formula"]:
                raise MalformedConnectiveError(
                    "{$$announce($$formula := phi)} takes the announced formula and one argument")
            self.announces = True
            return app(Const("mannounce"), self.convert(c.param("$$formula")),
                       self.convert(args[0]))
        return super().connective(c, args)


def embed_pal_problem(problem: Problem):
    problem, renaming = rename_reserved_symbols(problem)
    back = {v: k for k, v in renaming.items()}
    atoms = check_propositional(problem, "$$pal")
    items = formula_items(problem)
    lifter = _PalLifter()
    lifted = [(f, lifter.convert(f.content)) for f in items]
    has_hyp = any(f.role == "hypothesis" for f in items)

    b = ProblemBuilder(f.name for f in problem.formulas)
    b.declare("mworld", TTYPE, ("world",))
    for a in lifter.agents:
        b.declare(relation_name(a), RELATION, ("relation", a))
    if has_hyp:
        b.declare("mactual", WORLD, ("actual",))
    for p in atoms:
        b.declare(p, PROP, ("predicate", back.get(p, p)))
    types = connective_types(SIGMA)
    for name, body in lifted_connective_definitions(SIGMA, lifter.world_args).items():
        b.define(name, types[name], body)
    op_type = MapType((SIGMA,), SIGMA)
    for a in lifter.agents:
        b.define(knows_name(a), op_type, knows_definition(a))
    if lifter.groups:
        b.define("mtc", MapType((RELATION, WORLD, WORLD), BOOL), transitive_closure_definition())
        for g in lifter.groups:
            b.define(common_name(g), op_type, common_definition(g))
    if lifter.announces:
        b.define("mannounce", MapType((SIGMA, SIGMA), SIGMA), announce_definition())
    A, W = Var("A"), Var("W")
    b.define("mglobal", MapType((SIGMA,), BOOL),
             lam([("A", SIGMA)], forall([("W", WORLD)], app(A, FULL_DOMAIN, W))))
    if has_hyp:
        b.define("mlocal", MapType((SIGMA,), BOOL),
                 lam([("A", SIGMA)], app(A, FULL_DOMAIN, Const("mactual"))))
    for a in lifter.agents:
        rel = relation_name(a)
        for scheme, label in (("T", "reflexive"), ("B", "symmetric"), ("4", "transitive")):
            b.axiom(f"{rel}_{label}", frame_condition(scheme, rel))
    for f, term in lifted:
        local = f.role == "hypothesis" or (f.role == "conjecture" and has_hyp)
        b.user_formula(f.name, f.role, App(Const("mlocal" if local else "mglobal"), (term,)),
                       term)
    return b.build("$$pal")


def embed_from_spec(problem: Problem, spec: LogicSpec):
    validate_pal_config(spec)
    return embed_pal_problem(problem)
