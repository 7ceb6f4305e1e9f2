"""Bounded validity checking and embedding faithfulness checks."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..errors import OracleError
from ..holkit import HolProblem
from ..logicspec import extract_logic_spec
from ..syntax.ast import BOOL, App, Connective, MapType, Problem, Quant
from ..syntax.signature import formula_items, infer_signature, variable_type
from .direct import DirectEvaluator, OracleLogic, eval_direct, oracle_logic
from .hol import eval_hol, interp_from_batch
from .models import Bounds, FiniteModel, ModelSignature, cached_batches, enumerate_batches

PAL_KNOWLEDGE = frozenset({"T", "B", "4"})


@dataclass(frozen=True)
class NoCountermodelWithinBounds:
    bounds: Bounds
    models_checked: int = 0

    def describe(self) -> str:
        b = self.bounds
        return (f"no countermodel within bounds (worlds <= {b.max_worlds}, "
                f"domain <= {b.max_domain}); {self.models_checked} models checked")


@dataclass(frozen=True)
class Countermodel:
    model: FiniteModel
    world: int
    bounds: Bounds

    def describe(self) -> str:
        return (f"countermodel with {self.model.worlds} world(s), conjecture false at world "
                f"{self.world}\n{self.model.describe()}")


BoundedVerdict = NoCountermodelWithinBounds | Countermodel


def _split(problem: Problem, logic: OracleLogic | None):
    spec, rest = extract_logic_spec(problem)
    if logic is None:
        if spec is None:
            raise OracleError("the problem has no logic specification")
        logic = oracle_logic(spec)
    return rest, logic


def signature_for(problem: Problem, logic: OracleLogic) -> ModelSignature:
    """Everything a model must interpret for ``problem`` (logic spec already removed)."""
    indices, agents, nominals, quantified = [], [], [], []

    def note(lst, x):
        if x not in lst:
            lst.append(x)

    def walk(t, bound_worlds):
        if isinstance(t, App) and isinstance(t.head, Connective):
            c = t.head
            if c.name in ("$box", "$dia"):
                note(indices, c.indices[0][1:] if c.indices else "")
            elif c.name == "$$knows":
                note(agents, c.indices[0][1:])
            elif c.name == "$$common":
                for item in c.param("$$group").items:
                    note(agents, item.name.lstrip("#"))
            elif c.name == "$$nominal":
                note(nominals, t.args[0].name)
            elif c.name == "$$shift" and c.indices[0][1:] not in bound_worlds:
                note(nominals, c.indices[0][1:])
            elif c.name == "$$bind":
                bound_worlds = bound_worlds | {c.indices[0][1:]}
            for _, v in c.params:
                walk(v, bound_worlds)
            for a in t.args:
                walk(a, bound_worlds)
            return
        if isinstance(t, Quant):
            for v in t.vars:
                note(quantified, variable_type(v).name)
            walk(t.body, bound_worlds - {v.name for v in t.vars})
            return
        for s in _children(t):
            walk(s, bound_worlds)

    for f in formula_items(problem):
        walk(f.content, frozenset())
    sig = infer_signature(problem)
    for n in nominals:
        sig.symbols.pop(n, None)
    predicates, functions, types = [], [], []
    for name, ty in sig.symbols.items():
        args = tuple(a.name for a in ty.args) if isinstance(ty, MapType) else ()
        result = ty.result if isinstance(ty, MapType) else ty
        for a in args:
            note(types, a)
        if result == BOOL:
            predicates.append((name, args))
        else:
            note(types, result.name)
            functions.append((name, args, result.name))
    for q in quantified:
        note(types, q)
    if logic.kind == "pal":
        relations = tuple((a, PAL_KNOWLEDGE) for a in agents)
    elif logic.modal is not None:
        relations = tuple((i, frozenset(logic.modal.schemes_for(i)) - {"K"}) for i in indices)
    else:
        relations = ()
    varying = ()
    if logic.modal is not None:
        varying = tuple((t, logic.modal.quantification_for(t)) for t in quantified
                        if logic.modal.quantification_for(t) != "constant")
    return ModelSignature(
        relations=relations, predicates=tuple(predicates), functions=tuple(functions),
        types=tuple(types), varying=varying, nominals=tuple(nominals),
        betterness=logic.kind == "ddl" and logic.system == "aqvistE",
        ob=logic.kind == "ddl" and logic.system == "carmoJones")


def _children(t):
    from ..syntax.ast import Binary, ListTerm, Not
    if isinstance(t, App):
        return t.args
    if isinstance(t, Not):
        return (t.arg,)
    if isinstance(t, Binary):
        return (t.left, t.right)
    if isinstance(t, ListTerm):
        return t.items
    return ()


def effective_bounds(sig: ModelSignature, bounds: Bounds) -> Bounds:
    # ob tables are only enumerable for very small world sets
    if sig.ob and bounds.max_worlds > 2:
        return replace(bounds, max_worlds=2)
    return bounds


def _roles(problem: Problem):
    items = formula_items(problem)
    hyps = [f for f in items if f.role == "hypothesis"]
    conjs = [f for f in items if f.role == "conjecture"]
    premises = [f for f in items if f.role not in ("hypothesis", "conjecture")]
    if len(conjs) > 1:
        raise OracleError("more than one conjecture")
    return premises, hyps, conjs[0] if conjs else None


def _all(values, M):
    acc = M
    for v in values:
        acc &= v
    return acc


def decide_bounded(problem: Problem, bounds: Bounds = Bounds(),
                   logic: OracleLogic | None = None,
                   signature: ModelSignature | None = None) -> BoundedVerdict:
    """Search all models within bounds for a countermodel to the conjecture.

    Premises hold at every world, hypotheses at world 0, and the conjecture
    fails at world 0 (with hypotheses) or at some world (without).  Without a
    conjecture, any model of the premises counts.
    """
    rest, logic = _split(problem, logic)
    sig = signature or signature_for(rest, logic)
    bounds = effective_bounds(sig, bounds)
    premises, hyps, conj = _roles(rest)
    checked = 0
    for batch in enumerate_batches(sig, bounds):
        ev = DirectEvaluator(batch, logic)
        M, n = batch.full, batch.worlds
        ok = batch.mask
        for f in premises:
            ok &= _all(ev.vec(f.content), M)
            if not ok:
                break
        for f in hyps:
            ok &= ev.vec(f.content)[0]
        checked += batch.mask.bit_count()
        if not ok:
            continue
        if conj is None:
            fails = [M] * n
        else:
            c = ev.vec(conj.content)
            fails = [M ^ v for v in c]
        candidates = fails[:1] if hyps else fails
        bad = 0
        for v in candidates:
            bad |= v
        bad &= ok
        if bad:
            i = (bad & -bad).bit_length() - 1
            world = next(w for w, v in enumerate(candidates) if v >> i & 1)
            model = batch.model(i)
            _self_check(model, world, logic, premises, hyps, conj)
            return Countermodel(model, world, bounds)
    return NoCountermodelWithinBounds(bounds, checked)


def _self_check(model, world, logic, premises, hyps, conj):
    for f in premises:
        for w in range(model.worlds):
            if not eval_direct(model, w, f.content, logic):
                raise OracleError(f"countermodel self-check failed on premise {f.name}")
    for f in hyps:
        if not eval_direct(model, 0, f.content, logic):
            raise OracleError(f"countermodel self-check failed on hypothesis {f.name}")
    if conj is not None and eval_direct(model, world, conj.content, logic):
        raise OracleError("countermodel self-check failed: the conjecture holds")


@dataclass(frozen=True)
class Disagreement:
    formula: str
    model: FiniteModel
    world: int
    direct: bool
    embedded: bool


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    model: FiniteModel


@dataclass
class FaithfulnessReport:
    models: int = 0
    comparisons: int = 0
    disagreements: list = field(default_factory=list)
    axiom_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.axiom_violations


def check_faithfulness(problem: Problem, embedded: HolProblem, bounds: Bounds = Bounds(),
                       logic: OracleLogic | None = None,
                       signature: ModelSignature | None = None,
                       check_axioms: bool = True) -> FaithfulnessReport:
    """Compare direct evaluation of each source formula with its embedding, world by world.

    Also checks that every model in bounds satisfies the emitted semantic
    axioms (frame, domain and ob conditions).
    """
    rest, logic = _split(problem, logic)
    sig = signature or signature_for(rest, logic)
    bounds = effective_bounds(sig, bounds)
    items = [f for f in formula_items(rest) if f.name in embedded.lifted]
    report = FaithfulnessReport()
    for batch in cached_batches(sig, bounds):
        if not batch.mask:
            continue
        ev = DirectEvaluator(batch, logic)
        interp = interp_from_batch(batch, embedded, bounds.function_budget)
        M, n = batch.full, batch.worlds
        report.models += batch.mask.bit_count()
        if check_axioms:
            for ax in embedded.axioms:
                missing = batch.mask & ~eval_hol(interp, ax.content)
                if missing:
                    i = (missing & -missing).bit_length() - 1
                    report.axiom_violations.append(AxiomViolation(ax.name, batch.model(i)))
        for f in items:
            direct = ev.vec(f.content)
            value = eval_hol(interp, embedded.lifted[f.name])
            if logic.kind == "pal":
                value = value(lambda w: M)
            for w in range(n):
                report.comparisons += batch.mask.bit_count()
                diff = (direct[w] ^ value(w)) & batch.mask
                if diff:
                    i = (diff & -diff).bit_length() - 1
                    report.disagreements.append(Disagreement(
                        f.name, batch.model(i), w, bool(direct[w] >> i & 1),
                        bool(value(w) >> i & 1)))
    return report
