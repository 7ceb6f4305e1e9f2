"""Logic specifications: extraction, parameter validation, embedding registry."""
from __future__ import annotations

import importlib
import itertools
from dataclasses import dataclass, field

from .errors import (
    AmbiguousLogicSpecError, MalformedLogicSpecError, MissingParameterError,
    UnknownParameterError, UnsupportedLogicError, UnsupportedParameterError,
)
from .syntax.ast import (
    AnnotatedFormula, Binary, Connective, Const, ListTerm, Problem, Term,
)

QUANTIFICATION_SEMANTICS = ("varying", "constant", "cumulative", "decreasing")

SCHEMES = ("K", "T", "B", "D", "4", "5", "CD", "C4")

MODAL_SYSTEMS = {
    "K": frozenset({"K"}),
    "KB": frozenset({"K", "B"}),
    "K4": frozenset({"K", "4"}),
    "K5": frozenset({"K", "5"}),
    "K45": frozenset({"K", "4", "5"}),
    "KB5": frozenset({"K", "B", "5"}),
    "D": frozenset({"K", "D"}),
    "DB": frozenset({"K", "D", "B"}),
    "D4": frozenset({"K", "D", "4"}),
    "D5": frozenset({"K", "D", "5"}),
    "D45": frozenset({"K", "D", "4", "5"}),
    "T": frozenset({"K", "T"}),
    "B": frozenset({"K", "T", "B"}),
    "S4": frozenset({"K", "T", "4"}),
    "S5": frozenset({"K", "T", "5"}),
    "S5U": frozenset({"K", "universal"}),
}

DDL_SYSTEMS = ("carmoJones", "aqvistE")


@dataclass(frozen=True)
class LogicSpec:
    logic_name: str
    properties: dict = field(default_factory=dict)
    formula_name: str | None = None

    def get(self, key: str, default=None):
        return self.properties.get(key, default)


@dataclass(frozen=True)
class ModalConfig:
    """Validated ``$modal`` / ``$$hybrid`` parameters.

    ``modalities`` maps an index (``""`` for the unindexed box) to its scheme
    set; indices without an entry use ``default_schemes``.
    """

    default_quantification: str = "constant"
    quantification: tuple = ()
    rigid: bool = True
    default_schemes: frozenset = frozenset({"K"})
    modalities: tuple = ()

    def quantification_for(self, type_name: str) -> str:
        return dict(self.quantification).get(type_name, self.default_quantification)

    def schemes_for(self, index: str) -> frozenset:
        return dict(self.modalities).get(index, self.default_schemes)


@dataclass(frozen=True)
class DdlConfig:
    system: str


# ---------------------------------------------------------------- extraction


def _spec_from_formula(f: AnnotatedFormula) -> LogicSpec:
    content = f.content
    if isinstance(content, Const) and content.name.startswith("$"):
        return LogicSpec(content.name, {}, f.name)
    if not (isinstance(content, Binary) and content.op == "=="
            and isinstance(content.left, Const) and content.left.name.startswith("$")):
        raise MalformedLogicSpecError(
            f"logic specification '{f.name}' must have the form <logic_name> == [<properties>]")
    props = {}
    value = content.right
    items = value.items if isinstance(value, ListTerm) else (value,)
    for item in items:
        if not (isinstance(item, Binary) and item.op == "==" and isinstance(item.left, Const)):
            raise MalformedLogicSpecError(
                f"logic specification '{f.name}': properties must be <key> == <value> pairs")
        if item.left.name in props:
            raise MalformedLogicSpecError(
                f"logic specification '{f.name}': property {item.left.name} given twice")
        props[item.left.name] = item.right
    return LogicSpec(content.left.name, props, f.name)


def extract_logic_spec(problem: Problem):
    """Return ``(spec or None, problem without the spec formula)``."""
    specs = [f for f in problem.formulas if f.role == "logic"]
    if len(specs) > 1:
        raise AmbiguousLogicSpecError(
            "more than one logic specification: " + ", ".join(f.name for f in specs))
    if not specs:
        return None, problem
    rest = Problem(tuple(e for e in problem.entries if e is not specs[0]))
    return _spec_from_formula(specs[0]), rest


# ---------------------------------------------------------------- validation


def _token(value: Term, what: str) -> str:
    if not isinstance(value, Const):
        raise MalformedLogicSpecError(f"{what}: expected a single token")
    return value.name


def _quantification_token(tok: str) -> str:
    if tok.startswith("$") and tok[1:] in QUANTIFICATION_SEMANTICS:
        return tok[1:]
    raise UnknownParameterError(f"unknown quantification semantics {tok}")


def _schemes(value: Term) -> frozenset:
    if isinstance(value, Const):
        name = value.name
        if name.startswith("$modal_system_") and name[len("$modal_system_"):] in MODAL_SYSTEMS:
            return MODAL_SYSTEMS[name[len("$modal_system_"):]]
        if name.startswith("$modal_axiom_"):
            return _schemes(ListTerm((value,)))
        raise UnknownParameterError(f"unknown modal system {name}")
    if isinstance(value, ListTerm):
        out = {"K"}
        for item in value.items:
            tok = _token(item, "$modalities")
            scheme = tok[len("$modal_axiom_"):] if tok.startswith("$modal_axiom_") else None
            if scheme not in SCHEMES:
                raise UnknownParameterError(f"unknown modal axiom scheme {tok}")
            out.add(scheme)
        return frozenset(out)
    raise MalformedLogicSpecError("$modalities: expected a system name or a list of axiom schemes")


def _modal_index_key(lhs: Term) -> str:
    if isinstance(lhs, Connective) and lhs.name in ("$box", "$dia") and not lhs.params:
        if len(lhs.indices) > 1:
            raise MalformedLogicSpecError("modality key takes at most one index")
        return lhs.indices[0][1:] if lhs.indices else ""
    raise MalformedLogicSpecError("per-modality entries must be keyed by {$box(#i)}")


def validate_modal_config(spec: LogicSpec) -> ModalConfig:
    if spec.logic_name not in ("$modal", "$$hybrid"):
        raise UnsupportedLogicError(f"{spec.logic_name} is not a modal logic family")
    known = {"$constants", "$quantification", "$modalities"}
    for key in spec.properties:
        if key not in known:
            raise UnknownParameterError(f"unknown parameter {key} for {spec.logic_name}")

    constants = spec.get("$constants")
    if constants is not None:
        tok = _token(constants, "$constants")
        if tok == "$flexible":
            raise UnsupportedParameterError("$constants == $flexible is not supported")
        if tok != "$rigid":
            raise UnknownParameterError(f"unknown value {tok} for $constants")

    default_q, per_type = "constant", {}
    quant = spec.get("$quantification")
    if quant is not None:
        items = quant.items if isinstance(quant, ListTerm) else (quant,)
        for item in items:
            if isinstance(item, Binary) and item.op == "==":
                type_name = _token(item.left, "$quantification type")
                per_type[type_name] = _quantification_token(_token(item.right, "$quantification"))
            else:
                default_q = _quantification_token(_token(item, "$quantification"))

    modalities = spec.get("$modalities")
    if modalities is None:
        raise MissingParameterError(f"{spec.logic_name} requires the $modalities parameter")
    default_schemes, per_index = frozenset({"K"}), {}
    if isinstance(modalities, ListTerm) and any(
            isinstance(i, Binary) for i in modalities.items):
        bare = [i for i in modalities.items if not isinstance(i, Binary)]
        if len(bare) == 1:
            default_schemes = _schemes(bare[0])
        elif bare:
            default_schemes = _schemes(ListTerm(tuple(bare)))
        for item in modalities.items:
            if isinstance(item, Binary):
                if item.op != "==":
                    raise MalformedLogicSpecError("per-modality entries use ==")
                per_index[_modal_index_key(item.left)] = _schemes(item.right)
    else:
        default_schemes = _schemes(modalities)

    return ModalConfig(
        default_quantification=default_q,
        quantification=tuple(sorted(per_type.items())),
        rigid=True,
        default_schemes=default_schemes,
        modalities=tuple(sorted(per_index.items())),
    )


def _scheme_term(schemes: frozenset) -> Term:
    if "universal" in schemes:
        return Const("$modal_system_S5U")
    return ListTerm(tuple(Const(f"$modal_axiom_{s}") for s in SCHEMES if s in schemes))


def modal_config_to_spec(config: ModalConfig, logic_name: str = "$modal") -> LogicSpec:
    """Render a validated configuration back into logic-specification form."""
    quant_items = [Const("$" + config.default_quantification)]
    quant_items += [Binary("==", Const(t), Const("$" + q)) for t, q in config.quantification]
    mod_items = [_scheme_term(config.default_schemes)]
    if config.modalities:
        default = mod_items[0]
        mod_items = list(default.items) if isinstance(default, ListTerm) else [default]
        for index, schemes in config.modalities:
            key = Connective("$box", (f"#{index}",) if index else ())
            mod_items.append(Binary("==", key, _scheme_term(schemes)))
        modalities = ListTerm(tuple(mod_items))
    else:
        modalities = mod_items[0]
    return LogicSpec(logic_name, {
        "$constants": Const("$rigid"),
        "$quantification": ListTerm(tuple(quant_items)),
        "$modalities": modalities,
    })


def enumerate_modal_configs():
    """Every (named system x default quantification) configuration."""
    for system, q in itertools.product(MODAL_SYSTEMS, QUANTIFICATION_SEMANTICS):
        yield ModalConfig(default_quantification=q, default_schemes=MODAL_SYSTEMS[system])


def validate_ddl_config(spec: LogicSpec) -> DdlConfig:
    if spec.logic_name != "$$ddl":
        raise UnsupportedLogicError(f"{spec.logic_name} is not a dyadic deontic logic")
    for key in spec.properties:
        if key != "$$system":
            raise UnknownParameterError(f"unknown parameter {key} for $$ddl")
    value = spec.get("$$system")
    if value is None:
        raise MissingParameterError("$$ddl requires the $$system parameter")
    tok = _token(value, "$$system")
    if not (tok.startswith("$$") and tok[2:] in DDL_SYSTEMS):
        raise UnknownParameterError(f"unknown value {tok} for $$system")
    return DdlConfig(tok[2:])


def validate_pal_config(spec: LogicSpec) -> None:
    for key in spec.properties:
        raise UnknownParameterError(f"$$pal takes no parameters (got {key})")


# ---------------------------------------------------------------- registry


@dataclass(frozen=True)
class Embedding:
    logic_name: str
    target: str

    def load(self):
        module, _, attr = self.target.partition(":")
        return getattr(importlib.import_module(module), attr)

    def __call__(self, problem: Problem, spec: LogicSpec):
        return self.load()(problem, spec)


REGISTRY = {
    "$modal": "nclembed.embed_modal:embed_from_spec",
    "$$hybrid": "nclembed.embed_modal:embed_from_spec",
    "$$pal": "nclembed.embed_pal:embed_from_spec",
    "$$ddl": "nclembed.embed_ddl:embed_from_spec",
}


def supported_logics() -> list:
    return sorted(REGISTRY)


def lookup_embedding(logic_name: str) -> Embedding:
    try:
        return Embedding(logic_name, REGISTRY[logic_name])
    except KeyError:
        raise UnsupportedLogicError(
            f"unsupported logic {logic_name}; supported: {', '.join(supported_logics())}"
        ) from None
