"""Oracle-backed checks shared by the module tests and the acceptance suite."""
import numpy as np

from nclembed.api import embed_problem
from nclembed.embed_ddl import OB_TYPE, cj_ob_axioms
from nclembed.embed_modal import frame_condition
from nclembed.logicspec import ModalConfig
from nclembed.oracle import (
    Bounds, DirectEvaluator, FiniteInterp, ModelSignature, OracleLogic, cj_tables, cj_violations,
    enumerate_batches, eval_hol, interp_from_batch,
)
from nclembed.syntax import parse_formula, parse_problem

K_SPEC = "tff(s, logic, $modal == [$modalities == $modal_system_K])."

SCHEME_INSTANCES = {
    "T": "{$box}(p) => p",
    "B": "p => {$box}({$dia}(p))",
    "D": "{$box}(p) => {$dia}(p)",
    "4": "{$box}(p) => {$box}({$box}(p))",
    "5": "{$dia}(p) => {$box}({$dia}(p))",
    "CD": "{$dia}(p) => {$box}(p)",
    "C4": "{$box}({$box}(p)) => {$box}(p)",
}


def correspondence_mismatches(scheme: str) -> tuple:
    """(relations checked, mismatches) between scheme validity and the frame condition."""
    p = parse_problem(K_SPEC + f"tff(c, conjecture, {SCHEME_INSTANCES[scheme]}).")
    emb = embed_problem(p)
    condition = frame_condition(scheme, "mrel")
    sig = ModelSignature(relations=(("", frozenset()),), predicates=(("p", ()),))
    logic = OracleLogic("modal", modal=ModalConfig())
    valid, holds = {}, {}
    for batch in enumerate_batches(sig, Bounds(min_worlds=3, max_worlds=3)):
        ev = DirectEvaluator(batch, logic)
        inst = parse_formula(SCHEME_INSTANCES[scheme])
        everywhere = batch.full
        for v in ev.vec(inst):
            everywhere &= v
        cond = eval_hol(interp_from_batch(batch, emb), condition)
        for i in batch.indices():
            r = batch.model(i).relations[""]
            valid[r] = valid.get(r, True) and bool(everywhere >> i & 1)
            holds.setdefault(r, bool(cond >> i & 1))
    return len(valid), sum(valid[r] != holds[r] for r in valid)


# ---------------------------------------------------------------- Carmo-Jones ob tables

def _interp_for_tables(n, tables):
    """One model per ob table; ``mob`` answers with the bitset of tables containing a pair."""
    size = len(tables)
    keys = [(x, y) for x in range(1 << n) for y in range(1 << n)]
    bits = {}
    for k in keys:
        selection = np.array([k in t for t in tables], dtype=bool)
        bits[k] = int.from_bytes(np.packbits(selection, bitorder="little").tobytes(), "little")
    M = (1 << size) - 1

    def extension(x):
        # sets handed to mob are model-independent here: each x(w) is 0 or M
        return sum(1 << w for w in range(n) if x(w) == M)

    interp = FiniteInterp(size, {"mworld": range(n)}, types={"mob": OB_TYPE})

    def mob(x):
        ex = extension(x)
        return lambda y: bits[(ex, extension(y))]
    interp.constants["mob"] = mob
    return interp


def _axiom_bits(n, tables):
    interp = _interp_for_tables(n, tables)
    return {name[4:]: eval_hol(interp, ax) for name, ax in cj_ob_axioms()}


def _all_tables(n):
    keys = [(x, y) for x in range(1 << n) for y in range(1 << n)]
    return [frozenset(k for i, k in enumerate(keys) if m >> i & 1) for m in range(1 << len(keys))]


def ob_table_mismatches(n: int) -> list:
    """Tables on which the emitted ob axioms and the direct check disagree."""
    tables = _all_tables(n)
    bits = _axiom_bits(n, tables)
    out = []
    for i, t in enumerate(tables):
        direct = set(cj_violations(n, t))
        emitted = {name for name, b in bits.items() if not b >> i & 1}
        if direct != emitted:
            out.append((sorted(t), direct, emitted))
    return out


def known_good_failures() -> list:
    out = []
    for n in (1, 2):
        good = frozenset((x, y) for x in range(1 << n) for y in range(1 << n) if x & y)
        if cj_violations(n, good) or good not in cj_tables(n):
            out.append(("direct", n))
        if not all(b == 1 for b in _axiom_bits(n, [good]).values()):
            out.append(("emitted", n))
    return out


def known_bad_failures() -> list:
    good = frozenset((x, y) for x in range(4) for y in range(4) if x & y)
    bad = {
        "5a": good | {(3, 0)},                                   # ob(X, empty set)
        "5b": frozenset((1, y) for y in range(4) if y & 2),      # depends on Y outside X
    }
    out = []
    for name, table in bad.items():
        if name not in cj_violations(2, table):
            out.append(("direct", name))
        if _axiom_bits(2, [table])[name] != 0:
            out.append(("emitted", name))
    return out
