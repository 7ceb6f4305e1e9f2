import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import read_fixture
from formulas import pal_formula, problem_with
from nclembed.api import embed_problem
from nclembed.embed_pal import RELATION, SIGMA, transitive_closure_definition
from nclembed.errors import MalformedConnectiveError, NotPropositionalError
from nclembed.holkit import infer_type
from nclembed.logicspec import extract_logic_spec
from nclembed.oracle import (
    Bounds, Countermodel, FiniteInterp, FiniteModel, ModelSignature, NoCountermodelWithinBounds,
    cached_batches, check_faithfulness, decide_bounded, enumerate_batches, eval_hol,
    interp_from_batch, oracle_logic, signature_for,
)
from nclembed.embed_modal import WORLD
from nclembed.syntax import parse_formula, parse_problem, parse_type
from nclembed.syntax.ast import App, Connective

PAL_SPEC = "tff(s, logic, $$pal == [])."


def embed(text):
    return embed_problem(parse_problem(text))


def test_shape():
    emb = embed(read_fixture("pal_announce.p"))
    sig = emb.signature()
    assert sig["p"] == parse_type("mworld > $o")
    assert infer_type(emb.lifted["c"], sig) == SIGMA
    assert [a.name for a in emb.axioms] == ["mrel_a_reflexive", "mrel_a_symmetric",
                                            "mrel_a_transitive"]
    atom = "(^[D: mworld > $o, W: mworld]: (p @ W))"
    assert emb.formulas[0].content == parse_formula(
        f"mglobal @ (mannounce @ {atom} @ (mknows_a @ {atom}))")


def test_definitions():
    emb = embed(PAL_SPEC + "tff(c, conjecture, {$$common($$group := [a, b])}(p) "
                "& {$$announce($$formula := q)}({$$knows(#b)}(p))).")
    defs = emb.definition_map()
    assert defs["mtc"] == transitive_closure_definition()
    assert defs["mknows_b"] == parse_formula(
        "^[A: (mworld > $o) > mworld > $o, D: mworld > $o, W: mworld]: ![V: mworld]: "
        "((D @ V) => ((mrel_b @ W @ V) => (A @ D @ V)))")
    assert defs["mannounce"] == parse_formula(
        "^[P: (mworld > $o) > mworld > $o, A: (mworld > $o) > mworld > $o, D: mworld > $o, "
        "W: mworld]: ((P @ D @ W) => (A @ (^[U: mworld]: ((D @ U) & (P @ D @ U))) @ W))")
    assert "mcommon_a_b" in defs
    assert emb.lifted["c"].args[0].head == parse_formula("mcommon_a_b")


def test_atoms_ignore_domain():
    emb = embed(PAL_SPEC + "tff(c, conjecture, p).")
    assert emb.lifted["c"] == parse_formula("^[D: mworld > $o, W: mworld]: (p @ W)")


def test_conjecture_uses_full_domain():
    emb = embed(PAL_SPEC + "tff(c, conjecture, p).")
    defs = emb.definition_map()
    assert defs["mglobal"] == parse_formula(
        "^[A: (mworld > $o) > mworld > $o]: ![W: mworld]: (A @ (^[U: mworld]: $true) @ W)")


@pytest.mark.parametrize("body,error", [
    ("![X]: p(X)", NotPropositionalError),
    ("{$$common}(p)", MalformedConnectiveError),
    ("{$$common($$group := [])}(p)", MalformedConnectiveError),
    ("{$$announce}(p)", MalformedConnectiveError),
])
def test_errors(body, error):
    with pytest.raises(error):
        embed(PAL_SPEC + f"tff(c, conjecture, {body}).")


@pytest.mark.parametrize("conjecture,valid", [
    ("{$$announce($$formula := p)}({$$knows(#a)}(p))", True),
    ("{$$knows(#a)}(p) => p", True),
    ("p => {$$knows(#a)}(p)", False),
])
def test_examples(conjecture, valid):
    p = parse_problem(PAL_SPEC + f"tff(c, conjecture, {conjecture}).")
    verdict = decide_bounded(p, Bounds(max_worlds=4))
    assert isinstance(verdict, NoCountermodelWithinBounds if valid else Countermodel)
    if not valid:
        assert verdict.model.worlds == 2
        report = check_faithfulness(p, embed_problem(p), Bounds(max_worlds=3))
        assert report.ok


def test_random_faithfulness():
    rng = random.Random(21)
    fs = [pal_formula(rng, 3) for _ in range(120)]
    p = problem_with(PAL_SPEC, fs)
    report = check_faithfulness(p, embed_problem(p), Bounds(max_worlds=3))
    assert report.ok and report.comparisons > 0


def test_common_knowledge_is_plain_transitive_closure():
    # with p false at the actual world only, C p can still hold there (no reflexive step)
    p = parse_problem(PAL_SPEC + "tff(c, conjecture, {$$common($$group := [a])}(p) => p).")
    assert isinstance(decide_bounded(p, Bounds(max_worlds=3)), NoCountermodelWithinBounds)
    q = parse_problem(PAL_SPEC + "tff(c, conjecture, "
                      "{$$announce($$formula := ~p)}({$$common($$group := [a])}(~p))).")
    assert isinstance(decide_bounded(q, Bounds(max_worlds=3)), NoCountermodelWithinBounds)


# ---------------------------------------------------------------- mtc

def _closure(pairs, n):
    reach = set(pairs)
    while True:
        extra = {(u, z) for u, v in reach for v2, z in reach if v == v2} - reach
        if not extra:
            return reach
        reach |= extra


def _mtc_interp(batch):
    tc_type = parse_type("(mworld > mworld > $o) > mworld > mworld > $o")
    interp = FiniteInterp(batch.size, {"mworld": range(batch.worlds)},
                          {"r": lambda u: lambda v: batch.entry(("R", "", u, v))},
                          {"r": RELATION, "mtc": tc_type})
    interp.define("mtc", tc_type, transitive_closure_definition())
    return interp


def _tc(interp, x, y):
    return eval_hol(interp, parse_formula("mtc @ r @ X @ Y"), {"X": x, "Y": y},
                    {"X": WORLD, "Y": WORLD})


def test_mtc_matches_fixpoint_on_all_relations():
    sig = ModelSignature(relations=(("", frozenset()),))
    checked = 0
    for batch in enumerate_batches(sig, Bounds(min_worlds=3, max_worlds=3)):
        interp = _mtc_interp(batch)
        n = batch.worlds
        values = {(x, y): _tc(interp, x, y) for x in range(n) for y in range(n)}
        for i in batch.indices():
            rel = batch.model(i).relations[""]
            closure = _closure(rel, n)
            for (x, y), bits in values.items():
                assert bool(bits >> i & 1) == ((x, y) in closure)
            checked += 1
    assert checked == 512


def test_mtc_examples():
    chain = _mtc_interp(FiniteModel(3, {}, {"": frozenset({(0, 1), (1, 2)})}, {}, {}, {}, {})
                        .as_batch())
    assert _tc(chain, 0, 2) == 1
    assert _tc(chain, 2, 0) == 0
    empty = _mtc_interp(FiniteModel(3, {}, {"": frozenset()}, {}, {}, {}, {}).as_batch())
    assert all(_tc(empty, x, y) == 0 for x in range(3) for y in range(3))


# ---------------------------------------------------------------- announcement composition

@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_announcement_composition(seed):
    rng = random.Random(seed)
    psi, chi, phi = (pal_formula(rng, 2, announce_depth=0) for _ in range(3))
    inner = App(Connective("$$announce", (), (("$$formula", chi),)), (phi,))
    outer = App(Connective("$$announce", (), (("$$formula", psi),)), (inner,))
    p = problem_with(PAL_SPEC, [outer, psi, chi, phi])
    emb = embed_problem(p)
    spec, rest = extract_logic_spec(p)
    sig = signature_for(rest, oracle_logic(spec))
    for batch in cached_batches(sig, Bounds(max_worlds=3)):
        interp = interp_from_batch(batch, emb)
        M, n = batch.full, batch.worlds
        H = {k: eval_hol(interp, emb.lifted[k]) for k in ("f0", "f1", "f2", "f3")}
        full = lambda w: M
        d1 = [H["f1"](full)(w) for w in range(n)]
        chi1 = [H["f2"](d1.__getitem__)(w) for w in range(n)]
        d2 = [a & b for a, b in zip(d1, chi1)]
        for w in range(n):
            expected = (M ^ d1[w]) | (M ^ chi1[w]) | H["f3"](d2.__getitem__)(w)
            assert (H["f0"](full)(w) ^ expected) & batch.mask == 0
