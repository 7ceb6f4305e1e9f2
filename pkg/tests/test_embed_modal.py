import random

import pytest

from checks import K_SPEC, SCHEME_INSTANCES, correspondence_mismatches
from conftest import read_fixture
from formulas import hybrid_formula, modal_formula, problem_with
from nclembed.api import embed_problem
from nclembed.embed_modal import PROP, frame_axioms
from nclembed.errors import HolTypeError, UnsupportedConnectiveError
from nclembed.holkit import infer_type, unfold_definitions
from nclembed.oracle import (
    Bounds, Countermodel, NoCountermodelWithinBounds, check_faithfulness, decide_bounded,
)
from nclembed.syntax import parse_formula, parse_problem, print_problem, print_type
from nclembed.syntax.ast import BOOL


def embed(text):
    return embed_problem(parse_problem(text))


def entry(emb, name):
    return next(e for e in emb.entries if e.name == name)


def test_example1_shape():
    emb = embed(read_fixture("example1_decreasing.p"))
    assert entry(emb, "mrel_euclidean").content == parse_formula(
        "![U: mworld, V: mworld, W: mworld]: (((mrel @ U @ V) & (mrel @ U @ W)) => (mrel @ V @ W))")
    assert entry(emb, "meiw_i_decreasing_mrel").content == parse_formula(
        "![X: $i, W: mworld, V: mworld]: (((meiw_i @ X @ V) & (mrel @ W @ V)) => (meiw_i @ X @ W))")
    assert entry(emb, "meiw_i_nonempty").content == parse_formula(
        "![W: mworld]: ?[X: $i]: (meiw_i @ X @ W)")
    conj = entry(emb, "bf")
    assert conj.role == "conjecture"
    assert conj.content.head.name == "mglobal"
    assert infer_type(emb.lifted["bf"], emb.signature()) == PROP


def test_constant_semantics_has_no_eiw():
    out = print_problem(embed(read_fixture("example1_constant.p")))
    assert "meiw" not in out


def test_cumulative_axiom():
    emb = embed(read_fixture("example1_cumulative.p"))
    assert entry(emb, "meiw_i_cumulative_mrel").content == parse_formula(
        "![X: $i, W: mworld, V: mworld]: (((meiw_i @ X @ W) & (mrel @ W @ V)) => (meiw_i @ X @ V))")


def test_varying_only_nonempty():
    names = [a.name for a in embed(read_fixture("example1_varying.p")).axioms]
    assert "meiw_i_nonempty" in names
    assert not any("cumulative" in n or "decreasing" in n for n in names)


def test_box_unfolds():
    emb = unfold_definitions(embed(K_SPEC + "tff(c, conjecture, {$box}(p))."))
    assert emb.formulas[0].content == parse_formula(
        "![W: mworld]: ![V: mworld]: ((mrel @ W @ V) => (p @ V))")


def test_dia_definition():
    emb = embed(K_SPEC + "tff(c, conjecture, {$dia}(p)).")
    assert emb.lifted["c"] == parse_formula("mdia @ p")
    assert emb.definition_map()["mdia"] == parse_formula(
        "^[Phi: mworld > $o, W: mworld]: ?[V: mworld]: ((mrel @ W @ V) & (Phi @ V))")


def test_varying_quantifier_unfolds():
    text = ("tff(s, logic, $modal == [$quantification == $varying, "
            "$modalities == $modal_system_K]).\ntff(c, conjecture, ![X]: p(X)).")
    emb = unfold_definitions(embed(text))
    assert emb.lifted["c"] == parse_formula(
        "^[W: mworld]: ![X: $i]: ((meiw_i @ X @ W) => (p @ X @ W))")


def test_indexed_modalities():
    emb = embed(K_SPEC + "tff(c, conjecture, {$box(#a)}(p) => {$box(#b)}(p)).")
    sig = emb.signature()
    for name in ("mrel_a", "mrel_b", "mbox_a", "mbox_b", "mdia_a", "mdia_b"):
        assert name in sig
    assert "mrel" not in sig


def test_unindexed_and_indexed_coexist():
    sig = embed(K_SPEC + "tff(c, conjecture, {$box(#a)}(p) => {$box}(p)).").signature()
    assert "mrel" in sig and "mrel_a" in sig


def test_per_index_schemes():
    text = ("tff(s, logic, $modal == [$modalities == [$modal_system_K, "
            "{$box(#a)} == $modal_system_T]]).\ntff(c, conjecture, {$box(#a)}(p) => {$box(#b)}(p)).")
    names = [a.name for a in embed(text).axioms]
    assert names == ["mrel_a_reflexive"]


def test_frame_axiom_examples():
    assert frame_axioms("", {"K"}) == []
    (name, t), = frame_axioms("", {"K", "T"})
    assert name == "mrel_reflexive"
    assert t == parse_formula("![W: mworld]: (mrel @ W @ W)")
    (_, d), = frame_axioms("", {"K", "D"})
    assert d == parse_formula("![W: mworld]: ?[V: mworld]: (mrel @ W @ V)")
    (_, u), = frame_axioms("a", {"K", "universal"})
    assert u == parse_formula("![U: mworld, V: mworld]: (mrel_a @ U @ V)")


def test_hypotheses_make_local_conjecture():
    emb = embed(K_SPEC + "tff(h, hypothesis, p).\ntff(a, axiom, q).\ntff(c, conjecture, {$dia}(p)).")
    assert entry(emb, "h").content.head.name == "mlocal"
    assert entry(emb, "a").content.head.name == "mglobal"
    assert entry(emb, "c").content.head.name == "mlocal"
    assert "mactual" in emb.signature()
    assert "mactual" not in embed(K_SPEC + "tff(c, conjecture, p).").signature()


def test_wrong_logic_connectives_rejected():
    with pytest.raises(UnsupportedConnectiveError) as err:
        embed(K_SPEC + "tff(c, conjecture, {$$knows(#a)}(p)).")
    assert err.value.reason == "UNSUPPORTED_CONNECTIVE"
    with pytest.raises(UnsupportedConnectiveError):
        embed(K_SPEC + "tff(c, conjecture, {$$nominal}(n)).")


def test_example2_hybrid_shape():
    emb = embed(read_fixture("example2_hybrid.p"))
    sig = emb.signature()
    assert print_type(sig["n"]) == "mworld"
    # the shift moves evaluation to n, and bind then names n itself
    assert unfold_definitions(emb).lifted["1"] == parse_formula(
        "^[W: mworld]: ![X: $i]: ((meiw_i @ X @ W) => (![V: mworld]: ((mrel @ W @ V) => "
        "(((n = n) & (p @ X @ n)) <=> ((n = n) & (p @ X @ n))))))")


def test_shift_declares_nominal():
    text = ("tff(s, logic, $$hybrid == [$modalities == $modal_system_K]).\n"
            "tff(c, conjecture, {$$shift(#m)}(p)).")
    emb = embed(text)
    assert print_type(emb.signature()["m"]) == "mworld"


def test_nominal_symbol_clash():
    text = ("tff(s, logic, $$hybrid == [$modalities == $modal_system_K]).\n"
            "tff(c, conjecture, {$$nominal}(n) & q(n)).")
    with pytest.raises(HolTypeError):
        embed(text)


# ---------------------------------------------------------------- oracle-backed

def test_barcan_profile():
    bounds = Bounds(max_worlds=3, max_domain=3)
    for sem in ("decreasing", "constant"):
        verdict = decide_bounded(parse_problem(read_fixture(f"example1_{sem}.p")), bounds)
        assert isinstance(verdict, NoCountermodelWithinBounds), sem
    for sem in ("cumulative", "varying"):
        verdict = decide_bounded(parse_problem(read_fixture(f"example1_{sem}.p")),
                                 Bounds(max_worlds=2, max_domain=2))
        assert isinstance(verdict, Countermodel), sem
        assert verdict.model.worlds == 2


def test_example_embeddings_faithful():
    for name in ("example1_decreasing.p", "example1_cumulative.p", "example2_hybrid.p"):
        p = parse_problem(read_fixture(name))
        report = check_faithfulness(p, embed_problem(p), Bounds(max_worlds=3, max_domain=2))
        assert report.ok, (name, report.disagreements[:1], report.axiom_violations[:1])
        assert report.models > 0


def test_random_modal_faithfulness():
    rng = random.Random(7)
    fs = [modal_formula(rng, 3, atoms=2, indices=("", "a")) for _ in range(150)]
    p = problem_with(K_SPEC, fs)
    report = check_faithfulness(p, embed_problem(p), Bounds(max_worlds=2))
    assert report.ok and report.comparisons > 0


@pytest.mark.parametrize("system", ["T", "S4", "S5", "KB5", "D45", "S5U"])
def test_random_faithfulness_per_system(system):
    rng = random.Random(hash(system) % 1000)
    fs = [modal_formula(rng, 3, atoms=2) for _ in range(60)]
    p = problem_with(f"tff(s, logic, $modal == [$modalities == $modal_system_{system}]).", fs)
    report = check_faithfulness(p, embed_problem(p), Bounds(max_worlds=3))
    assert report.ok


def test_random_hybrid_faithfulness():
    rng = random.Random(11)
    fs = [hybrid_formula(rng, 4) for _ in range(60)]
    p = problem_with("tff(s, logic, $$hybrid == [$modalities == $modal_system_K]).", fs)
    report = check_faithfulness(p, embed_problem(p), Bounds(max_worlds=3))
    assert report.ok


def test_mutated_box_is_caught():
    """An embedding with a broken box definition must disagree with the oracle."""
    from dataclasses import replace
    from nclembed.holkit import definition
    p = parse_problem(K_SPEC + "tff(c, conjecture, {$box}(p)).")
    emb = embed_problem(p)
    bad = parse_formula("^[Phi: mworld > $o, W: mworld]: ![V: mworld]: ((mrel @ W @ V) & (Phi @ V))")
    defs = tuple(definition(d.name, "mbox", bad) if d.content.left.name == "mbox" else d
                 for d in emb.definitions)
    report = check_faithfulness(p, replace(emb, definitions=defs), Bounds(min_worlds=2, max_worlds=2))
    assert report.disagreements
    assert report.disagreements[0].model.worlds == 2


@pytest.mark.parametrize("scheme", list(SCHEME_INSTANCES))
def test_frame_correspondence(scheme):
    checked, mismatches = correspondence_mismatches(scheme)
    assert checked == 512
    assert mismatches == 0


def test_type_discipline_on_random_formulas():
    rng = random.Random(3)
    fs = [modal_formula(rng, 4, atoms=3, indices=("", "a", "b")) for _ in range(50)]
    emb = embed_problem(problem_with(K_SPEC, fs))
    sig = emb.signature()
    for name, lifted in emb.lifted.items():
        assert infer_type(lifted, sig) == PROP
    for f in emb.formulas:
        assert infer_type(f.content, sig) == BOOL
