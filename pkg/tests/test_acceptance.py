"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that is printed in the terminal summary
(``pytest tests/test_acceptance.py`` or the full suite).  Time limits are
wall-clock and include embedding plus oracle work.
"""
import random
import shutil
import subprocess
import time
from contextlib import contextmanager

import pytest

from checks import (
    SCHEME_INSTANCES, correspondence_mismatches, known_bad_failures, known_good_failures,
    ob_table_mismatches,
)
from conftest import ACCEPTANCE, CORPUS, FIXTURES, read_fixture
from formulas import ddl_formula, hybrid_formula, modal_formula, pal_formula, problem_with
from nclembed.api import embed_problem
from nclembed.cli import main
from nclembed.logicspec import enumerate_modal_configs
from nclembed.oracle import (
    Bounds, Countermodel, NoCountermodelWithinBounds, check_faithfulness, decide_bounded,
)
from nclembed.syntax import parse_problem, print_problem
from nclembed.syntax.ast import Binary, Connective, Quant, TypeDecl, subterms


@contextmanager
def criterion(number: int, limit: float | None = None):
    """Records PASS/FAIL for a criterion; ``note`` collects the detail text."""
    note = []
    start = time.perf_counter()
    try:
        yield note
        elapsed = time.perf_counter() - start
        timing = f"{elapsed:.1f}s" + (f" (limit {limit:.0f}s)" if limit else "")
        if limit is not None and elapsed >= limit:
            ACCEPTANCE[number] = (False, "; ".join(note + [f"too slow: {timing}"]))
            pytest.fail(f"criterion {number} took {timing}")
        ACCEPTANCE[number] = (True, "; ".join(note + [timing]))
    except pytest.skip.Exception as exc:
        ACCEPTANCE[number] = (None, str(exc))
        raise
    except BaseException as exc:
        if number not in ACCEPTANCE:
            ACCEPTANCE[number] = (False, "; ".join(note + [f"{type(exc).__name__}: {exc}"])[:300])
        raise


def test_1_barcan_profile(capsys):
    with criterion(1, limit=30) as note:
        for sem in ("decreasing", "constant", "cumulative", "varying"):
            path = str(FIXTURES / f"example1_{sem}.p")
            assert main(["embed", path]) == 0
            capsys.readouterr()
            verdict = decide_bounded(parse_problem(read_fixture(f"example1_{sem}.p")),
                                     Bounds(max_worlds=3, max_domain=3))
            if sem in ("decreasing", "constant"):
                assert isinstance(verdict, NoCountermodelWithinBounds), sem
                note.append(f"{sem}: none in {verdict.models_checked} models")
            else:
                assert isinstance(verdict, Countermodel), sem
                assert verdict.model.worlds <= 2
                assert all(size <= 2 for size in verdict.model.domains.values())
                note.append(f"{sem}: countermodel, {verdict.model.worlds} worlds")
            assert main(["check", "--max-worlds", "3", "--max-domain", "3", path]) == 0
            out = capsys.readouterr().out
            expected = "NoCountermodelWithinBounds" if sem in ("decreasing", "constant") \
                else "Countermodel"
            assert out.splitlines()[0] == f"RESULT: {expected}"


def test_2_frame_correspondence():
    with criterion(2, limit=10) as note:
        total = 0
        for scheme in SCHEME_INSTANCES:
            checked, mismatches = correspondence_mismatches(scheme)
            assert checked == 512
            assert mismatches == 0, scheme
            total += mismatches
        note.append(f"7 schemes x 512 relations, {total} mismatches")


def _faithful(spec: str, formulas, bounds: Bounds):
    p = problem_with(spec, formulas)
    report = check_faithfulness(p, embed_problem(p), bounds)
    assert not report.disagreements, report.disagreements[0]
    assert not report.axiom_violations, report.axiom_violations[0]
    assert report.comparisons > 0
    return report


def test_3_modal_hybrid_faithfulness():
    with criterion(3, limit=60) as note:
        rng = random.Random(2024)
        modal = [modal_formula(rng, 3, atoms=3) for _ in range(1000)]
        r1 = _faithful("tff(s, logic, $modal == [$modalities == $modal_system_K]).", modal,
                       Bounds(max_worlds=3))
        hybrid = [hybrid_formula(rng, 4) for _ in range(200)]
        hybrid_ops = {c.name for f in hybrid for c in subterms(f) if isinstance(c, Connective)}
        assert {"$$nominal", "$$shift", "$$bind"} <= hybrid_ops
        r2 = _faithful("tff(s, logic, $$hybrid == [$modalities == $modal_system_K]).", hybrid,
                       Bounds(max_worlds=3))
        note.append(f"1000 modal over {r1.models} models, 200 hybrid over {r2.models} models, "
                    "0 disagreements")


def test_4_pal_faithfulness():
    with criterion(4, limit=60) as note:
        rng = random.Random(77)
        pal = [pal_formula(rng, 3, atoms=2, agents=("a", "b"), announce_depth=2)
               for _ in range(500)]
        report = _faithful("tff(s, logic, $$pal == []).", pal, Bounds(max_worlds=3))
        announce = parse_problem(read_fixture("pal_announce.p"))
        verdict = decide_bounded(announce, Bounds(max_worlds=3))
        assert isinstance(verdict, NoCountermodelWithinBounds)
        note.append(f"500 PAL formulas over {report.models} models, 0 disagreements; "
                    "[!p]K_a p: no countermodel")


def test_5_ddl():
    with criterion(5, limit=30) as note:
        verdict = decide_bounded(parse_problem(read_fixture("example3_ddl.p")),
                                 Bounds(max_worlds=3))
        assert isinstance(verdict, NoCountermodelWithinBounds)
        rng = random.Random(5150)
        obl = []
        while len(obl) < 500:
            f = ddl_formula(rng, 2)
            if any(isinstance(c, Connective) for c in subterms(f)):
                obl.append(f)
        report = _faithful("tff(s, logic, $$ddl == [$$system == $$aqvistE]).", obl,
                           Bounds(max_worlds=3))
        assert known_good_failures() == []
        assert known_bad_failures() == []
        for n in (1, 2):
            assert ob_table_mismatches(n) == []
        note.append(f"example 3: none in {verdict.models_checked} models; 500 obl formulas over "
                    f"{report.models} models; ob-table suite ok")


def test_6_pipeline(capsys):
    with criterion(6) as note:
        assert main(["embed", str(FIXTURES / "no_spec.p")]) == 0
        out = capsys.readouterr().out
        assert parse_problem(out) == parse_problem(read_fixture("no_spec.p"))
        for fixture, reason in (("ambiguous.p", "AMBIGUOUS_LOGIC_SPEC"),
                                ("unknown_logic.p", "UNSUPPORTED_LOGIC"),
                                ("flexible.p", "UNSUPPORTED_PARAMETER")):
            assert main(["embed", str(FIXTURES / fixture)]) == 1
            err = capsys.readouterr().err
            assert err.startswith(f"error: {reason}:")
            assert main(["embed", "--tstp", str(FIXTURES / fixture)]) == 1
            out = capsys.readouterr().out.splitlines()
            assert out[0] == "% SZS status Error"
            assert out[1].startswith(f"% REASON: {reason}:")
        note.append("pass-through, AMBIGUOUS_LOGIC_SPEC, UNSUPPORTED_LOGIC, UNSUPPORTED_PARAMETER")


def test_7_registry_count():
    with criterion(7) as note:
        configs = set(enumerate_modal_configs())
        assert len(configs) >= 60
        note.append(f"{len(configs)} configurations")


def test_8_round_trip():
    with criterion(8) as note:
        files = sorted(CORPUS.glob("*.p"))
        assert len(files) >= 20
        connectives, ops, languages = set(), set(), set()
        indices = params = quantifiers = False
        for path in files:
            problem = parse_problem(path.read_text())
            printed = print_problem(problem)
            assert parse_problem(printed) == problem, path.name
            for f in problem.formulas:
                languages.add(f.language)
                if isinstance(f.content, TypeDecl):
                    continue
                for t in subterms(f.content):
                    if isinstance(t, Connective):
                        connectives.add(t.name)
                        indices |= bool(t.indices)
                        params |= bool(t.params)
                    elif isinstance(t, Binary):
                        ops.add(t.op)
                    elif isinstance(t, Quant):
                        quantifiers = True
        assert {"$box", "$dia", "$$nominal", "$$shift", "$$bind", "$$knows", "$$common",
                "$$announce", "$$obl"} <= connectives
        assert {"&", "|", "=>", "<=", "<=>", "<~>", "~|", "~&", "=", "!="} <= ops
        assert {"tff", "thf"} <= languages and indices and params and quantifiers
        for corpus_name, fixture in (("01_example1_barcan.p", "example1_decreasing.p"),
                                     ("02_example2_hybrid.p", "example2_hybrid.p"),
                                     ("03_example3_ctd.p", "example3_ddl.p")):
            assert (CORPUS / corpus_name).read_text() == read_fixture(fixture)
        note.append(f"{len(files)} problems, {len(connectives)} connectives, "
                    f"{len(ops)} binary operators")


PROVERS = {
    "leo3": lambda f: ["leo3", f, "-t", "30"],
    "vampire": lambda f: ["vampire", "--mode", "casc", "-t", "30", f],
    "eprover-ho": lambda f: ["eprover-ho", "--auto", "-s", "--cpu-limit=30", f],
    "satallax": lambda f: ["satallax", "-t", "30", f],
}


def test_9_prover_smoke(tmp_path):
    with criterion(9) as note:
        found = [name for name in PROVERS if shutil.which(name)]
        if not found:
            pytest.skip("no THF-capable prover on PATH (optional, non-gating)")
        name = found[0]
        statuses = {}
        for sem in ("decreasing", "cumulative"):
            target = tmp_path / f"{sem}.p"
            p = parse_problem(read_fixture(f"example1_{sem}.p"))
            target.write_text(print_problem(embed_problem(p)))
            out = subprocess.run(PROVERS[name](str(target)), capture_output=True, text=True,
                                 timeout=120).stdout
            line = next((ln for ln in out.splitlines() if "SZS status" in ln), "")
            statuses[sem] = line.split("SZS status", 1)[1].split()[0] if line else "none"
        note.append(f"{name}: decreasing {statuses['decreasing']}, "
                    f"cumulative {statuses['cumulative']}")
        assert statuses["decreasing"] == "Theorem"
        assert statuses["cumulative"] == "CounterSatisfiable"
