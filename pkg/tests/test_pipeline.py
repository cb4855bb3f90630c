"""End-to-end case evaluation over the hermetic corpus."""

import dataclasses
import json

import pytest

from decompeval.pipeline import (
    CORRECT_CATEGORIES,
    RECOMPILABLE_CATEGORIES,
    CaseKey,
    CaseResult,
    CorruptRecord,
    OutcomeCategory,
    ProjectLayout,
    ResultSet,
    TestMap,
    VersionMismatch,
    enumerate_cases,
    evaluate_case,
    evaluate_matrix,
    resultset_load,
    resultset_store,
)
from tests.conftest import FIXTURES, load_expected

PROJECTS = ("foo", "inner", "overload", "singleton", "utils")
COMPILERS = ("ecj", "javac")
DECOMPILERS = ("crash", "identity", "mutant", "syntaxbreak")


def _unit(project):
    layout_units = {
        "foo": "Foo.java", "inner": "Outer.java", "overload": "Rules.java",
        "singleton": "Server.java", "utils": "Utils.java",
    }
    return layout_units[project]


def _key(project, compiler="javac", decompiler="identity"):
    return CaseKey(project, _unit(project), compiler, decompiler)


@pytest.mark.parametrize("decompiler", DECOMPILERS)
@pytest.mark.parametrize("project", PROJECTS)
def test_case_category_matches_corpus_expectation(hermetic_context, project,
                                                  decompiler):
    _, ctx = hermetic_context
    expected = load_expected(project)[decompiler]
    result = evaluate_case(_key(project, "javac", decompiler), ctx)
    assert result.category is OutcomeCategory(expected)


def test_empty_output_skips_all_later_stages(hermetic_context):
    _, ctx = hermetic_context
    result = evaluate_case(_key("foo", decompiler="crash"), ctx)
    assert result.category is OutcomeCategory.EMPTY_OUTPUT
    assert result.distortion is None
    assert result.bytecode_report is None
    assert result.test_verdict is None


def test_syntax_break_scores_no_distortion_and_skips_tests(hermetic_context):
    _, ctx = hermetic_context
    result = evaluate_case(_key("utils", decompiler="syntaxbreak"), ctx)
    assert result.category is OutcomeCategory.SYNTACTICALLY_INCORRECT
    # output exists but does not parse, so no distortion either
    assert result.distortion is None
    assert result.test_verdict is None


def test_strict_equivalence_short_circuits_tests(hermetic_context):
    _, ctx = hermetic_context
    result = evaluate_case(_key("utils"), ctx)
    assert result.category is OutcomeCategory.STRICTLY_EQUIVALENT
    assert result.bytecode_report is not None and result.bytecode_report.equal
    assert result.test_verdict is None
    assert result.distortion is not None
    assert result.distortion.counted_edits == 0


def test_force_tests_still_reports_strict_equivalence(hermetic_context):
    _, ctx = hermetic_context
    ctx.force_tests = True
    result = evaluate_case(_key("utils"), ctx)
    assert result.category is OutcomeCategory.STRICTLY_EQUIVALENT
    assert result.test_verdict is not None
    assert result.test_verdict.status == "passed"


def test_deceptive_case_names_failing_tests(hermetic_context):
    _, ctx = hermetic_context
    result = evaluate_case(_key("utils", decompiler="mutant"), ctx)
    assert result.category is OutcomeCategory.DECEPTIVE
    assert not result.bytecode_report.equal
    assert result.test_verdict.status == "failed"
    assert "UtilsTest.testBadDigitMessage" in result.test_verdict.failing_ids


def test_behavior_preserving_mutant_passes_tests(hermetic_context):
    _, ctx = hermetic_context
    result = evaluate_case(_key("foo", decompiler="mutant"), ctx)
    assert result.category is OutcomeCategory.EQUIVALENT_MODULO_INPUTS
    assert result.distortion is not None and result.distortion.counted_edits > 0


def test_untested_unit_is_not_tested(hermetic_context):
    _, ctx = hermetic_context
    result = evaluate_case(_key("inner", decompiler="mutant"), ctx)
    assert result.category is OutcomeCategory.NOT_TESTED
    assert result.test_verdict is None


def test_recompilable_categories_carry_bytecode_report(hermetic_context):
    _, ctx = hermetic_context
    for decompiler in ("identity", "mutant"):
        for project in PROJECTS:
            result = evaluate_case(_key(project, "javac", decompiler), ctx)
            assert result.category in RECOMPILABLE_CATEGORIES
            assert result.bytecode_report is not None


def test_infrastructure_error_for_unknown_source(hermetic_context, tmp_path):
    from decompeval.pipeline import InfrastructureError

    _, ctx = hermetic_context
    src = tmp_path / "proj" / "src"
    src.mkdir(parents=True)
    (src / "Nope.java").write_text("class Nope {}\n")
    ctx.projects["ghost"] = ProjectLayout(
        id="ghost", source_root=src, units=("Nope.java",),
        testmap=TestMap(units={}))
    with pytest.raises(InfrastructureError):
        evaluate_case(CaseKey("ghost", "Nope.java", "javac", "identity"), ctx)


def test_matrix_matches_expected_and_is_deterministic(hermetic_context):
    _, ctx = hermetic_context
    first = evaluate_matrix(ctx, COMPILERS, DECOMPILERS, parallelism=4)
    assert len(first.results) == len(PROJECTS) * len(COMPILERS) * len(DECOMPILERS)
    assert not first.errors
    for result in first.results:
        expected = load_expected(result.key.project)[result.key.decompiler]
        assert result.category is OutcomeCategory(expected), result.key

    second = evaluate_matrix(ctx, COMPILERS, DECOMPILERS, parallelism=1)
    assert ([(r.key, r.category) for r in first.results]
            == [(r.key, r.category) for r in second.results])


def test_matrix_caching_off_same_categories(hermetic_context):
    _, ctx = hermetic_context
    ctx.caching = False
    cases = [_key(p) for p in ("foo", "utils")]
    out = evaluate_matrix(ctx, COMPILERS, DECOMPILERS, cases=cases)
    assert {r.category for r in out.results} == {OutcomeCategory.STRICTLY_EQUIVALENT}


def test_matrix_records_infrastructure_errors_and_continues(hermetic_context,
                                                            tmp_path):
    _, ctx = hermetic_context
    src = tmp_path / "proj" / "src"
    src.mkdir(parents=True)
    (src / "Nope.java").write_text("class Nope {}\n")
    ctx.projects["ghost"] = ProjectLayout(
        id="ghost", source_root=src, units=("Nope.java",),
        testmap=TestMap(units={}))
    cases = [_key("foo"), CaseKey("ghost", "Nope.java", "javac", "identity")]
    out = evaluate_matrix(ctx, ("javac",), ("identity",), cases=cases)
    assert len(out.results) == 1
    assert len(out.errors) == 1
    assert out.errors[0][0].project == "ghost"


def test_resume_skips_completed_cases(hermetic_context, tmp_path):
    _, ctx = hermetic_context
    path = tmp_path / "results.jsonl"
    all_cases = enumerate_cases(
        [ctx.projects[p] for p in sorted(ctx.projects)], COMPILERS, DECOMPILERS)
    half = all_cases[: len(all_cases) // 2]

    evaluate_matrix(ctx, COMPILERS, DECOMPILERS, cases=half, results_path=path)
    lines_after_half = path.read_text().count("\n")

    resumed = evaluate_matrix(ctx, COMPILERS, DECOMPILERS, results_path=path)
    full = evaluate_matrix(ctx, COMPILERS, DECOMPILERS)
    assert ([(r.key, r.category) for r in resumed.results]
            == [(r.key, r.category) for r in full.results])
    # resumed run appended only the missing cases
    assert path.read_text().count("\n") == lines_after_half + (
        len(all_cases) - len(half))


def test_resume_rejects_foreign_config_hash(hermetic_context, tmp_path):
    _, ctx = hermetic_context
    path = tmp_path / "results.jsonl"
    evaluate_matrix(ctx, ("javac",), ("identity",),
                    cases=[_key("foo")], results_path=path)
    ctx.config_hash = "somethingelse"
    with pytest.raises(VersionMismatch):
        evaluate_matrix(ctx, ("javac",), ("identity",), results_path=path)


def test_resultset_round_trip(hermetic_context, tmp_path):
    _, ctx = hermetic_context
    out = evaluate_matrix(ctx, ("javac",), DECOMPILERS,
                          cases=[_key("foo", "javac", d) for d in DECOMPILERS])
    path = tmp_path / "store.jsonl"
    resultset_store(out, path)
    loaded = resultset_load(path)
    assert loaded.config_hash == out.config_hash
    assert loaded.by_key().keys() == out.by_key().keys()
    for key, result in out.by_key().items():
        again = loaded.by_key()[key]
        assert again.category is result.category
        assert again.distortion == result.distortion
        assert again.test_verdict == result.test_verdict


def test_corrupt_record_reports_line_number(tmp_path):
    path = tmp_path / "broken.jsonl"
    header = json.dumps({"format": 1, "config_hash": "x"})
    path.write_text(header + "\n{\"type\": \"result\", truncated\n")
    with pytest.raises(CorruptRecord) as excinfo:
        resultset_load(path)
    assert excinfo.value.line_number == 2


def test_version_mismatch_on_format_bump(tmp_path):
    path = tmp_path / "future.jsonl"
    path.write_text(json.dumps({"format": 99, "config_hash": "x"}) + "\n")
    with pytest.raises(VersionMismatch):
        resultset_load(path)


def test_case_key_slug_and_ordering():
    key = CaseKey("proj", "pkg/Sub.java", "javac", "cfr")
    assert key.slug == "proj--pkg__Sub--javac--cfr"
    assert CaseKey("a", "A.java", "c", "d") < CaseKey("b", "A.java", "c", "d")


def test_testmap_exclusion():
    tm = TestMap.from_dict({"A.java": ["T.a", "T.b"], "exclude": ["T.b"]})
    assert tm.tests_for("A.java") == ("T.a",)
    assert tm.tests_for("Missing.java") == ()


def test_category_sets_are_consistent():
    assert CORRECT_CATEGORIES < RECOMPILABLE_CATEGORIES
    assert OutcomeCategory.EMPTY_OUTPUT not in RECOMPILABLE_CATEGORIES
    assert OutcomeCategory.SYNTACTICALLY_INCORRECT not in RECOMPILABLE_CATEGORIES
