"""Aggregation, chi-squared analysis and artifact emission."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decompeval.pipeline import (
    CaseKey,
    CaseResult,
    OutcomeCategory,
    ResultSet,
    evaluate_matrix,
)
from decompeval.report import (
    SUMMARY_COLUMNS,
    ChiSquareResult,
    CoveragePartition,
    DegenerateTable,
    UnsupportedFormat,
    aggregate,
    chi_squared_2x2,
    chi_squared_compiler_effect,
    coverage_partition,
    deceptive_attribution,
    emit_summary,
    gamma_q,
)

COMPILERS = ("ecj", "javac")
DECOMPILERS = ("crash", "identity", "mutant", "syntaxbreak")

# Published per-decompiler counts from a large-scale decompiler study,
# kept here as a transcription fixture. Recompilable counts are rated
# over all 3928 units; pass counts over the 2397 test-covered units.
STUDY_COUNTS = {
    # decompiler: (recompilable, pass, deceptive, printed ratios)
    "procyon": (3281, 1869, 33, "0.84", "0.78"),
    "cfr": (3097, 1713, 22, "0.79", "0.71"),
    "fernflower": (2663, 1435, 21, "0.68", "0.60"),
    "jadx": (2736, 1408, 78, "0.70", "0.59"),
    "jdcore": (2726, 1375, 82, "0.69", "0.57"),
    "jode": (2569, 1161, 142, "0.65", "0.48"),
    "dava": (1747, 762, 36, "0.44", "0.32"),
    "krakatau": (1746, 724, 97, "0.44", "0.30"),
}
STUDY_UNITS = 3928
STUDY_COVERED = 2397


def _case(unit, decompiler, category, compiler="javac", project="p"):
    return CaseResult(CaseKey(project, unit, compiler, decompiler), category)


def study_resultset():
    """Synthetic ResultSet realizing the transcription counts exactly."""
    results = []
    for decompiler, (recomp, n_pass, n_dec, _, _) in STUDY_COUNTS.items():
        n = 0

        def emit(count, category):
            nonlocal n
            for _ in range(count):
                results.append(_case(f"U{n}.java", decompiler, category))
                n += 1

        emit(n_pass, OutcomeCategory.EQUIVALENT_MODULO_INPUTS)
        emit(n_dec, OutcomeCategory.DECEPTIVE)
        emit(recomp - n_pass - n_dec, OutcomeCategory.NOT_TESTED)
        emit(STUDY_UNITS - recomp, OutcomeCategory.SYNTACTICALLY_INCORRECT)
        assert n == STUDY_UNITS
    return ResultSet(results=tuple(results))


def test_transcribed_counts_reproduce_printed_ratios():
    rows = {r.decompiler: r for r in aggregate(study_resultset())}
    assert set(rows) == set(STUDY_COUNTS)
    for decompiler, (recomp, n_pass, n_dec, r_ratio, p_ratio) in STUDY_COUNTS.items():
        row = rows[decompiler]
        assert row.n_units == STUDY_UNITS
        assert row.n_recompilable == recomp
        assert row.n_pass_tests == n_pass
        assert row.n_deceptive == n_dec
        # recompilable is rated over all units
        assert f"{row.recompilable_ratio:.2f}" == r_ratio
        # pass is rated over covered units; the row exposes the raw count
        assert f"{row.n_pass_tests / STUDY_COVERED:.2f}" == p_ratio


def test_aggregate_stub_matrix(full_matrix):
    results = full_matrix
    rows = {r.decompiler: r for r in aggregate(results)}

    identity = rows["identity"]
    assert (identity.n_units, identity.n_recompilable, identity.n_pass_tests,
            identity.n_deceptive) == (10, 10, 10, 0)
    assert identity.recompilable_ratio == identity.pass_ratio == 1.0
    assert identity.distortion_mean == 0.0

    mutant = rows["mutant"]
    assert mutant.n_recompilable == 10  # recompiles everywhere
    assert mutant.n_pass_tests == 2  # the behavior-preserving rewrite, x2 compilers
    assert mutant.n_deceptive == 6
    assert mutant.distortion_mean > 0

    crash = rows["crash"]
    assert crash.n_recompilable == crash.n_pass_tests == crash.n_deceptive == 0
    assert crash.distortion_mean is None

    syntaxbreak = rows["syntaxbreak"]
    assert syntaxbreak.n_recompilable == 0


def test_category_conservation_per_decompiler(full_matrix):
    results = full_matrix
    for decompiler in DECOMPILERS:
        cases = [r for r in results.results if r.key.decompiler == decompiler]
        by_category = {c: 0 for c in OutcomeCategory}
        for r in cases:
            by_category[r.category] += 1
        assert sum(by_category.values()) == len(cases) == 10


# --- chi-squared -----------------------------------------------------------

ORACLE_TABLES = [
    [[1609, 278], [1532, 355]],
    [[10, 0], [0, 10]],
    [[120, 30], [95, 55]],
]


@pytest.mark.parametrize("table", ORACLE_TABLES)
def test_chi_squared_matches_scipy(table):
    from scipy.stats import chi2_contingency

    statistic, p = chi_squared_2x2(table)
    expected = chi2_contingency(table, correction=False)
    assert statistic == pytest.approx(expected.statistic, rel=1e-6)
    assert p == pytest.approx(expected.pvalue, rel=1e-6)


def test_chi_squared_known_values():
    statistic, p = chi_squared_2x2([[1609, 278], [1532, 355]])
    assert statistic == pytest.approx(11.254124, abs=1e-4)
    assert p == pytest.approx(7.9446e-4, rel=1e-3)
    statistic, p = chi_squared_2x2([[10, 0], [0, 10]])
    assert statistic == pytest.approx(20.0)
    assert p == pytest.approx(7.744e-6, rel=1e-3)


def test_chi_squared_identical_rows_is_null():
    statistic, p = chi_squared_2x2([[50, 50], [50, 50]])
    assert statistic == 0.0
    assert p == 1.0


def test_chi_squared_degenerate_margin():
    with pytest.raises(DegenerateTable):
        chi_squared_2x2([[0, 0], [5, 5]])
    with pytest.raises(DegenerateTable):
        chi_squared_2x2([[5, 0], [5, 0]])


cell = st.integers(min_value=1, max_value=2000)


@given(a=cell, b=cell, c=cell, d=cell)
@settings(max_examples=100, deadline=None)
def test_chi_squared_row_symmetry(a, b, c, d):
    s1, p1 = chi_squared_2x2([[a, b], [c, d]])
    s2, p2 = chi_squared_2x2([[c, d], [a, b]])
    assert s1 == pytest.approx(s2, rel=1e-12)
    assert p1 == pytest.approx(p2, rel=1e-9)


@given(a=cell, b=cell, c=cell, d=cell, k=st.integers(min_value=2, max_value=9))
@settings(max_examples=100, deadline=None)
def test_chi_squared_scales_linearly(a, b, c, d, k):
    s1, _ = chi_squared_2x2([[a, b], [c, d]])
    s2, _ = chi_squared_2x2([[k * a, k * b], [k * c, k * d]])
    assert s2 == pytest.approx(k * s1, rel=1e-9)


def test_gamma_q_matches_scipy():
    from scipy.special import gammaincc

    for a in (0.5, 1.0, 2.5, 10.0):
        for x in (0.01, 0.5, 1.0, 5.0, 25.0):
            assert gamma_q(a, x) == pytest.approx(gammaincc(a, x), rel=1e-9)


def test_compiler_effect_builds_table_from_results(hermetic_context):
    _, ctx = hermetic_context
    results = evaluate_matrix(ctx, COMPILERS, ("identity", "crash"), parallelism=4)
    # degenerate on stub data: identity recompiles everywhere for both compilers
    with pytest.raises(DegenerateTable):
        chi_squared_compiler_effect(results, "identity")


def test_compiler_effect_counts_and_statistic():
    results = []
    # javac: 8 recompilable of 10; ecj: 3 of 10
    for compiler, n_ok in (("javac", 8), ("ecj", 3)):
        for i in range(10):
            category = (OutcomeCategory.STRICTLY_EQUIVALENT if i < n_ok
                        else OutcomeCategory.EMPTY_OUTPUT)
            results.append(_case(f"U{i}.java", "d", category, compiler=compiler))
    out = chi_squared_compiler_effect(ResultSet(results=tuple(results)), "d")
    assert out.row_labels == ("ecj", "javac")
    assert out.counts == ((3, 7), (8, 2))
    statistic, p = chi_squared_2x2([[3, 7], [8, 2]])
    assert out.statistic == statistic and out.p_value == p


def test_compiler_effect_requires_two_compilers():
    results = (_case("U0.java", "d", OutcomeCategory.STRICTLY_EQUIVALENT),)
    with pytest.raises(DegenerateTable):
        chi_squared_compiler_effect(ResultSet(results=results), "d")


# --- coverage partition ----------------------------------------------------

def test_partition_stub_matrix(hermetic_context):
    _, ctx = hermetic_context
    results = evaluate_matrix(ctx, ("javac",), ("identity", "mutant"),
                              parallelism=4)
    partition = coverage_partition(results)
    # inner is untested, the other 4 units are split: foo's rewrite passes
    assert partition.total == 4
    assert partition.cells[frozenset({"identity"})] == 3
    assert partition.cells[frozenset({"identity", "mutant"})] == 1
    assert partition.none_handled() == 0
    assert partition.unique_counts() == {"identity": 3}


def test_partition_counts_sum_to_total(full_matrix):
    partition = coverage_partition(full_matrix)
    assert sum(partition.cells.values()) == partition.total


def test_partition_venn_transcription():
    """Synthetic corpus with 276 uniquely-handled, 589 all-handled and 157
    unhandled units out of 2397 covered units, six decompilers."""
    decompilers = ["d1", "d2", "d3", "d4", "d5", "d6"]
    results = []
    unit = 0

    def emit(count, handled_by):
        nonlocal unit
        for _ in range(count):
            for d in decompilers:
                category = (OutcomeCategory.EQUIVALENT_MODULO_INPUTS
                            if d in handled_by else OutcomeCategory.DECEPTIVE)
                results.append(_case(f"U{unit}.java", d, category))
            unit += 1

    for d in decompilers:
        emit(46, {d})  # 6 x 46 = 276 uniquely handled
    emit(589, set(decompilers))
    emit(157, set())
    emit(2397 - 276 - 589 - 157, {"d1", "d2"})

    partition = coverage_partition(ResultSet(results=tuple(results)))
    assert partition.total == 2397
    assert sum(partition.unique_counts().values()) == 276
    assert partition.all_handled(decompilers) == 589
    assert partition.none_handled() == 157
    emitted = partition.to_dict()
    assert emitted["total"] == 2397
    assert emitted["cells"]["(none)"] == 157
    assert emitted["cells"]["+".join(decompilers)] == 589


def test_partition_single_decompiler_has_two_cells():
    results = [
        _case("A.java", "d", OutcomeCategory.STRICTLY_EQUIVALENT),
        _case("B.java", "d", OutcomeCategory.DECEPTIVE),
    ]
    partition = coverage_partition(ResultSet(results=tuple(results)))
    assert partition.cells == {frozenset({"d"}): 1, frozenset(): 1}


# --- deceptive attribution -------------------------------------------------

def test_deceptive_attribution_stub_matrix(hermetic_context):
    _, ctx = hermetic_context
    results = evaluate_matrix(ctx, COMPILERS, ("mutant",), parallelism=4)
    out = deceptive_attribution(results)
    assert out["mutant"] == {"ecj-only": 0, "javac-only": 0, "both": 3}


def test_deceptive_attribution_single_compiler_case():
    results = [
        _case("A.java", "d", OutcomeCategory.DECEPTIVE, compiler="javac"),
        _case("A.java", "d", OutcomeCategory.STRICTLY_EQUIVALENT, compiler="ecj"),
    ]
    out = deceptive_attribution(ResultSet(results=tuple(results)))
    assert out["d"] == {"javac-only": 1, "ecj-only": 0, "both": 0}


def test_deceptive_attribution_no_deceptive_is_zero():
    results = [
        _case("A.java", "d", OutcomeCategory.STRICTLY_EQUIVALENT, compiler="javac"),
        _case("A.java", "d", OutcomeCategory.STRICTLY_EQUIVALENT, compiler="ecj"),
    ]
    out = deceptive_attribution(ResultSet(results=tuple(results)))
    assert set(out["d"].values()) == {0}


# --- emission ---------------------------------------------------------------

def test_emit_csv_columns_stable():
    rows = aggregate(study_resultset())
    lines = emit_summary(rows, "csv").splitlines()
    assert lines[0].split(",") == SUMMARY_COLUMNS
    assert all(line.count(",") == len(SUMMARY_COLUMNS) - 1 for line in lines)


def test_emit_json_round_trips():
    rows = aggregate(study_resultset())
    loaded = json.loads(emit_summary(rows, "json"))
    assert [r["decompiler"] for r in loaded] == [r.decompiler for r in rows]
    assert loaded[0]["n_recompilable"] == rows[0].n_recompilable


def test_emit_markdown_layout(hermetic_context):
    _, ctx = hermetic_context
    results = evaluate_matrix(ctx, ("javac",), ("identity",), parallelism=4)
    text = emit_summary(aggregate(results), "markdown")
    assert text.splitlines()[0].startswith("| Decompiler |")
    assert "| identity | 5 (1.00) | 5 (1.00) | 0 | 0.00 |" in text


def test_emit_unknown_format():
    with pytest.raises(UnsupportedFormat):
        emit_summary([], "xml")
