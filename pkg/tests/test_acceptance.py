"""Acceptance gate: one test (one pass/fail line under pytest -v) per
top-level guarantee of the harness.

Run with `pytest -v tests/test_acceptance.py` to get the per-criterion
checklist. Every test here is self-contained and uses independent
oracles (scipy, brute-force search, hand counts) rather than the
implementation under test.
"""

import json
import random
import shutil
import time
from pathlib import Path

import pytest

from decompeval.classfile import (
    identity_permutation,
    normalize,
    parse_class,
    permute_constant_pool,
    random_permutation,
    serialize_class,
)
from decompeval.multidc import multi_decompile, rank_decompilers
from decompeval.pipeline import (
    RECOMPILABLE_CATEGORIES,
    OutcomeCategory,
    evaluate_matrix,
)
from decompeval.report import chi_squared_2x2
from decompeval.srcdiff import SourceTree, diff_trees, distortion_between, parse_source
from oracle_diff import (
    count_nodes,
    enumerate_shapes,
    min_edit_distance,
    neighbors,
    realize,
    signature,
)
from tests.conftest import CONFIG, FIXTURES, load_expected

COMPILERS = ("ecj", "javac")
DECOMPILERS = ("crash", "identity", "mutant", "syntaxbreak")
UNITS = {
    "foo": "Foo.java", "inner": "Outer.java", "overload": "Rules.java",
    "singleton": "Server.java", "utils": "Utils.java",
}


def _fresh_context(tmp_path, name="run"):
    from decompeval.config import RunConfig

    config = RunConfig.load(CONFIG)
    return config.to_run_context(run_root=tmp_path / name)


def test_criterion_1_permutation_invariance(committed_binaries):
    """100 random constant-pool permutations per committed binary leave
    the normalized form unchanged; whole sweep under 30 seconds."""
    started = time.monotonic()
    rng = random.Random(45821)
    failures = []
    for path in committed_binaries:
        raw = path.read_bytes()
        parsed = parse_class(raw)
        baseline = normalize(parsed)
        for _ in range(100):
            perm = random_permutation(parsed.pool, rng)
            shuffled = permute_constant_pool(parsed, perm)
            if normalize(parse_class(serialize_class(shuffled))) != baseline:
                failures.append(path.name)
                break
    elapsed = time.monotonic() - started
    assert not failures, failures
    assert elapsed < 30, f"sweep took {elapsed:.1f}s"


def test_criterion_2_round_trip_byte_identity(committed_binaries):
    """serialize(parse(bytes)) is byte-identical for every committed binary."""
    for path in committed_binaries:
        raw = path.read_bytes()
        assert serialize_class(parse_class(raw)) == raw, path


def test_criterion_3_distortion_worked_example():
    """The canonical while/try rewrite scores exactly 3 counted edits
    over 104 original nodes."""
    original = parse_source((FIXTURES / "foo" / "src" / "Foo.java").read_text())
    rewritten = parse_source(
        (FIXTURES / "foo" / "variants" / "mutant" / "Foo.java").read_text())
    score = distortion_between(original, rewritten)
    assert score.counted_edits == 3
    assert score.original_nodes == 104
    assert score.ratio == pytest.approx(3 / 104)


def test_criterion_4_diff_optimality_small_scale():
    """On a deterministic family of small tree pairs (every ordered tree
    shape up to 8 nodes; pairs 1 or 2 edit actions apart) the diff's
    script length equals the brute-force minimum. Dense coverage at <= 4
    nodes, stride-sampled labelings and neighbors above that to stay
    inside the runtime budget."""
    started = time.monotonic()
    shapes = enumerate_shapes(8)
    checked = 0

    def heuristic(src, dst):
        return diff_trees(SourceTree.of(src), SourceTree.of(dst)).edit_count

    # single-edit pairs: truth is exactly 1 whenever shapes differ.
    # Coverage is dense where diffs are cheap and stride-sampled where the
    # exact search gets expensive (per-pair cost grows ~50x from 5 to 8
    # nodes), keeping the sweep inside the runtime budget.
    shape_index = 0
    for shape in shapes:
        shape_index += 1
        n = count_nodes(shape)
        if n <= 4:
            labelings = range(2 ** n)  # every kind assignment
            stride = 1
        elif n == 5:
            labelings = range(0, 2 ** n, 5)
            stride = 1
        elif n == 6:
            labelings = (int("10" * n, 2) % (2 ** n),)  # alternating kinds
            stride = 3
        elif n == 7:
            labelings = (int("10" * n, 2) % (2 ** n),)
            stride = 10
        else:
            if shape_index % 5:
                continue
            labelings = (int("10" * n, 2) % (2 ** n),)
            stride = 20
        for bits in labelings:
            base = realize(shape, bits)
            base_sig = signature(base)
            for dst in neighbors(base)[::stride]:
                if signature(dst) == base_sig:
                    continue
                assert heuristic(base, dst) == 1, (base_sig, signature(dst))
                checked += 1

    # double-edit pairs: verify against the brute-force minimum (0..2)
    rng = random.Random(771)
    for shape in shapes:
        if count_nodes(shape) > 5:
            continue
        base = realize(shape, rng.randrange(2 ** count_nodes(shape)))
        firsts = neighbors(base)
        for first in firsts[:: max(1, len(firsts) // 4)]:
            seconds = neighbors(first)
            for dst in (seconds[rng.randrange(len(seconds))] for _ in range(3)):
                truth = min_edit_distance(base, dst, limit=2)
                assert truth is not None and truth <= 2
                assert heuristic(base, dst) == truth, (
                    signature(base), signature(dst))
                checked += 1

    elapsed = time.monotonic() - started
    assert checked > 10000, checked
    assert elapsed < 120, f"family took {elapsed:.1f}s"


def test_criterion_5_cascade_classification(tmp_path):
    """The hermetic stub matrix lands every case in its expected category,
    exercises all five interesting categories, and is deterministic
    across three fresh runs."""
    interesting = {
        OutcomeCategory.EMPTY_OUTPUT, OutcomeCategory.SYNTACTICALLY_INCORRECT,
        OutcomeCategory.DECEPTIVE, OutcomeCategory.STRICTLY_EQUIVALENT,
        OutcomeCategory.EQUIVALENT_MODULO_INPUTS,
    }
    snapshots = []
    for i in range(3):
        ctx = _fresh_context(tmp_path, f"run{i}")
        results = evaluate_matrix(ctx, COMPILERS, DECOMPILERS, parallelism=4)
        assert not results.errors
        snapshots.append([(r.key, r.category) for r in results.results])

    assert snapshots[0] == snapshots[1] == snapshots[2]
    categories = set()
    for key, category in snapshots[0]:
        expected = load_expected(key.project)[key.decompiler]
        assert category is OutcomeCategory(expected), key
        categories.add(category)
    assert interesting <= categories


def test_criterion_6_multidc_dominance(tmp_path, full_matrix):
    """The meta-decompiler recompiles a unit exactly when at least one
    ranked decompiler does (set equality, not just inclusion)."""
    ctx = _fresh_context(tmp_path)
    ranking = rank_decompilers(full_matrix)
    union = {
        (r.key.project, r.key.unit, r.key.compiler)
        for r in full_matrix.results if r.category in RECOMPILABLE_CATEGORIES
    }
    multi = set()
    for project, unit in UNITS.items():
        for compiler in COMPILERS:
            out = multi_decompile(project, unit, compiler, ranking, ctx)
            if out.result.category in RECOMPILABLE_CATEGORIES:
                multi.add((project, unit, compiler))
    assert multi == union


def test_criterion_7_chi_squared_oracle():
    """Statistic and p-value agree with scipy to 1e-6 relative on the
    reference tables; row symmetry and linear scaling hold."""
    from scipy.stats import chi2_contingency

    tables = [
        [[1609, 278], [1532, 355]],
        [[10, 0], [0, 10]],
        [[120, 30], [95, 55]],
    ]
    for table in tables:
        statistic, p = chi_squared_2x2(table)
        expected = chi2_contingency(table, correction=False)
        assert statistic == pytest.approx(expected.statistic, rel=1e-6)
        assert p == pytest.approx(expected.pvalue, rel=1e-6)

    statistic, _ = chi_squared_2x2([[1609, 278], [1532, 355]])
    assert statistic == pytest.approx(11.25, abs=0.01)

    rng = random.Random(7)
    for _ in range(50):
        a, b, c, d = (rng.randrange(1, 2000) for _ in range(4))
        s1, p1 = chi_squared_2x2([[a, b], [c, d]])
        s2, p2 = chi_squared_2x2([[c, d], [a, b]])
        assert s1 == pytest.approx(s2, rel=1e-9)
        assert p1 == pytest.approx(p2, rel=1e-9)
        k = rng.randrange(2, 10)
        s3, _ = chi_squared_2x2([[k * a, k * b], [k * c, k * d]])
        assert s3 == pytest.approx(k * s1, rel=1e-9)


def test_criterion_8_summary_transcription():
    """A synthetic ResultSet carrying the published per-decompiler counts
    reproduces every printed ratio to 2 decimals under the documented
    denominators (all units for recompilable, covered units for pass)."""
    from test_report import STUDY_COUNTS, STUDY_COVERED, STUDY_UNITS, study_resultset
    from decompeval.report import aggregate

    rows = {r.decompiler: r for r in aggregate(study_resultset())}
    for decompiler, (recomp, n_pass, n_dec, r_ratio, p_ratio) in STUDY_COUNTS.items():
        row = rows[decompiler]
        assert row.n_recompilable == recomp
        assert row.n_pass_tests == n_pass
        assert row.n_deceptive == n_dec
        assert f"{row.n_recompilable / STUDY_UNITS:.2f}" == r_ratio
        assert f"{row.recompilable_ratio:.2f}" == r_ratio
        assert f"{row.n_pass_tests / STUDY_COVERED:.2f}" == p_ratio


def test_criterion_9_resume_soundness(tmp_path):
    """Interrupting a matrix run at a random point and resuming yields a
    results file identical to an uninterrupted run, timings aside."""
    from decompeval.pipeline import enumerate_cases, resultset_load

    rng = random.Random(20260826)
    ctx = _fresh_context(tmp_path, "interrupted")
    cases = enumerate_cases([ctx.projects[p] for p in sorted(ctx.projects)],
                            COMPILERS, DECOMPILERS)
    cut = rng.randrange(1, len(cases))
    path = tmp_path / "interrupted.jsonl"
    # simulated kill: only the first `cut` cases make it to disk
    evaluate_matrix(ctx, COMPILERS, DECOMPILERS, cases=cases[:cut],
                    results_path=path)
    evaluate_matrix(ctx, COMPILERS, DECOMPILERS, results_path=path)

    ctx2 = _fresh_context(tmp_path, "straight")
    straight_path = tmp_path / "straight.jsonl"
    evaluate_matrix(ctx2, COMPILERS, DECOMPILERS, results_path=straight_path)

    def comparable(p):
        out = []
        for r in resultset_load(p).results:
            record = r.to_dict()
            record.pop("timings")
            record.pop("diagnostics")  # holds per-run log paths
            out.append(record)
        return out

    assert comparable(path) == comparable(straight_path)


def test_secondary_fixture_corpus_verifies_on_jdk():
    """With a real JDK the committed fixture binaries and tests check out;
    without one this cannot be asserted and is skipped, not faked."""
    if shutil.which("javac") is None:
        pytest.skip("no JDK on PATH; corpus verification needs javac")
    from decompeval.fixtures import fixture_verify

    report_lines, ok = fixture_verify(FIXTURES)
    assert ok, "\n".join(report_lines)
