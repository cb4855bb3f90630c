"""Four-layer evaluation cascade over ⟨project, unit, compiler, decompiler⟩ cases.

Each case runs compile → decompile → recompile → test and lands in exactly
one outcome category. Intermediate artifacts (original class files,
decompiler output) are cached per prefix so a matrix run never repeats
work, and finished cases are appended to a JSON-lines results file so an
interrupted run resumes where it stopped.
"""

from __future__ import annotations

import enum
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .classfile import parse_class
from .classfile.normalize import (
    DEFAULT_IGNORED_ATTRIBUTES,
    Difference,
    EquivalenceReport,
    normalize,
    strict_equivalence,
)
from .srcdiff import ParseError, diff_trees, distortion, parse_source
from .srcdiff.distortion import DistortionScore
from .toolchain import TestVerdict, ToolSpec, compile_sources, decompile, recompile, run_tests

RESULT_FORMAT_VERSION = 1


class InfrastructureError(Exception):
    """The compiler failed on the ORIGINAL sources; the case is excluded."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key
        self.message = message


class VersionMismatch(Exception):
    """A results file was written by a different format version."""


class CorruptRecord(Exception):
    """A results file line cannot be decoded."""

    def __init__(self, line_number, reason):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number


class OutcomeCategory(enum.Enum):
    EMPTY_OUTPUT = "EmptyOutput"
    SYNTACTICALLY_INCORRECT = "SyntacticallyIncorrect"
    DECEPTIVE = "Deceptive"
    EQUIVALENT_MODULO_INPUTS = "EquivalentModuloInputs"
    STRICTLY_EQUIVALENT = "StrictlyEquivalent"
    TEST_TIMEOUT = "TestTimeout"
    NOT_TESTED = "NotTested"


# categories implying a successful recompilation
RECOMPILABLE_CATEGORIES = frozenset({
    OutcomeCategory.DECEPTIVE,
    OutcomeCategory.EQUIVALENT_MODULO_INPUTS,
    OutcomeCategory.STRICTLY_EQUIVALENT,
    OutcomeCategory.TEST_TIMEOUT,
    OutcomeCategory.NOT_TESTED,
})

# categories counting as semantically correct for ranking and coverage
CORRECT_CATEGORIES = frozenset({
    OutcomeCategory.EQUIVALENT_MODULO_INPUTS,
    OutcomeCategory.STRICTLY_EQUIVALENT,
})


@dataclass(frozen=True, order=True)
class CaseKey:
    project: str
    unit: str
    compiler: str
    decompiler: str

    def to_dict(self) -> dict:
        return {"project": self.project, "unit": self.unit,
                "compiler": self.compiler, "decompiler": self.decompiler}

    @staticmethod
    def from_dict(data: dict) -> "CaseKey":
        return CaseKey(data["project"], data["unit"],
                       data["compiler"], data["decompiler"])

    @property
    def slug(self) -> str:
        unit = self.unit.replace("/", "__").removesuffix(".java")
        return f"{self.project}--{unit}--{self.compiler}--{self.decompiler}"


@dataclass(frozen=True)
class TestMap:
    """Source unit → covering test ids, with a global exclusion list."""

    units: dict
    exclude: frozenset = frozenset()

    def tests_for(self, unit: str) -> tuple:
        return tuple(t for t in self.units.get(unit, ()) if t not in self.exclude)

    @staticmethod
    def from_dict(data: dict) -> "TestMap":
        exclude = frozenset(data.get("exclude", ()))
        units = {unit: tuple(ids) for unit, ids in data.items() if unit != "exclude"}
        return TestMap(units=units, exclude=exclude)

    @staticmethod
    def load(path) -> "TestMap":
        return TestMap.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class CaseResult:
    key: CaseKey
    category: OutcomeCategory
    distortion: DistortionScore | None = None
    bytecode_report: EquivalenceReport | None = None
    test_verdict: TestVerdict | None = None
    timings: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "key": self.key.to_dict(),
            "category": self.category.value,
            "distortion": self.distortion.to_dict() if self.distortion else None,
            "bytecode_report": (self.bytecode_report.to_dict()
                                if self.bytecode_report else None),
            "test_verdict": self.test_verdict.to_dict() if self.test_verdict else None,
            "timings": dict(self.timings),
            "diagnostics": dict(self.diagnostics),
        }

    @staticmethod
    def from_dict(data: dict) -> "CaseResult":
        return CaseResult(
            key=CaseKey.from_dict(data["key"]),
            category=OutcomeCategory(data["category"]),
            distortion=(DistortionScore.from_dict(data["distortion"])
                        if data.get("distortion") else None),
            bytecode_report=(EquivalenceReport.from_dict(data["bytecode_report"])
                             if data.get("bytecode_report") else None),
            test_verdict=(TestVerdict.from_dict(data["test_verdict"])
                          if data.get("test_verdict") else None),
            timings=dict(data.get("timings", {})),
            diagnostics=dict(data.get("diagnostics", {})),
        )


@dataclass(frozen=True)
class ProjectLayout:
    id: str
    source_root: Path
    units: tuple
    testmap: TestMap
    classpath: tuple = ()


@dataclass
class RunContext:
    """Everything evaluate_case needs: tools, projects and scratch space."""

    projects: dict  # id -> ProjectLayout
    tools: dict  # id -> ToolSpec
    run_root: Path
    ignored_attributes: frozenset = DEFAULT_IGNORED_ATTRIBUTES
    force_tests: bool = False
    config_hash: str = ""
    caching: bool = True

    def tool(self, tool_id: str) -> ToolSpec:
        try:
            return self.tools[tool_id]
        except KeyError:
            raise KeyError(f"unknown tool id {tool_id!r}") from None


@dataclass(frozen=True)
class ResultSet:
    results: tuple
    errors: tuple = ()  # (CaseKey, message) pairs for excluded cases
    config_hash: str = ""

    def by_key(self) -> dict:
        return {r.key: r for r in self.results}

    def decompilers(self) -> tuple:
        return tuple(sorted({r.key.decompiler for r in self.results}))

    def compilers(self) -> tuple:
        return tuple(sorted({r.key.compiler for r in self.results}))


def _write_log(case_dir: Path, stage: str, outcome) -> str:
    """Persist a stage's streams; returns the diagnostics reference."""
    path = case_dir / f"{stage}.log"
    path.parent.mkdir(parents=True, exist_ok=True)
    body = (f"status: {outcome.status}\nexit_code: {outcome.exit_code}\n"
            f"--- stdout ---\n{outcome.stdout}\n--- stderr ---\n{outcome.stderr}\n")
    path.write_text(body)
    return str(path)


def _compile_originals(ctx: RunContext, key: CaseKey) -> Path:
    """Compile (or reuse) the original classes for a (project, unit, compiler)."""
    project = ctx.projects[key.project]
    source = project.source_root / key.unit
    out_dir = (ctx.run_root / "cache" / "orig" / key.project / key.compiler
               / key.unit.replace("/", "__").removesuffix(".java"))
    marker = out_dir / ".done"
    if ctx.caching and marker.exists():
        return out_dir
    spec = ctx.tool(key.compiler)
    outcome = compile_sources([source], spec, out_dir,
                              classpath=project.classpath,
                              extra={"source": str(source)})
    if not outcome.ok or not outcome.produced_files:
        raise InfrastructureError(
            key, f"original compilation failed: {outcome.stderr.strip() or outcome.status}")
    marker.write_text("ok\n")
    return out_dir


def _decompile_unit(ctx: RunContext, key: CaseKey, classes_dir: Path):
    """Decompile (or reuse) one unit's classes; returns (out_dir, outcome|None)."""
    project = ctx.projects[key.project]
    source = project.source_root / key.unit
    out_dir = (ctx.run_root / "cache" / "dec" / key.project / key.compiler
               / key.decompiler / key.unit.replace("/", "__").removesuffix(".java"))
    marker = out_dir / ".done"
    if ctx.caching and marker.exists():
        return out_dir, None
    spec = ctx.tool(key.decompiler)
    classes = sorted(classes_dir.rglob("*.class"))
    outcome = decompile(classes, spec, out_dir,
                        classpath=project.classpath,
                        extra={"source": str(source)})
    if outcome.ok:
        marker.write_text("ok\n")
    return out_dir, outcome


def _compare_class_sets(orig_dir: Path, recomp_dir: Path, ignore) -> EquivalenceReport:
    """Unit-level strict equivalence: every original class must have an
    equal recompiled counterpart (inner classes take the unit down with them)."""
    diffs = []
    originals = {p.relative_to(orig_dir): p for p in orig_dir.rglob("*.class")}
    recompiled = {p.relative_to(recomp_dir): p for p in recomp_dir.rglob("*.class")}
    for rel in sorted(set(originals) | set(recompiled), key=str):
        if rel not in recompiled:
            diffs.append(Difference(str(rel), "missing-class", "present", "absent"))
            continue
        if rel not in originals:
            diffs.append(Difference(str(rel), "extra-class", "absent", "present"))
            continue
        a = normalize(parse_class(originals[rel].read_bytes()), ignore=ignore)
        b = normalize(parse_class(recompiled[rel].read_bytes()), ignore=ignore)
        report = strict_equivalence(a, b)
        if not report.equal:
            diffs.extend(Difference(f"{rel}: {d.location}", d.kind,
                                    d.original, d.recompiled)
                         for d in report.differences)
    return EquivalenceReport(equal=not diffs, differences=tuple(diffs))


def _score_distortion(original_source: Path, decompiled_source: Path):
    """Distortion of the decompiled source against the original, or None if
    either side fails to parse (unavailable, not zero)."""
    try:
        src_tree = parse_source(original_source.read_text())
        dst_tree = parse_source(decompiled_source.read_text())
    except (ParseError, UnicodeDecodeError):
        return None
    result = diff_trees(src_tree, dst_tree)
    return distortion(result.actions, src_tree)


def evaluate_case(key: CaseKey, ctx: RunContext) -> CaseResult:
    """Run one case through the cascade and classify it."""
    project = ctx.projects[key.project]
    source = project.source_root / key.unit
    case_dir = ctx.run_root / "cases" / key.slug
    timings = {}
    diagnostics = {}

    classes_dir = _compile_originals(ctx, key)

    dec_dir, dec_outcome = _decompile_unit(ctx, key, classes_dir)
    if dec_outcome is not None:
        timings["decompile"] = dec_outcome.wall_time
        diagnostics["decompile"] = _write_log(case_dir, "decompile", dec_outcome)
        if not dec_outcome.ok:
            return CaseResult(key, OutcomeCategory.EMPTY_OUTPUT,
                              timings=timings, diagnostics=diagnostics)
    decompiled = sorted(dec_dir.rglob("*.java"))
    if not decompiled:
        return CaseResult(key, OutcomeCategory.EMPTY_OUTPUT,
                          timings=timings, diagnostics=diagnostics)
    # prefer the file named like the unit; decompilers emitting one file per
    # class put the top-level class first in sorted order anyway
    unit_name = Path(key.unit).name
    dec_source = next((p for p in decompiled if p.name == unit_name), decompiled[0])

    score = _score_distortion(source, dec_source)

    compiler = ctx.tool(key.compiler)
    recomp_dir = case_dir / "recompiled"
    recomp = recompile(dec_source, (*project.classpath, classes_dir),
                       compiler, recomp_dir, extra={"source": str(dec_source)})
    timings["recompile"] = recomp.wall_time
    diagnostics["recompile"] = _write_log(case_dir, "recompile", recomp)
    if not recomp.ok or not recomp.produced_files:
        return CaseResult(key, OutcomeCategory.SYNTACTICALLY_INCORRECT,
                          distortion=score, timings=timings, diagnostics=diagnostics)

    report = _compare_class_sets(classes_dir, recomp_dir, ctx.ignored_attributes)
    if report.equal and not ctx.force_tests:
        return CaseResult(key, OutcomeCategory.STRICTLY_EQUIVALENT,
                          distortion=score, bytecode_report=report,
                          timings=timings, diagnostics=diagnostics)

    selection = project.testmap.tests_for(key.unit)
    if not selection:
        category = (OutcomeCategory.STRICTLY_EQUIVALENT if report.equal
                    else OutcomeCategory.NOT_TESTED)
        return CaseResult(key, category, distortion=score, bytecode_report=report,
                          timings=timings, diagnostics=diagnostics)

    runner = ctx.tool("testrunner") if "testrunner" in ctx.tools else None
    if runner is None:
        runners = [t for t in ctx.tools.values() if t.kind == "testrunner"]
        if not runners:
            raise KeyError("no testrunner tool configured")
        runner = runners[0]
    # recompiled classes shadow the originals on the classpath
    exec_classpath = [str(recomp_dir), str(classes_dir),
                      *map(str, project.classpath)]
    outcome, verdict = run_tests(selection, recomp_dir, runner,
                                 extra={"classes": str(recomp_dir),
                                        "classpath": exec_classpath})
    timings["tests"] = outcome.wall_time
    diagnostics["tests"] = _write_log(case_dir, "tests", outcome)

    if verdict.status == "timeout":
        category = OutcomeCategory.TEST_TIMEOUT
    elif verdict.status == "passed":
        category = (OutcomeCategory.STRICTLY_EQUIVALENT if report.equal
                    else OutcomeCategory.EQUIVALENT_MODULO_INPUTS)
    else:
        category = OutcomeCategory.DECEPTIVE
    return CaseResult(key, category, distortion=score, bytecode_report=report,
                      test_verdict=verdict, timings=timings, diagnostics=diagnostics)


def enumerate_cases(projects, compilers, decompilers) -> list:
    """All CaseKeys for the matrix, in deterministic total order."""
    keys = [
        CaseKey(p.id, unit, c, d)
        for p in projects
        for unit in p.units
        for c in compilers
        for d in decompilers
    ]
    return sorted(keys)


class _ResultWriter:
    """Single serialization point for incremental JSONL persistence."""

    def __init__(self, path: Path | None, config_hash: str, fresh: bool):
        self.path = path
        self.lock = threading.Lock()
        if path is not None and fresh:
            path.parent.mkdir(parents=True, exist_ok=True)
            header = {"format": RESULT_FORMAT_VERSION, "config_hash": config_hash}
            path.write_text(json.dumps(header) + "\n")

    def append(self, record: dict):
        if self.path is None:
            return
        with self.lock:
            with self.path.open("a") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")


def evaluate_matrix(ctx: RunContext, compilers, decompilers, *,
                    parallelism: int = 1, results_path=None,
                    cases=None, progress=None) -> ResultSet:
    """Evaluate every case, resuming from results_path when it exists.

    Partial failures (InfrastructureError) are recorded, not raised; the
    matrix always completes.
    """
    projects = [ctx.projects[pid] for pid in sorted(ctx.projects)]
    if cases is None:
        cases = enumerate_cases(projects, compilers, decompilers)

    done = {}
    errors = {}
    results_path = Path(results_path) if results_path is not None else None
    fresh = True
    if results_path is not None and results_path.exists():
        prior = resultset_load(results_path)
        if prior.config_hash != ctx.config_hash:
            raise VersionMismatch(
                "results file was produced by a different configuration")
        done = {r.key: r for r in prior.results}
        errors = {k: msg for k, msg in prior.errors}
        fresh = False
    writer = _ResultWriter(results_path, ctx.config_hash, fresh)

    pending = [k for k in cases if k not in done and k not in errors]

    def run_one(key):
        try:
            result = evaluate_case(key, ctx)
        except InfrastructureError as exc:
            return key, None, exc.message
        return key, result, None

    if pending:
        with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
            for key, result, err in pool.map(run_one, pending):
                if err is not None:
                    errors[key] = err
                    writer.append({"type": "error", "key": key.to_dict(),
                                   "message": err})
                else:
                    done[key] = result
                    writer.append({"type": "result", **result.to_dict()})
                if progress is not None:
                    progress(key, result, err)

    wanted = set(cases)
    ordered = tuple(done[k] for k in sorted(done) if k in wanted)
    ordered_errors = tuple((k, errors[k]) for k in sorted(errors))
    return ResultSet(results=ordered, errors=ordered_errors,
                     config_hash=ctx.config_hash)


def resultset_store(results: ResultSet, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps({"format": RESULT_FORMAT_VERSION,
                         "config_hash": results.config_hash})]
    for key, message in results.errors:
        lines.append(json.dumps({"type": "error", "key": key.to_dict(),
                                 "message": message}, sort_keys=True))
    for result in results.results:
        lines.append(json.dumps({"type": "result", **result.to_dict()},
                                sort_keys=True))
    path.write_text("\n".join(lines) + "\n")


def resultset_load(path) -> ResultSet:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise CorruptRecord(1, "empty results file")
    try:
        header = json.loads(lines[0])
        version = header["format"]
        config_hash = header.get("config_hash", "")
    except (json.JSONDecodeError, TypeError, KeyError) as exc:
        raise CorruptRecord(1, f"bad header: {exc}") from None
    if version != RESULT_FORMAT_VERSION:
        raise VersionMismatch(
            f"results format {version}, expected {RESULT_FORMAT_VERSION}")
    results = []
    errors = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            if record.get("type") == "error":
                errors.append((CaseKey.from_dict(record["key"]),
                               record["message"]))
            else:
                results.append(CaseResult.from_dict(record))
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
            raise CorruptRecord(number, str(exc)) from None
    results.sort(key=lambda r: r.key)
    errors.sort(key=lambda e: e[0])
    return ResultSet(results=tuple(results), errors=tuple(errors),
                     config_hash=config_hash)
