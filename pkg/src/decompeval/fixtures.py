"""Corpus verification for the committed Java fixtures.

The committed class files keep the pipeline hermetic; this module is the
one JDK-dependent path. It recompiles every fixture source with a real
javac, re-runs the unit tests, and re-checks that the committed binaries
parse and normalize equal to a fresh build (modulo the default ignored
attributes). Fixtures under ``negative/`` must FAIL their tests; that
proves the gate can detect broken corpora.

Requires: javac and java on PATH (or --jdk), and a JUnit 4 jar (with
hamcrest) pointed to by DECOMPEVAL_JUNIT_CLASSPATH.
"""

from __future__ import annotations

import os
import shutil
import subprocess
import tempfile
from pathlib import Path

from .classfile import (
    ClassFileError,
    normalize,
    parse_class,
    strict_equivalence,
)


def _find_tool(name: str, jdk_home) -> str | None:
    if jdk_home:
        candidate = Path(jdk_home) / "bin" / name
        return str(candidate) if candidate.exists() else None
    return shutil.which(name)


def _run(argv, timeout=300):
    return subprocess.run(argv, capture_output=True, text=True, timeout=timeout)


def _verify_one(fixture_dir: Path, javac: str, java: str,
                junit_cp: str | None, expect_test_failure: bool,
                report: list) -> bool:
    name = fixture_dir.name
    ok = True
    sources = sorted((fixture_dir / "src").glob("*.java"))
    committed = sorted((fixture_dir / "classes-javac").glob("*.class"))

    for path in committed:
        try:
            parse_class(path.read_bytes())
        except ClassFileError as exc:
            report.append(f"FAIL {name}: committed binary {path.name} "
                          f"does not parse: {exc}")
            ok = False

    with tempfile.TemporaryDirectory() as tmp:
        build = Path(tmp) / "classes"
        build.mkdir()
        proc = _run([javac, "-source", "8", "-target", "8", "-d", str(build),
                     *map(str, sources)])
        if proc.returncode != 0:
            report.append(f"FAIL {name}: source does not compile: "
                          f"{proc.stderr.strip()}")
            return False

        for path in committed:
            fresh = build / path.name
            if not fresh.exists():
                report.append(f"FAIL {name}: fresh build did not produce "
                              f"{path.name}")
                ok = False
                continue
            try:
                a = normalize(parse_class(path.read_bytes()))
                b = normalize(parse_class(fresh.read_bytes()))
            except ClassFileError as exc:
                report.append(f"FAIL {name}: {path.name}: {exc}")
                ok = False
                continue
            if not strict_equivalence(a, b).equal:
                report.append(f"FAIL {name}: committed {path.name} does not "
                              f"normalize equal to a fresh javac build")
                ok = False

        tests = sorted((fixture_dir / "tests").glob("*.java"))
        if tests and junit_cp:
            cp = os.pathsep.join([str(build), junit_cp])
            proc = _run([javac, "-source", "8", "-target", "8", "-cp", cp,
                         "-d", str(build), *map(str, tests)])
            if proc.returncode != 0:
                report.append(f"FAIL {name}: tests do not compile: "
                              f"{proc.stderr.strip()}")
                return False
            classes = [t.stem for t in tests]
            proc = _run([java, "-cp", cp, "org.junit.runner.JUnitCore",
                         *classes], timeout=1200)
            failed = proc.returncode != 0
            if failed and not expect_test_failure:
                report.append(f"FAIL {name}: tests fail on original classes:\n"
                              f"{proc.stdout.strip()}")
                ok = False
            elif not failed and expect_test_failure:
                report.append(f"FAIL {name}: negative fixture's tests "
                              f"unexpectedly pass")
                ok = False
        elif tests and not junit_cp:
            report.append(f"WARN {name}: tests skipped, set "
                          f"DECOMPEVAL_JUNIT_CLASSPATH to a junit4+hamcrest "
                          f"classpath")
    if ok:
        report.append(f"ok   {name}")
    return ok


def fixture_verify(fixtures_root: Path, jdk_home=None) -> tuple:
    """Returns (report lines, all-green flag)."""
    javac = _find_tool("javac", jdk_home)
    java = _find_tool("java", jdk_home)
    if not javac or not java:
        return (["error: no JDK found (need javac and java; "
                 "pass --jdk or put them on PATH)"], False)
    junit_cp = os.environ.get("DECOMPEVAL_JUNIT_CLASSPATH")

    report = []
    all_ok = True
    fixture_dirs = sorted(
        d for d in fixtures_root.iterdir()
        if d.is_dir() and (d / "src").is_dir()
    )
    for fixture_dir in fixture_dirs:
        all_ok &= _verify_one(fixture_dir, javac, java, junit_cp,
                              expect_test_failure=False, report=report)
    negative_root = fixtures_root / "negative"
    if negative_root.is_dir():
        for fixture_dir in sorted(negative_root.iterdir()):
            if (fixture_dir / "src").is_dir():
                all_ok &= _verify_one(fixture_dir, javac, java, junit_cp,
                                      expect_test_failure=True, report=report)
    report.append("all green" if all_ok else "violations found")
    return report, all_ok
