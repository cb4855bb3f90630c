"""Tool invocation: template expansion, timeouts, stream caps, verdicts."""

import os
import sys

import pytest

from decompeval.toolchain import (
    STREAM_CAP,
    TestVerdict,
    ToolConfigError,
    ToolSpec,
    expand_template,
    run_tests,
    run_tool,
)

PY = sys.executable


def _spec(template, kind="compiler", **kw):
    return ToolSpec(id="t", kind=kind, command_template=template, **kw)


def test_spec_requires_input_placeholder():
    with pytest.raises(ToolConfigError):
        ToolSpec(id="t", kind="compiler", command_template="javac -d out")


def test_decompiler_spec_requires_output_placeholder():
    with pytest.raises(ToolConfigError):
        ToolSpec(id="t", kind="decompiler", command_template="cfr {input}")


def test_unknown_kind_rejected():
    with pytest.raises(ToolConfigError):
        ToolSpec(id="t", kind="linker", command_template="x {input}")


def test_expand_list_placeholder_to_many_args():
    argv = expand_template("javac -d {output} {input}",
                           {"output": "out", "input": ["A.java", "B.java"]})
    assert argv == ["javac", "-d", "out", "A.java", "B.java"]


def test_expand_embedded_list_joins_with_pathsep():
    argv = expand_template("java -cp={classpath} Main",
                           {"classpath": ["a", "b"]})
    assert argv == ["java", "-cp=" + os.pathsep.join(["a", "b"]), "Main"]


def test_expand_empty_list_drops_token():
    argv = expand_template("run {filter}", {"filter": []})
    assert argv == ["run"]


def test_paths_with_spaces_survive():
    argv = expand_template("cat {input}", {"input": ["/tmp/a b/c.java"]})
    assert argv == ["cat", "/tmp/a b/c.java"]


def test_env_vars_expand_in_tokens(monkeypatch):
    monkeypatch.setenv("TOOLCHAIN_TEST_ROOT", "/data")
    argv = expand_template("x ${TOOLCHAIN_TEST_ROOT}/m.json {input}", {"input": "i"})
    assert argv == ["x", "/data/m.json", "i"]


def test_run_tool_captures_output():
    spec = _spec(f"{PY} -c {{input}}")
    outcome = run_tool(spec, {"input": ["print('hello'); import sys; "
                                        "print('oops', file=sys.stderr)"]})
    assert outcome.ok and outcome.exit_code == 0
    assert "hello" in outcome.stdout
    assert "oops" in outcome.stderr


def test_run_tool_nonzero_exit():
    spec = _spec(f"{PY} -c {{input}}")
    outcome = run_tool(spec, {"input": ["raise SystemExit(3)"]})
    assert outcome.status == "exit"
    assert outcome.exit_code == 3
    assert not outcome.ok


def test_run_tool_timeout_kills_process_tree():
    spec = _spec(f"{PY} -c {{input}}", timeout=0.5)
    code = ("import subprocess, sys, time\n"
            "subprocess.Popen([sys.executable, '-c', 'import time; time.sleep(60)'])\n"
            "time.sleep(60)\n")
    outcome = run_tool(spec, {"input": [code]})
    assert outcome.status == "timeout"
    assert outcome.exit_code is None
    assert outcome.wall_time < 10


def test_run_tool_spawn_failure():
    spec = _spec("definitely-not-a-real-binary-zzz {input}")
    outcome = run_tool(spec, {"input": ["x"]})
    assert outcome.status == "spawn-failure"


def test_stream_cap():
    spec = _spec(f"{PY} -c {{input}}")
    outcome = run_tool(spec, {"input": [f"print('x' * {STREAM_CAP * 2})"]})
    assert len(outcome.stdout) <= STREAM_CAP


def test_default_timeouts_by_kind():
    assert _spec("x {input}").effective_timeout == 300
    assert _spec("x {input} {output}", kind="decompiler").effective_timeout == 300
    assert _spec("x {input}", kind="testrunner").effective_timeout == 1200
    assert _spec("x {input}", timeout=7).effective_timeout == 7


def test_run_tests_parses_fail_lines(tmp_path):
    runner = ToolSpec(id="r", kind="testrunner", command_template=f"{PY} -c {{input}}")
    code = ("print('FAIL FooTest.testA')\n"
            "print('noise line')\n"
            "print('FAIL FooTest.testB')\n"
            "raise SystemExit(1)\n")
    # abuse {input} to carry the script; selection still required
    outcome, verdict = run_tests(["FooTest.testA", "FooTest.testB"],
                                 code, runner)
    assert verdict.status == "failed"
    assert verdict.failing_ids == ("FooTest.testA", "FooTest.testB")


def test_run_tests_pass_and_timeout(tmp_path):
    runner = ToolSpec(id="r", kind="testrunner",
                      command_template=f"{PY} -c {{input}}", timeout=0.5)
    outcome, verdict = run_tests(["T.a"], "print('ok')", runner)
    assert verdict.status == "passed"
    outcome, verdict = run_tests(["T.a"], "import time; time.sleep(30)", runner)
    assert verdict.status == "timeout"


def test_run_tests_rejects_empty_selection():
    runner = ToolSpec(id="r", kind="testrunner", command_template="x {input}")
    with pytest.raises(ValueError):
        run_tests([], ".", runner)


def test_verdict_round_trip():
    verdict = TestVerdict(status="failed", failing_ids=("A.b",))
    assert TestVerdict.from_dict(verdict.to_dict()) == verdict


def test_spec_round_trip():
    spec = ToolSpec(id="cfr", kind="decompiler",
                    command_template="cfr {input} --outputdir {output}",
                    timeout=60, env={"LANG": "C"})
    assert ToolSpec.from_dict(spec.to_dict()) == spec
