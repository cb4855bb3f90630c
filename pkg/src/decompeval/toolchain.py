"""Subprocess orchestration for compilers, decompilers and test runners.

Tools are described declaratively (ToolSpec) and invoked with argv-level
placeholder expansion, a hard timeout that kills the whole process group,
and size-capped stream capture. No shell is ever involved, so paths with
spaces or metacharacters pass through untouched.
"""

from __future__ import annotations

import os
import shlex
import signal
import subprocess
import time
from dataclasses import dataclass, field
from pathlib import Path

TOOL_KINDS = ("compiler", "decompiler", "testrunner")

# seconds; tests get the longest leash because suites can be slow
DEFAULT_TIMEOUTS = {"compiler": 300, "decompiler": 300, "testrunner": 1200}

STREAM_CAP = 1 << 20  # capture at most 1 MiB per stream


class ToolConfigError(ValueError):
    """A ToolSpec fails its structural invariants."""


@dataclass(frozen=True)
class ToolSpec:
    """Declarative description of one external tool invocation."""

    id: str
    kind: str
    command_template: str
    timeout: float | None = None
    env: dict = field(default_factory=dict)
    workdir: str | None = None
    version_probe: str | None = None

    def __post_init__(self):
        if self.kind not in TOOL_KINDS:
            raise ToolConfigError(f"unknown tool kind {self.kind!r}")
        if "{input}" not in self.command_template:
            raise ToolConfigError(f"tool {self.id!r}: template lacks {{input}}")
        if self.kind == "decompiler" and "{output}" not in self.command_template:
            raise ToolConfigError(f"tool {self.id!r}: decompiler template lacks {{output}}")

    @property
    def effective_timeout(self) -> float:
        return self.timeout if self.timeout is not None else DEFAULT_TIMEOUTS[self.kind]

    def to_dict(self) -> dict:
        out = {"id": self.id, "kind": self.kind,
               "command_template": self.command_template}
        if self.timeout is not None:
            out["timeout"] = self.timeout
        if self.env:
            out["env"] = dict(self.env)
        if self.workdir is not None:
            out["workdir"] = self.workdir
        if self.version_probe is not None:
            out["version_probe"] = self.version_probe
        return out

    @staticmethod
    def from_dict(data: dict) -> "ToolSpec":
        return ToolSpec(
            id=data["id"],
            kind=data["kind"],
            command_template=data["command_template"],
            timeout=data.get("timeout"),
            env=dict(data.get("env", {})),
            workdir=data.get("workdir"),
            version_probe=data.get("version_probe"),
        )


@dataclass(frozen=True)
class ToolOutcome:
    """Result of one tool invocation."""

    status: str  # "ok" | "exit" | "timeout" | "spawn-failure"
    exit_code: int | None
    stdout: str
    stderr: str
    produced_files: tuple
    wall_time: float

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "exit_code": self.exit_code,
            "stdout": self.stdout,
            "stderr": self.stderr,
            "produced_files": [str(p) for p in self.produced_files],
            "wall_time": self.wall_time,
        }


@dataclass(frozen=True)
class TestVerdict:
    """Outcome of a test-runner invocation."""

    status: str  # "passed" | "failed" | "timeout"
    failing_ids: tuple = ()

    def to_dict(self) -> dict:
        return {"status": self.status, "failing_ids": list(self.failing_ids)}

    @staticmethod
    def from_dict(data: dict) -> "TestVerdict":
        return TestVerdict(status=data["status"],
                           failing_ids=tuple(data.get("failing_ids", ())))


def expand_template(template: str, substitutions: dict) -> list:
    """Expand placeholders into argv.

    The template is tokenized once with shlex; placeholders are then
    substituted per token. A token that IS a placeholder whose value is a
    list expands to that many argv entries (empty list drops the token);
    embedded placeholders substitute textually within their token.
    Environment variables in tokens are expanded (path overrides only).
    """
    argv = []
    for token in shlex.split(template):
        token = os.path.expandvars(token)
        if token.startswith("{") and token.endswith("}") and token[1:-1] in substitutions:
            value = substitutions[token[1:-1]]
            if isinstance(value, (list, tuple)):
                argv.extend(str(v) for v in value)
            else:
                argv.append(str(value))
            continue
        for key, value in substitutions.items():
            hole = "{" + key + "}"
            if hole in token:
                if isinstance(value, (list, tuple)):
                    value = os.pathsep.join(str(v) for v in value)
                token = token.replace(hole, str(value))
        argv.append(token)
    return argv


def _cap(text: bytes) -> str:
    if len(text) > STREAM_CAP:
        text = text[:STREAM_CAP]
    return text.decode("utf-8", errors="replace")


def run_tool(spec: ToolSpec, substitutions: dict, *,
             timeout: float | None = None) -> ToolOutcome:
    """Invoke the tool once; never raises for tool-side failures."""
    argv = expand_template(spec.command_template, substitutions)
    limit = timeout if timeout is not None else spec.effective_timeout
    env = dict(os.environ, **spec.env) if spec.env else None
    start = time.monotonic()
    try:
        proc = subprocess.Popen(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            cwd=spec.workdir,
            env=env,
            start_new_session=True,  # its own process group, killable as a tree
        )
    except OSError as exc:
        return ToolOutcome(status="spawn-failure", exit_code=None, stdout="",
                           stderr=str(exc), produced_files=(),
                           wall_time=time.monotonic() - start)
    try:
        out, err = proc.communicate(timeout=limit)
    except subprocess.TimeoutExpired:
        _kill_group(proc)
        out, err = proc.communicate()
        return ToolOutcome(status="timeout", exit_code=None, stdout=_cap(out),
                           stderr=_cap(err), produced_files=(),
                           wall_time=time.monotonic() - start)
    wall = time.monotonic() - start
    status = "ok" if proc.returncode == 0 else "exit"
    return ToolOutcome(status=status, exit_code=proc.returncode,
                       stdout=_cap(out), stderr=_cap(err), produced_files=(),
                       wall_time=wall)


def _kill_group(proc: subprocess.Popen):
    try:
        os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        proc.kill()


def _with_files(outcome: ToolOutcome, out_dir: Path, suffix: str) -> ToolOutcome:
    if outcome.status not in ("ok", "exit"):
        return outcome
    files = tuple(sorted(p for p in Path(out_dir).rglob(f"*{suffix}")))
    return ToolOutcome(status=outcome.status, exit_code=outcome.exit_code,
                       stdout=outcome.stdout, stderr=outcome.stderr,
                       produced_files=files, wall_time=outcome.wall_time)


def compile_sources(sources, spec: ToolSpec, out_dir, *,
                    classpath=(), extra: dict | None = None) -> ToolOutcome:
    """Compile source files; produced_files lists every emitted .class."""
    if spec.kind != "compiler":
        raise ToolConfigError(f"tool {spec.id!r} is not a compiler")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    subs = {
        "input": [str(s) for s in sources],
        "output": str(out_dir),
        "classpath": [str(c) for c in classpath],
    }
    if extra:
        subs.update(extra)
    return _with_files(run_tool(spec, subs), out_dir, ".class")


def decompile(classes, spec: ToolSpec, out_dir, *,
              classpath=(), extra: dict | None = None) -> ToolOutcome:
    """Decompile class files; produced_files lists every emitted .java."""
    if spec.kind != "decompiler":
        raise ToolConfigError(f"tool {spec.id!r} is not a decompiler")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    subs = {
        "input": [str(c) for c in classes],
        "output": str(out_dir),
        "classpath": [str(c) for c in classpath],
    }
    if extra:
        subs.update(extra)
    return _with_files(run_tool(spec, subs), out_dir, ".java")


def recompile(source, classpath, spec: ToolSpec, out_dir, *,
              extra: dict | None = None) -> ToolOutcome:
    """Recompile one decompiled source; Ok status is Definition 1."""
    return compile_sources([source], spec, out_dir,
                           classpath=classpath, extra=extra)


def run_tests(selection, workdir, spec: ToolSpec, *,
              timeout: float | None = None,
              extra: dict | None = None) -> tuple:
    """Run the selected tests; returns (ToolOutcome, TestVerdict).

    The runner reports failures as lines of the form "FAIL <test-id>" on
    stdout; exit code 0 means every selected test passed.
    """
    if spec.kind != "testrunner":
        raise ToolConfigError(f"tool {spec.id!r} is not a testrunner")
    if not selection:
        raise ValueError("empty test selection")
    subs = {
        "input": str(workdir),
        "filter": [str(t) for t in selection],
    }
    if extra:
        subs.update(extra)
    outcome = run_tool(spec, subs, timeout=timeout)
    if outcome.status == "timeout":
        return outcome, TestVerdict(status="timeout")
    if outcome.status == "spawn-failure":
        raise RuntimeError(f"test runner {spec.id!r} failed to start: {outcome.stderr}")
    if outcome.ok:
        return outcome, TestVerdict(status="passed")
    failing = tuple(
        line.split(None, 1)[1].strip()
        for line in outcome.stdout.splitlines()
        if line.startswith("FAIL ")
    )
    return outcome, TestVerdict(status="failed", failing_ids=failing)
