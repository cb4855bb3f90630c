"""Run configuration: a single JSON file describing projects, tools and
pipeline options, validated against a published schema.

Environment variables may appear in path values (``${JAVA_HOME}/bin/javac``
style); they are expanded at load time and never affect semantics.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .classfile.normalize import DEFAULT_IGNORED_ATTRIBUTES
from .pipeline import ProjectLayout, RunContext, TestMap
from .toolchain import ToolConfigError, ToolSpec

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["projects", "tools", "output_root"],
    "additionalProperties": False,
    "properties": {
        "output_root": {"type": "string"},
        "projects": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "source_root", "testmap"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "source_root": {"type": "string"},
                    "testmap": {"type": "string"},
                    "units": {"type": "array", "items": {"type": "string"}},
                    "classpath": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "tools": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "kind", "command_template"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "kind": {"enum": ["compiler", "decompiler", "testrunner"]},
                    "command_template": {"type": "string"},
                    "timeout": {"type": "number", "exclusiveMinimum": 0},
                    "env": {"type": "object",
                            "additionalProperties": {"type": "string"}},
                    "workdir": {"type": "string"},
                    "version_probe": {"type": "string"},
                },
            },
        },
        "pipeline": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "workers": {"type": "integer", "minimum": 1},
                "force_tests": {"type": "boolean"},
                "ignored_attributes": {"type": "array",
                                       "items": {"type": "string"}},
            },
        },
    },
}


class ConfigError(Exception):
    """Configuration is invalid; field_path names the offending entry."""

    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field_path = field_path


def _expand_path(value: str, base: Path) -> Path:
    expanded = os.path.expandvars(value)
    path = Path(expanded)
    return path if path.is_absolute() else base / path


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    base_dir: Path
    output_root: Path
    projects: tuple  # ProjectLayout
    tools: tuple  # ToolSpec
    workers: int = 1
    force_tests: bool = False
    ignored_attributes: frozenset = field(
        default_factory=lambda: DEFAULT_IGNORED_ATTRIBUTES)

    @property
    def config_hash(self) -> str:
        canon = json.dumps(self.raw, sort_keys=True).encode()
        return hashlib.sha256(canon).hexdigest()

    def compilers(self) -> list:
        return sorted(t.id for t in self.tools if t.kind == "compiler")

    def decompilers(self) -> list:
        return sorted(t.id for t in self.tools if t.kind == "decompiler")

    def to_run_context(self, run_root=None) -> RunContext:
        return RunContext(
            projects={p.id: p for p in self.projects},
            tools={t.id: t for t in self.tools},
            run_root=Path(run_root) if run_root is not None else self.output_root,
            ignored_attributes=self.ignored_attributes,
            force_tests=self.force_tests,
            config_hash=self.config_hash,
        )

    def save(self, path):
        Path(path).write_text(json.dumps(self.raw, indent=2, sort_keys=True) + "\n")

    @staticmethod
    def load(path) -> "RunConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(str(path), "config file does not exist")
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(str(path), f"not valid JSON: {exc}") from None
        return load_config_dict(raw, base_dir=path.parent)


def _json_path(error: jsonschema.ValidationError) -> str:
    parts = []
    for part in error.absolute_path:
        if isinstance(part, int):
            parts.append(f"[{part}]")
        else:
            parts.append(f".{part}" if parts else part)
    return "".join(parts) or "(root)"


def load_config_dict(raw: dict, base_dir) -> RunConfig:
    base_dir = Path(base_dir)
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        raise ConfigError(_json_path(first), first.message)

    tools = []
    seen = set()
    for i, tdata in enumerate(raw["tools"]):
        if tdata["id"] in seen:
            raise ConfigError(f"tools[{i}].id", f"duplicate tool id {tdata['id']!r}")
        seen.add(tdata["id"])
        try:
            tools.append(ToolSpec.from_dict(tdata))
        except ToolConfigError as exc:
            raise ConfigError(f"tools[{i}].command_template", str(exc)) from None

    projects = []
    seen = set()
    for i, pdata in enumerate(raw["projects"]):
        pid = pdata["id"]
        if pid in seen:
            raise ConfigError(f"projects[{i}].id", f"duplicate project id {pid!r}")
        seen.add(pid)
        source_root = _expand_path(pdata["source_root"], base_dir)
        if not source_root.is_dir():
            raise ConfigError(f"projects[{i}].source_root",
                              f"directory does not exist: {source_root}")
        testmap_path = _expand_path(pdata["testmap"], base_dir)
        if not testmap_path.is_file():
            raise ConfigError(f"projects[{i}].testmap",
                              f"file does not exist: {testmap_path}")
        testmap = TestMap.load(testmap_path)
        classpath = []
        for j, entry in enumerate(pdata.get("classpath", ())):
            cp = _expand_path(entry, base_dir)
            if not cp.exists():
                raise ConfigError(f"projects[{i}].classpath[{j}]",
                                  f"path does not exist: {cp}")
            classpath.append(cp)
        units = pdata.get("units")
        if units is None:
            units = sorted(str(p.relative_to(source_root))
                           for p in source_root.rglob("*.java"))
        else:
            for j, unit in enumerate(units):
                if not (source_root / unit).is_file():
                    raise ConfigError(f"projects[{i}].units[{j}]",
                                      f"unit not found under source root: {unit}")
        projects.append(ProjectLayout(id=pid, source_root=source_root,
                                      units=tuple(units), testmap=testmap,
                                      classpath=tuple(classpath)))

    options = raw.get("pipeline", {})
    ignored = options.get("ignored_attributes")
    return RunConfig(
        raw=raw,
        base_dir=base_dir,
        output_root=_expand_path(raw["output_root"], base_dir),
        projects=tuple(projects),
        tools=tuple(tools),
        workers=options.get("workers", 1),
        force_tests=options.get("force_tests", False),
        ignored_attributes=(frozenset(ignored) if ignored is not None
                            else DEFAULT_IGNORED_ATTRIBUTES),
    )
