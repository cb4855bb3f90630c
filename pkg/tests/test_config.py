"""Config schema validation, path handling and hashing."""

import json

import pytest

from decompeval.config import ConfigError, RunConfig, load_config_dict
from tests.conftest import CONFIG, FIXTURES


def _minimal(tmp_path, **overrides):
    src = tmp_path / "src"
    src.mkdir(exist_ok=True)
    (src / "A.java").write_text("class A {}\n")
    (src / "B.java").write_text("class B {}\n")
    testmap = tmp_path / "testmap.json"
    testmap.write_text('{"A.java": ["ATest.t"], "exclude": []}')
    raw = {
        "output_root": "runs",
        "projects": [{"id": "p", "source_root": "src", "testmap": "testmap.json"}],
        "tools": [
            {"id": "javac", "kind": "compiler", "command_template": "c {input}"},
            {"id": "cfr", "kind": "decompiler",
             "command_template": "d {input} {output}"},
            {"id": "junit", "kind": "testrunner", "command_template": "t {input}"},
        ],
    }
    raw.update(overrides)
    return raw


def test_loads_checked_in_hermetic_config():
    config = RunConfig.load(CONFIG)
    assert {p.id for p in config.projects} == {"foo", "inner", "overload",
                                               "singleton", "utils"}
    assert config.compilers() == ["ecj", "javac"]
    assert "identity" in config.decompilers()


def test_missing_required_field_names_its_path(tmp_path):
    raw = _minimal(tmp_path)
    del raw["projects"][0]["testmap"]
    with pytest.raises(ConfigError) as excinfo:
        load_config_dict(raw, tmp_path)
    assert excinfo.value.field_path == "projects[0]"
    assert "testmap" in str(excinfo.value)


def test_unknown_key_rejected(tmp_path):
    raw = _minimal(tmp_path)
    raw["projects"][0]["sauce_root"] = "src"
    with pytest.raises(ConfigError) as excinfo:
        load_config_dict(raw, tmp_path)
    assert "projects[0]" in excinfo.value.field_path


def test_duplicate_tool_id(tmp_path):
    raw = _minimal(tmp_path)
    raw["tools"].append(dict(raw["tools"][0]))
    with pytest.raises(ConfigError) as excinfo:
        load_config_dict(raw, tmp_path)
    assert excinfo.value.field_path == "tools[3].id"


def test_duplicate_project_id(tmp_path):
    raw = _minimal(tmp_path)
    raw["projects"].append(dict(raw["projects"][0]))
    with pytest.raises(ConfigError) as excinfo:
        load_config_dict(raw, tmp_path)
    assert excinfo.value.field_path == "projects[1].id"


def test_bad_template_blamed_on_tool(tmp_path):
    raw = _minimal(tmp_path)
    raw["tools"][0]["command_template"] = "javac -d out"  # no {input}
    with pytest.raises(ConfigError) as excinfo:
        load_config_dict(raw, tmp_path)
    assert excinfo.value.field_path == "tools[0].command_template"


def test_missing_source_root(tmp_path):
    raw = _minimal(tmp_path)
    raw["projects"][0]["source_root"] = "elsewhere"
    with pytest.raises(ConfigError) as excinfo:
        load_config_dict(raw, tmp_path)
    assert excinfo.value.field_path == "projects[0].source_root"


def test_unknown_unit_rejected(tmp_path):
    raw = _minimal(tmp_path)
    raw["projects"][0]["units"] = ["A.java", "Missing.java"]
    with pytest.raises(ConfigError) as excinfo:
        load_config_dict(raw, tmp_path)
    assert excinfo.value.field_path == "projects[0].units[1]"


def test_units_default_to_all_sources(tmp_path):
    config = load_config_dict(_minimal(tmp_path), tmp_path)
    assert config.projects[0].units == ("A.java", "B.java")


def test_relative_paths_resolve_against_config_dir(tmp_path):
    config = load_config_dict(_minimal(tmp_path), tmp_path)
    assert config.projects[0].source_root == tmp_path / "src"
    assert config.output_root == tmp_path / "runs"


def test_env_vars_expand_in_paths(tmp_path, monkeypatch):
    monkeypatch.setenv("CFG_TEST_SRC", str(tmp_path / "src"))
    raw = _minimal(tmp_path)
    raw["projects"][0]["source_root"] = "${CFG_TEST_SRC}"
    config = load_config_dict(raw, tmp_path)
    assert config.projects[0].source_root == tmp_path / "src"


def test_save_load_round_trip(tmp_path):
    config = load_config_dict(_minimal(tmp_path), tmp_path)
    path = tmp_path / "saved.json"
    config.save(path)
    again = RunConfig.load(path)
    assert again.config_hash == config.config_hash
    assert [p.id for p in again.projects] == [p.id for p in config.projects]


def test_config_hash_tracks_content(tmp_path):
    base = load_config_dict(_minimal(tmp_path), tmp_path)
    same = load_config_dict(_minimal(tmp_path), tmp_path)
    assert base.config_hash == same.config_hash
    changed = load_config_dict(_minimal(tmp_path, output_root="other"), tmp_path)
    assert changed.config_hash != base.config_hash


def test_load_rejects_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig.load(tmp_path / "nope.json")


def test_load_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        RunConfig.load(path)


def test_pipeline_options_flow_into_context(tmp_path):
    raw = _minimal(tmp_path)
    raw["pipeline"] = {"workers": 3, "force_tests": True}
    config = load_config_dict(raw, tmp_path)
    assert config.workers == 3
    ctx = config.to_run_context(run_root=tmp_path / "run")
    assert ctx.force_tests is True
    assert ctx.config_hash == config.config_hash
