import json
import os
from pathlib import Path

import pytest

from decompeval.pipeline import TestMap
from decompeval.toolchain import TestVerdict

# dataclasses, not test cases; stop pytest from trying to collect them
TestVerdict.__test__ = False
TestMap.__test__ = False

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"
CONFIG = REPO / "configs" / "hermetic.json"


@pytest.fixture(scope="session", autouse=True)
def fixtures_env():
    os.environ["DECOMPEVAL_FIXTURES"] = str(FIXTURES)
    return FIXTURES


@pytest.fixture(scope="session")
def committed_binaries():
    paths = sorted(FIXTURES.rglob("*.class"))
    assert paths, "fixture corpus has no committed binaries"
    return paths


@pytest.fixture()
def hermetic_context(tmp_path):
    """RunContext over the committed fixtures with scratch space in tmp."""
    from decompeval.config import RunConfig

    config = RunConfig.load(CONFIG)
    return config, config.to_run_context(run_root=tmp_path / "run")


@pytest.fixture(scope="session")
def full_matrix(tmp_path_factory, fixtures_env):
    """One full stub-matrix evaluation shared by read-only consumers."""
    from decompeval.config import RunConfig
    from decompeval.pipeline import evaluate_matrix

    config = RunConfig.load(CONFIG)
    ctx = config.to_run_context(run_root=tmp_path_factory.mktemp("matrix"))
    return evaluate_matrix(ctx, ("ecj", "javac"),
                           ("crash", "identity", "mutant", "syntaxbreak"),
                           parallelism=4)


def load_expected(fixture_name: str) -> dict:
    return json.loads((FIXTURES / fixture_name / "expected.json").read_text())
