"""Stub tools replay the committed manifest faithfully."""

import shutil

import pytest

from decompeval.stubs import (
    class_set_digest,
    file_digest,
    load_manifest,
    stub_compile_copy,
    stub_decomp_crash,
    stub_decomp_identity,
    stub_decomp_mutant,
    stub_decomp_syntaxbreak,
    stub_testrunner,
)
from tests.conftest import FIXTURES

MANIFEST = FIXTURES / "manifest.json"
FOO_SRC = FIXTURES / "foo" / "src" / "Foo.java"
UTILS_SRC = FIXTURES / "utils" / "src" / "Utils.java"


@pytest.fixture(scope="module")
def manifest():
    return load_manifest(MANIFEST)


def test_compile_copy_resolves_both_flavors(manifest, tmp_path):
    for flavor in ("javac", "ecj"):
        out = tmp_path / flavor
        out.mkdir()
        assert stub_compile_copy(manifest, flavor, [FOO_SRC], out) == 0
        assert list(out.glob("*.class"))
    javac = (tmp_path / "javac" / "Foo.class").read_bytes()
    ecj = (tmp_path / "ecj" / "Foo.class").read_bytes()
    assert javac != ecj


def test_compile_copy_unknown_source_fails(manifest, tmp_path, capsys):
    bogus = tmp_path / "Bogus.java"
    bogus.write_text("class Bogus {}\n")
    out = tmp_path / "out"
    out.mkdir()
    assert stub_compile_copy(manifest, "javac", [bogus], out) == 1
    assert not list(out.glob("*.class"))


def test_decomp_identity_is_verbatim(tmp_path):
    assert stub_decomp_identity(FOO_SRC, tmp_path) == 0
    copy = tmp_path / "Foo.java"
    assert copy.read_bytes() == FOO_SRC.read_bytes()


def test_decomp_mutant_emits_committed_variant(manifest, tmp_path):
    assert stub_decomp_mutant(manifest, FOO_SRC, tmp_path) == 0
    produced = tmp_path / "Foo.java"
    variant = FIXTURES / "foo" / "variants" / "mutant" / "Foo.java"
    assert produced.read_bytes() == variant.read_bytes()
    assert produced.read_bytes() != FOO_SRC.read_bytes()


def test_decomp_crash_exits_nonzero():
    assert stub_decomp_crash(FOO_SRC) == 3


def test_decomp_syntaxbreak_drops_final_brace(tmp_path):
    assert stub_decomp_syntaxbreak(UTILS_SRC, tmp_path) == 0
    broken = (tmp_path / "Utils.java").read_text()
    original = UTILS_SRC.read_text()
    assert broken.count("}") == original.count("}") - 1
    assert broken.rstrip().endswith(broken.rstrip()[-1])  # still nonempty


def test_class_set_digest_ignores_file_order(tmp_path):
    src = FIXTURES / "inner" / "classes-javac"
    a = tmp_path / "a"
    b = tmp_path / "b"
    shutil.copytree(src, a)
    shutil.copytree(src, b)
    # digest must depend on content + relative name only
    assert class_set_digest(a) == class_set_digest(b) == class_set_digest(src)


def test_class_set_digest_sees_content_changes(tmp_path):
    src = FIXTURES / "foo" / "classes-javac"
    a = tmp_path / "a"
    shutil.copytree(src, a)
    before = class_set_digest(a)
    target = next(a.glob("*.class"))
    target.write_bytes(target.read_bytes() + b"\x00")
    assert class_set_digest(a) != before


def test_testrunner_replays_pass(manifest, capsys):
    rc = stub_testrunner(manifest, FIXTURES / "foo" / "classes-javac",
                         ["FooTest.testFooImmediate"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "FAIL" not in out


def test_testrunner_replays_failures_filtered_by_selection(manifest, capsys):
    classes = FIXTURES / "utils" / "variants" / "mutant-classes-javac"
    rc = stub_testrunner(manifest, classes,
                         ["UtilsTest.testBadDigitMessage", "UtilsTest.testDecode"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL UtilsTest.testBadDigitMessage" in out
    # selection narrows what is reported
    rc = stub_testrunner(manifest, classes, ["UtilsTest.testDecode"])
    out = capsys.readouterr().out
    assert "FAIL UtilsTest.testBadDigitMessage" not in out


def test_testrunner_unknown_digest_exits_2(manifest, tmp_path, capsys):
    (tmp_path / "X.class").write_bytes(b"\xca\xfe\xba\xbe junk")
    assert stub_testrunner(manifest, tmp_path, ["T.a"]) == 2


def test_testrunner_sleep_flag(manifest):
    import time

    start = time.monotonic()
    stub_testrunner(manifest, FIXTURES / "foo" / "classes-javac",
                    ["FooTest.testFooImmediate"], sleep=0.2)
    assert time.monotonic() - start >= 0.2


def test_file_digest_matches_manifest_key(manifest):
    assert file_digest(FOO_SRC) in manifest["sources"]
