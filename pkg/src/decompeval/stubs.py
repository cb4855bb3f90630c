"""Hermetic stand-ins for javac/ecj, decompilers and the test runner.

Real compilers and JVM test runs are not always available (CI sandboxes,
unit tests), so the pipeline can be exercised end to end with stub tools
that resolve everything through a committed manifest:

  * ``compile-copy`` hashes the input source and copies the matching
    pre-built class directory for the requested compiler flavor.
  * ``decomp-identity`` re-emits the original source verbatim.
  * ``decomp-mutant`` emits a committed variant of the source (whose
    behavior may or may not match the original, depending on the corpus).
  * ``decomp-crash`` exits non-zero without producing output.
  * ``decomp-syntaxbreak`` emits the source with the final brace removed,
    guaranteeing a recompilation failure.
  * ``testrunner`` digests the staged class files and replays the verdict
    recorded in the manifest, printing ``FAIL <test-id>`` lines.

Manifest layout (paths relative to the manifest file)::

    {
      "sources": {
        "<sha256 of source bytes>": {
          "fixture": "utils",
          "classes": {"javac": "utils/classes-javac", "ecj": "..."},
          "variants": {"mutant": "utils/variants/mutant/Utils.java"}
        }
      },
      "behaviors": {
        "<class-set digest>": {"result": "pass"}
          or {"result": "fail", "failing": ["UtilsTest.testDecode"]}
      }
    }
"""

from __future__ import annotations

import hashlib
import json
import shutil
import sys
import time
from pathlib import Path


class StubError(Exception):
    """Raised for manifest lookups that cannot be satisfied."""


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def file_digest(path) -> str:
    return _sha256(Path(path).read_bytes())


def class_set_digest(class_dir) -> str:
    """Order-independent digest of every .class file under a directory."""
    class_dir = Path(class_dir)
    entries = sorted(
        (str(p.relative_to(class_dir)), _sha256(p.read_bytes()))
        for p in class_dir.rglob("*.class")
    )
    payload = "\n".join(f"{name} {digest}" for name, digest in entries)
    return _sha256(payload.encode("ascii"))


def load_manifest(path) -> dict:
    path = Path(path)
    manifest = json.loads(path.read_text())
    manifest["_root"] = path.parent
    return manifest


def _lookup_source(manifest: dict, source_path) -> dict:
    digest = file_digest(source_path)
    entry = manifest.get("sources", {}).get(digest)
    if entry is None:
        raise StubError(f"source not in manifest: {source_path} ({digest[:12]})")
    return entry


def stub_compile_copy(manifest: dict, flavor: str, sources, out_dir) -> int:
    """Pretend-compile by copying the committed class set for each source."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for source in sources:
        try:
            entry = _lookup_source(manifest, source)
        except StubError as exc:
            # unknown source text == compile error in the hermetic world
            print(f"error: cannot compile {source}: {exc}", file=sys.stderr)
            return 1
        rel = entry.get("classes", {}).get(flavor)
        if rel is None:
            print(f"error: no {flavor} classes for {source}", file=sys.stderr)
            return 1
        class_dir = manifest["_root"] / rel
        for cls in sorted(class_dir.rglob("*.class")):
            dest = out_dir / cls.relative_to(class_dir)
            dest.parent.mkdir(parents=True, exist_ok=True)
            shutil.copyfile(cls, dest)
    return 0


def stub_decomp_identity(source, out_dir) -> int:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    source = Path(source)
    shutil.copyfile(source, out_dir / source.name)
    return 0


def stub_decomp_mutant(manifest: dict, source, out_dir) -> int:
    """Emit the committed "mutant" variant for this source."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    source = Path(source)
    try:
        entry = _lookup_source(manifest, source)
    except StubError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rel = entry.get("variants", {}).get("mutant")
    if rel is None:
        print(f"error: no mutant variant for {source}", file=sys.stderr)
        return 1
    variant = manifest["_root"] / rel
    shutil.copyfile(variant, out_dir / source.name)
    return 0


def stub_decomp_crash(source) -> int:
    print(f"internal decompiler error while processing {source}", file=sys.stderr)
    return 3


def stub_decomp_syntaxbreak(source, out_dir) -> int:
    """Emit the source with its final closing brace removed."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    source = Path(source)
    text = source.read_text()
    cut = text.rfind("}")
    if cut >= 0:
        text = text[:cut] + text[cut + 1:]
    (out_dir / source.name).write_text(text)
    return 0


def stub_testrunner(manifest: dict, classes_dir, selection, *,
                    sleep: float = 0.0) -> int:
    """Replay the recorded verdict for the staged class set."""
    if sleep > 0:
        time.sleep(sleep)
    digest = class_set_digest(classes_dir)
    verdict = manifest.get("behaviors", {}).get(digest)
    if verdict is None:
        print(f"error: unknown class set {digest[:12]} under {classes_dir}",
              file=sys.stderr)
        return 2
    if verdict.get("result") == "pass":
        return 0
    failing = [t for t in verdict.get("failing", ()) if t in set(selection)]
    for test_id in failing:
        print(f"FAIL {test_id}")
    return 1 if failing else 0
