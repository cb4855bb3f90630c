#!/usr/bin/env python3
"""Regenerate the committed fixture class files and manifest.json.

The corpus ships pre-built binaries so the evaluation pipeline can run
hermetically (no JDK): a "javac" build and an "ecj" build per source,
plus builds of each mutant variant. The two flavors are behaviorally and
normalize-equal; they differ in constant-pool order, which is exactly the
difference the bytecode comparator must tolerate. Mutant builds differ in
real code, so strict equivalence must reject them.

Run from the repository root:  python3 fixtures/tools/generate_binaries.py
"""

import hashlib
import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "src"))

from decompeval.classfile import parse_class, permute_constant_pool, serialize_class
from decompeval.classfile.builder import (
    ACC_FINAL,
    ACC_PRIVATE,
    ACC_PUBLIC,
    ACC_STATIC,
    ACC_SUPER,
    ClassBuilder,
)
from decompeval.classfile.permute import random_permutation

FIXTURES = Path(__file__).resolve().parents[1]

OBJ = "java/lang/Object"
STR = "java/lang/String"
SB = "java/lang/StringBuilder"


def build_utils(variant: str) -> dict:
    b = ClassBuilder("Utils")
    b.source_file("Utils.java")
    b.default_constructor()
    if variant == "original":
        message = "Invalid URL encoding: not a valid digit (radix 16): "
        b.field(ACC_PRIVATE | ACC_STATIC | ACC_FINAL, "PREFIX", f"L{STR};",
                constant_value_index=b.pb.string("Invalid URL encoding: "))
    else:
        message = "Invalid URL encoding: not a valid digit (radix 16)"
    pb = b.pb
    code = (
        b.code(max_stack=4, max_locals=2)
        .line(5)
        .op("iload_0")
        .op("bipush", imm=16)
        .op("invokestatic", cp=pb.methodref("java/lang/Character", "digit", "(CI)I"))
        .op("istore_1")
        .line(6)
        .op("iload_1")
        .op("ifge", target="ok")
        .line(7)
        .op("new", cp=pb.cls("java/lang/IllegalArgumentException"))
        .op("dup")
        .op("new", cp=pb.cls(SB))
        .op("dup")
        .op("invokespecial", cp=pb.methodref(SB, "<init>", "()V"))
        .op("ldc", cp=pb.string(message))
        .op("invokevirtual", cp=pb.methodref(SB, "append", f"(L{STR};)L{SB};"))
        .op("iload_0")
        .op("invokevirtual", cp=pb.methodref(SB, "append", f"(C)L{SB};"))
        .op("invokevirtual", cp=pb.methodref(SB, "toString", f"()L{STR};"))
        .op("invokespecial", cp=pb.methodref("java/lang/IllegalArgumentException",
                                             "<init>", f"(L{STR};)V"))
        .op("athrow")
        .label("ok")
        .line(9)
        .op("iload_1")
        .op("ireturn")
        .build()
    )
    b.method(ACC_PUBLIC | ACC_STATIC, "decodeDigit", "(C)I", code)
    return {"Utils.class": b.build()}


def build_server(variant: str) -> dict:
    b = ClassBuilder("Server")
    b.source_file("Server.java")
    pb = b.pb
    b.field(ACC_PRIVATE | ACC_STATIC, "server", "LServer;")
    b.field(ACC_PRIVATE | ACC_FINAL, "name", f"L{STR};")

    init = (
        b.code(max_stack=2, max_locals=2)
        .line(6)
        .op("aload_0")
        .op("invokespecial", cp=pb.methodref(OBJ, "<init>", "()V"))
        .op("aload_0")
        .op("aload_1")
        .op("putfield", cp=pb.fieldref("Server", "name", f"L{STR};"))
        .op("return")
        .build()
    )
    b.method(ACC_PRIVATE, "<init>", f"(L{STR};)V", init)

    create = (
        b.code(max_stack=3, max_locals=1)
        .line(10)
        .op("new", cp=pb.cls("Server"))
        .op("dup")
        .op("aload_0")
        .op("invokespecial", cp=pb.methodref("Server", "<init>", f"(L{STR};)V"))
        .op("areturn")
        .build()
    )
    b.method(ACC_PUBLIC | ACC_STATIC, "create", f"(L{STR};)LServer;", create)

    getter = (
        b.code(max_stack=1, max_locals=0)
        .line(14)
        .op("getstatic", cp=pb.fieldref("Server", "server", "LServer;"))
        .op("areturn")
        .build()
    )
    b.method(ACC_PUBLIC | ACC_STATIC, "getServer", "()LServer;", getter)

    # the mutant reads and writes the parameter where the original uses the
    # static field (the parameter-shadowing decompilation bug)
    setter = b.code(max_stack=3, max_locals=1).line(18)
    if variant == "original":
        setter.op("getstatic", cp=pb.fieldref("Server", "server", "LServer;"))
    else:
        setter.op("aload_0")
    setter.op("ifnull", target="store")
    setter.line(19)
    setter.op("new", cp=pb.cls("java/lang/UnsupportedOperationException"))
    setter.op("dup")
    setter.op("ldc", cp=pb.string("Cannot redefine singleton Server"))
    setter.op("invokespecial", cp=pb.methodref("java/lang/UnsupportedOperationException",
                                               "<init>", f"(L{STR};)V"))
    setter.op("athrow")
    setter.label("store").line(21)
    setter.op("aload_0")
    if variant == "original":
        setter.op("putstatic", cp=pb.fieldref("Server", "server", "LServer;"))
    else:
        setter.op("astore_0")
    setter.op("return")
    b.method(ACC_PUBLIC | ACC_STATIC, "setServer", "(LServer;)V", setter.build())

    reset = (
        b.code(max_stack=1, max_locals=0)
        .line(25)
        .op("aconst_null")
        .op("putstatic", cp=pb.fieldref("Server", "server", "LServer;"))
        .op("return")
        .build()
    )
    b.method(ACC_PUBLIC | ACC_STATIC, "reset", "()V", reset)

    name = (
        b.code(max_stack=1, max_locals=1)
        .line(29)
        .op("aload_0")
        .op("getfield", cp=pb.fieldref("Server", "name", f"L{STR};"))
        .op("areturn")
        .build()
    )
    b.method(ACC_PUBLIC, "getName", f"()L{STR};", name)
    return {"Server.class": b.build()}


def build_rules(variant: str) -> dict:
    b = ClassBuilder("Rules")
    b.source_file("Rules.java")
    b.default_constructor()
    pb = b.pb

    obj_overload = (
        b.code(max_stack=2, max_locals=3)
        .line(3)
        .op("aload_2")
        .op("ldc", cp=pb.string("object:"))
        .op("invokevirtual", cp=pb.methodref(SB, "append", f"(L{STR};)L{SB};"))
        .op("aload_1")
        .op("invokevirtual", cp=pb.methodref(SB, "append", f"(L{OBJ};)L{SB};"))
        .op("pop")
        .line(4)
        .op("aload_2")
        .op("areturn")
        .build()
    )
    b.method(ACC_PUBLIC, "applyRules", f"(L{OBJ};L{SB};)L{SB};", obj_overload)

    # the mutant drops the explicit Object cast, so the call resolves to
    # this same overload: self-recursion
    if variant == "original":
        dispatch_desc = f"(L{OBJ};L{SB};)L{SB};"
    else:
        dispatch_desc = f"(Ljava/lang/Comparable;L{SB};)L{SB};"
    cmp_overload = (
        b.code(max_stack=3, max_locals=3)
        .line(8)
        .op("aload_2")
        .op("ldc", cp=pb.string("comparable:"))
        .op("invokevirtual", cp=pb.methodref(SB, "append", f"(L{STR};)L{SB};"))
        .op("pop")
        .line(9)
        .op("aload_0")
        .op("aload_1")
        .op("aload_2")
        .op("invokevirtual", cp=pb.methodref("Rules", "applyRules", dispatch_desc))
        .op("areturn")
        .build()
    )
    b.method(ACC_PUBLIC, "applyRules", f"(Ljava/lang/Comparable;L{SB};)L{SB};",
             cmp_overload)
    return {"Rules.class": b.build()}


def build_foo(variant: str) -> dict:
    b = ClassBuilder("Foo")
    b.source_file("Foo.java")
    b.default_constructor()
    c = b.code(max_stack=2, max_locals=4)
    c.label("outer").label("try_start").label("inner").line(5)
    c.op("iload_1").op("iload_2").op("if_icmpge", target="after_inner")
    c.op("iload_2").op("iinc", local=2, imm=1).op("iload_1").op("idiv")
    c.op("istore_1").op("goto", target="inner")
    c.label("after_inner")
    if variant == "original":
        # break after the try; return outside the loop
        c.label("try_end").op("goto", target="break_out")
        c.label("handler").op("astore_3").line(7)
        c.op("bipush", imm=10).op("istore_1").op("goto", target="outer")
        c.label("break_out").line(12)
        c.op("iload_2").op("ireturn")
    else:
        # decompiler-restructured shape: return hoisted into the try
        c.op("iload_2")
        c.label("try_end").line(6).op("ireturn")
        c.label("handler").op("astore_3").line(8)
        c.op("bipush", imm=10).op("istore_1").op("goto", target="outer")
    c.handler("try_start", "try_end", "handler", "java/lang/RuntimeException")
    b.method(ACC_PUBLIC, "foo", "(II)I", c.build())
    return {"Foo.class": b.build()}


def build_outer(variant: str) -> dict:
    outer = ClassBuilder("Outer")
    outer.source_file("Outer.java")
    pb = outer.pb
    outer.field(ACC_PRIVATE | ACC_FINAL, "base", "I")
    init = (
        outer.code(max_stack=2, max_locals=2)
        .line(4)
        .op("aload_0")
        .op("invokespecial", cp=pb.methodref(OBJ, "<init>", "()V"))
        .op("aload_0")
        .op("iload_1")
        .op("putfield", cp=pb.fieldref("Outer", "base", "I"))
        .op("return")
        .build()
    )
    outer.method(ACC_PUBLIC, "<init>", "(I)V", init)
    shifted = (
        outer.code(max_stack=2, max_locals=2)
        .line(18)
        .op("aload_0")
        .op("getfield", cp=pb.fieldref("Outer", "base", "I"))
        .op("aload_1")
        .op("invokevirtual", cp=pb.methodref("Outer$Counter", "next", "()I"))
        .op("iadd")
        .op("ireturn")
        .build()
    )
    outer.method(ACC_PUBLIC, "shifted", "(LOuter$Counter;)I", shifted)
    outer.inner_class("Outer$Counter", "Outer", "Counter",
                      ACC_PUBLIC | ACC_STATIC)

    counter = ClassBuilder("Outer$Counter", access=ACC_PUBLIC | ACC_SUPER)
    counter.source_file("Outer.java")
    cpb = counter.pb
    counter.field(ACC_PRIVATE, "count", "I")
    counter.default_constructor()
    step = "iconst_1" if variant == "original" else "iconst_2"
    nxt = (
        counter.code(max_stack=3, max_locals=1)
        .line(11)
        .op("aload_0")
        .op("aload_0")
        .op("getfield", cp=cpb.fieldref("Outer$Counter", "count", "I"))
        .op(step)
        .op("iadd")
        .op("putfield", cp=cpb.fieldref("Outer$Counter", "count", "I"))
        .line(12)
        .op("aload_0")
        .op("getfield", cp=cpb.fieldref("Outer$Counter", "count", "I"))
        .op("ireturn")
        .build()
    )
    counter.method(ACC_PUBLIC, "next", "()I", nxt)
    counter.inner_class("Outer$Counter", "Outer", "Counter",
                        ACC_PUBLIC | ACC_STATIC)
    return {"Outer.class": outer.build(), "Outer$Counter.class": counter.build()}


def build_broken(variant: str) -> dict:
    b = ClassBuilder("Broken")
    b.source_file("Broken.java")
    b.default_constructor()
    code = (
        b.code(max_stack=2, max_locals=1)
        .line(3)
        .op("iload_0")
        .op("iconst_3")
        .op("imul")
        .op("ireturn")
        .build()
    )
    b.method(ACC_PUBLIC | ACC_STATIC, "triple", "(I)I", code)
    return {"Broken.class": b.build()}


# fixture name -> (builder, relative path, unit file, failing tests for the
# mutant build; None means the mutant is behavior-preserving)
CORPUS = {
    "utils": (build_utils, "utils", "Utils.java",
              ["UtilsTest.testBadDigitMessage"]),
    "singleton": (build_server, "singleton", "Server.java",
                  ["ServerTest.testSetOnce", "ServerTest.testRedefineRejected"]),
    "overload": (build_rules, "overload", "Rules.java",
                 ["RulesTest.testApplyComparable"]),
    "foo": (build_foo, "foo", "Foo.java", None),
    "inner": (build_outer, "inner", "Outer.java", ["OuterTest.testShifted"]),
}


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def class_set_digest(files: dict) -> str:
    entries = sorted((name, sha256(data)) for name, data in files.items())
    payload = "\n".join(f"{name} {digest}" for name, digest in entries)
    return sha256(payload.encode("ascii"))


def emit(files: dict, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    for old in out_dir.glob("*.class"):
        old.unlink()
    for name, data in files.items():
        (out_dir / name).write_bytes(data)


def flavored(builder, variant: str, seed: str) -> dict:
    """javac flavor: the build as written. ecj flavor: same classes with a
    deterministically shuffled constant pool."""
    raw = {name: serialize_class(cf) for name, cf in builder(variant).items()}
    if seed == "javac":
        return raw
    shuffled = {}
    for name, data in raw.items():
        cf = parse_class(data)
        rng = random.Random(f"{seed}:{variant}:{name}")
        perm = random_permutation(cf.pool, rng)
        shuffled[name] = serialize_class(permute_constant_pool(cf, perm))
    return shuffled


def main():
    manifest = {"sources": {}, "behaviors": {}}

    def record_build(fixture_dir: Path, builder, variant: str,
                     dir_prefix: str, passing, failing):
        dirs = {}
        for flavor in ("javac", "ecj"):
            files = flavored(builder, variant, flavor)
            out_dir = fixture_dir / f"{dir_prefix}classes-{flavor}"
            emit(files, out_dir)
            dirs[flavor] = str(out_dir.relative_to(FIXTURES))
            digest = class_set_digest(files)
            if failing:
                manifest["behaviors"][digest] = {"result": "fail",
                                                 "failing": list(failing)}
            else:
                manifest["behaviors"][digest] = {"result": "pass"}
        return dirs

    for name, (builder, rel, unit, mutant_failing) in CORPUS.items():
        fixture_dir = FIXTURES / rel
        source = fixture_dir / "src" / unit
        mutant_source = fixture_dir / "variants" / "mutant" / unit

        dirs = record_build(fixture_dir, builder, "original", "", True, None)
        manifest["sources"][sha256(source.read_bytes())] = {
            "fixture": name,
            "classes": dirs,
            "variants": {"mutant": str(mutant_source.relative_to(FIXTURES))},
        }

        mdirs = record_build(fixture_dir, builder, "mutant",
                             "variants/mutant-", None, mutant_failing)
        manifest["sources"][sha256(mutant_source.read_bytes())] = {
            "fixture": f"{name}-mutant",
            "classes": mdirs,
        }

    # negative corpus: a fixture whose tests fail on the ORIGINAL classes
    broken_dir = FIXTURES / "negative" / "broken"
    broken_src = broken_dir / "src" / "Broken.java"
    dirs = {}
    for flavor in ("javac", "ecj"):
        files = flavored(build_broken, "original", flavor)
        out_dir = broken_dir / f"classes-{flavor}"
        emit(files, out_dir)
        dirs[flavor] = str(out_dir.relative_to(FIXTURES))
        manifest["behaviors"][class_set_digest(files)] = {
            "result": "fail",
            "failing": ["BrokenTest.testTripleWrongExpectation"],
        }
    manifest["sources"][sha256(broken_src.read_bytes())] = {
        "fixture": "negative-broken", "classes": dirs,
    }

    (FIXTURES / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"wrote {FIXTURES / 'manifest.json'}")
    print(f"{len(manifest['sources'])} sources, "
          f"{len(manifest['behaviors'])} class-set behaviors")


if __name__ == "__main__":
    main()
