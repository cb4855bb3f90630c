"""Programmatic construction of class files.

Used by the test suite and the fixture-corpus generator to produce
committed binaries without a JDK. Not part of the evaluation pipeline:
fidelity guarantees only hold for parse->edit->serialize flows, and this
builder exists so such inputs can be created in the first place.
"""

from __future__ import annotations

import struct

from . import pool as cp
from .code import OPCODE_BY_MNEMONIC, Instruction, encode_instructions
from .model import CodeAttribute, ExceptionHandler, Member, RawAttribute, RawClassFile

ACC_PUBLIC = 0x0001
ACC_PRIVATE = 0x0002
ACC_PROTECTED = 0x0004
ACC_STATIC = 0x0008
ACC_FINAL = 0x0010
ACC_SUPER = 0x0020
ACC_INTERFACE = 0x0200
ACC_ABSTRACT = 0x0400
ACC_SYNTHETIC = 0x1000


class PoolBuilder:
    """Interning constant-pool builder."""

    def __init__(self):
        self.pool = cp.ConstantPool()
        self._cache = {}

    def _intern(self, key, make):
        if key not in self._cache:
            self._cache[key] = self.pool.add(make())
        return self._cache[key]

    def utf8(self, text: str) -> int:
        return self._intern(("u", text), lambda: cp.Utf8Info(raw=cp.encode_modified_utf8(text)))

    def cls(self, name: str) -> int:
        return self._intern(("c", name), lambda: cp.ClassInfo(name_index=self.utf8(name)))

    def string(self, text: str) -> int:
        return self._intern(("s", text), lambda: cp.StringInfo(string_index=self.utf8(text)))

    def integer(self, value: int) -> int:
        return self._intern(("i", value), lambda: cp.IntegerInfo(raw=struct.pack(">i", value)))

    def long(self, value: int) -> int:
        return self._intern(("j", value), lambda: cp.LongInfo(raw=struct.pack(">q", value)))

    def float(self, value: float) -> int:
        return self._intern(("f", value), lambda: cp.FloatInfo(raw=struct.pack(">f", value)))

    def double(self, value: float) -> int:
        return self._intern(("d", value), lambda: cp.DoubleInfo(raw=struct.pack(">d", value)))

    def nat(self, name: str, desc: str) -> int:
        return self._intern(
            ("n", name, desc),
            lambda: cp.NameAndTypeInfo(
                name_index=self.utf8(name), descriptor_index=self.utf8(desc)
            ),
        )

    def _ref(self, tag, owner, name, desc):
        return self._intern(
            (tag, owner, name, desc),
            lambda: cp.RefInfo(
                class_index=self.cls(owner),
                name_and_type_index=self.nat(name, desc),
                tag=tag,
            ),
        )

    def fieldref(self, owner, name, desc) -> int:
        return self._ref(cp.TAG_FIELDREF, owner, name, desc)

    def methodref(self, owner, name, desc) -> int:
        return self._ref(cp.TAG_METHODREF, owner, name, desc)

    def imethodref(self, owner, name, desc) -> int:
        return self._ref(cp.TAG_INTERFACE_METHODREF, owner, name, desc)


class CodeBuilder:
    """Builds a Code attribute from mnemonics and labels."""

    def __init__(self, pb: PoolBuilder, max_stack: int, max_locals: int):
        self.pb = pb
        self.max_stack = max_stack
        self.max_locals = max_locals
        self.instructions: list = []
        self.labels: dict = {}
        self._handlers = []  # (start_label, end_label, handler_label, class or None)
        self._line_numbers = []  # (instruction_index, line)

    def label(self, name: str):
        self.labels[name] = len(self.instructions)
        return self

    def line(self, number: int):
        self._line_numbers.append((len(self.instructions), number))
        return self

    def op(self, mnemonic: str, **fields):
        opcode = OPCODE_BY_MNEMONIC[mnemonic]
        self.instructions.append(Instruction(opcode=opcode, **fields))
        return self

    def handler(self, start: str, end: str, target: str, catch_type=None):
        self._handlers.append((start, end, target, catch_type))
        return self

    def build(self) -> CodeAttribute:
        resolved = []
        for ins in self.instructions:
            if isinstance(ins.target, str):
                ins.target = self.labels[ins.target]
            if isinstance(ins.default, str):
                ins.default = self.labels[ins.default]
            if ins.targets:
                ins.targets = tuple(
                    self.labels[t] if isinstance(t, str) else t for t in ins.targets
                )
            resolved.append(ins)
        code, offsets = encode_instructions(resolved)
        table = tuple(
            ExceptionHandler(
                start_pc=offsets[self.labels[s]],
                end_pc=offsets[self.labels[e]],
                handler_pc=offsets[self.labels[h]],
                catch_type_index=self.pb.cls(c) if c else 0,
            )
            for s, e, h, c in self._handlers
        )
        attributes = []
        if self._line_numbers:
            body = bytearray(struct.pack(">H", len(self._line_numbers)))
            for idx, line in self._line_numbers:
                body += struct.pack(">HH", offsets[idx], line)
            attributes.append(
                RawAttribute(name_index=self.pb.utf8("LineNumberTable"), data=bytes(body))
            )
        return CodeAttribute(
            name_index=self.pb.utf8("Code"),
            max_stack=self.max_stack,
            max_locals=self.max_locals,
            code=code,
            exception_table=table,
            attributes=tuple(attributes),
        )


class ClassBuilder:
    def __init__(self, name: str, super_name="java/lang/Object", major=49, minor=0,
                 access=ACC_PUBLIC | ACC_SUPER):
        self.pb = PoolBuilder()
        self.name = name
        self.super_name = super_name
        self.major = major
        self.minor = minor
        self.access = access
        self.interfaces = []
        self.fields = []
        self.methods = []
        self.attributes = []

    def code(self, max_stack: int, max_locals: int) -> CodeBuilder:
        return CodeBuilder(self.pb, max_stack, max_locals)

    def implement(self, name: str):
        self.interfaces.append(name)
        return self

    def field(self, access, name, desc, constant_value_index=None):
        attrs = []
        if constant_value_index is not None:
            attrs.append(
                RawAttribute(
                    name_index=self.pb.utf8("ConstantValue"),
                    data=struct.pack(">H", constant_value_index),
                )
            )
        self.fields.append(
            Member(access, self.pb.utf8(name), self.pb.utf8(desc), tuple(attrs))
        )
        return self

    def method(self, access, name, desc, code: CodeAttribute | None = None, throws=()):
        attrs = []
        if code is not None:
            attrs.append(code)
        if throws:
            body = struct.pack(
                f">H{len(throws)}H", len(throws), *(self.pb.cls(t) for t in throws)
            )
            attrs.append(RawAttribute(name_index=self.pb.utf8("Exceptions"), data=body))
        self.methods.append(
            Member(access, self.pb.utf8(name), self.pb.utf8(desc), tuple(attrs))
        )
        return self

    def inner_class(self, inner, outer, simple_name, flags):
        self.attributes.append(("inner", (inner, outer, simple_name, flags)))
        return self

    def source_file(self, name: str):
        self.attributes.append(("source", name))
        return self

    def default_constructor(self, super_name=None):
        super_name = super_name or self.super_name
        code = (
            self.code(max_stack=1, max_locals=1)
            .op("aload_0")
            .op("invokespecial", cp=self.pb.methodref(super_name, "<init>", "()V"))
            .op("return")
            .build()
        )
        return self.method(ACC_PUBLIC, "<init>", "()V", code)

    def build(self) -> RawClassFile:
        attributes = []
        inner_rows = [a for kind, a in self.attributes if kind == "inner"]
        if inner_rows:
            body = bytearray(struct.pack(">H", len(inner_rows)))
            for inner, outer, simple, flags in inner_rows:
                body += struct.pack(
                    ">HHHH",
                    self.pb.cls(inner),
                    self.pb.cls(outer) if outer else 0,
                    self.pb.utf8(simple) if simple else 0,
                    flags,
                )
            attributes.append(
                RawAttribute(name_index=self.pb.utf8("InnerClasses"), data=bytes(body))
            )
        for kind, a in self.attributes:
            if kind == "source":
                attributes.append(
                    RawAttribute(
                        name_index=self.pb.utf8("SourceFile"),
                        data=struct.pack(">H", self.pb.utf8(a)),
                    )
                )
        return RawClassFile(
            minor_version=self.minor,
            major_version=self.major,
            pool=self.pb.pool,
            access_flags=self.access,
            this_class=self.pb.cls(self.name),
            super_class=self.pb.cls(self.super_name) if self.super_name else 0,
            interfaces=tuple(self.pb.cls(i) for i in self.interfaces),
            fields=tuple(self.fields),
            methods=tuple(self.methods),
            attributes=tuple(attributes),
        )
