"""Binary decoding of class files (inverse of writer.serialize_class)."""

from __future__ import annotations

import struct
import warnings

from . import pool as cp
from .errors import BadMagic, BadPoolRef, Truncated
from .model import (
    MAGIC,
    SUPPORTED_MAJORS,
    CodeAttribute,
    ExceptionHandler,
    Member,
    RawAttribute,
    RawClassFile,
)


class _Reader:
    def __init__(self, data: bytes, base: int = 0):
        self.data = data
        self.pos = 0
        self.base = base  # offset of data[0] within the whole file

    @property
    def offset(self) -> int:
        return self.base + self.pos

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise Truncated(
                f"need {n} more bytes, only {len(self.data) - self.pos} left",
                offset=self.offset,
            )
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u1(self) -> int:
        return self.take(1)[0]

    def u2(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u4(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def at_end(self) -> bool:
        return self.pos == len(self.data)


def parse_class(data: bytes) -> RawClassFile:
    """Decode a class file; total over the input (no trailing bytes)."""
    if len(data) < 4:
        raise Truncated("input shorter than the 4-byte magic", offset=0)
    r = _Reader(data)
    magic = r.u4()
    if magic != MAGIC:
        raise BadMagic(f"bad magic 0x{magic:08X}", offset=0)
    minor = r.u2()
    major = r.u2()
    if major not in SUPPORTED_MAJORS:
        warnings.warn(
            f"class-file major version {major} is outside the supported 45..52 "
            "range; parsing best-effort",
            stacklevel=2,
        )

    pool = _parse_pool(r)
    access_flags = r.u2()
    this_class = r.u2()
    super_class = r.u2()
    interfaces = tuple(r.u2() for _ in range(r.u2()))
    fields = tuple(_parse_member(r, pool) for _ in range(r.u2()))
    methods = tuple(_parse_member(r, pool) for _ in range(r.u2()))
    attributes = _parse_attributes(r, pool)
    if not r.at_end():
        raise Truncated(
            f"{len(data) - r.pos} trailing bytes after class structure",
            offset=r.offset,
        )

    cf = RawClassFile(
        minor_version=minor,
        major_version=major,
        pool=pool,
        access_flags=access_flags,
        this_class=this_class,
        super_class=super_class,
        interfaces=interfaces,
        fields=fields,
        methods=methods,
        attributes=attributes,
    )
    _check_top_level_refs(cf)
    return cf


def _parse_pool(r: _Reader) -> cp.ConstantPool:
    count = r.u2()
    entries = [None]
    while len(entries) < count:
        start = r.offset
        tag = r.u1()
        if tag == cp.TAG_UTF8:
            length = r.u2()
            entries.append(cp.Utf8Info(raw=r.take(length)))
        elif tag == cp.TAG_INTEGER:
            entries.append(cp.IntegerInfo(raw=r.take(4)))
        elif tag == cp.TAG_FLOAT:
            entries.append(cp.FloatInfo(raw=r.take(4)))
        elif tag == cp.TAG_LONG:
            entries.append(cp.LongInfo(raw=r.take(8)))
            entries.append(None)
        elif tag == cp.TAG_DOUBLE:
            entries.append(cp.DoubleInfo(raw=r.take(8)))
            entries.append(None)
        elif tag == cp.TAG_CLASS:
            entries.append(cp.ClassInfo(name_index=r.u2()))
        elif tag == cp.TAG_STRING:
            entries.append(cp.StringInfo(string_index=r.u2()))
        elif tag in (cp.TAG_FIELDREF, cp.TAG_METHODREF, cp.TAG_INTERFACE_METHODREF):
            entries.append(
                cp.RefInfo(class_index=r.u2(), name_and_type_index=r.u2(), tag=tag)
            )
        elif tag == cp.TAG_NAME_AND_TYPE:
            entries.append(cp.NameAndTypeInfo(name_index=r.u2(), descriptor_index=r.u2()))
        elif tag == cp.TAG_METHOD_HANDLE:
            entries.append(
                cp.MethodHandleInfo(reference_kind=r.u1(), reference_index=r.u2())
            )
        elif tag == cp.TAG_METHOD_TYPE:
            entries.append(cp.MethodTypeInfo(descriptor_index=r.u2()))
        elif tag == cp.TAG_INVOKE_DYNAMIC:
            entries.append(
                cp.InvokeDynamicInfo(
                    bootstrap_method_attr_index=r.u2(), name_and_type_index=r.u2()
                )
            )
        else:
            raise BadPoolRef(f"unknown constant-pool tag {tag}", offset=start)
        if len(entries) > count:
            raise BadPoolRef(
                "wide constant straddles the end of the pool", offset=start
            )
    return cp.ConstantPool(entries)


def _parse_member(r: _Reader, pool: cp.ConstantPool) -> Member:
    access_flags = r.u2()
    name_index = r.u2()
    descriptor_index = r.u2()
    attributes = _parse_attributes(r, pool)
    return Member(access_flags, name_index, descriptor_index, attributes)


def _parse_attributes(r: _Reader, pool: cp.ConstantPool) -> tuple:
    return tuple(_parse_attribute(r, pool) for _ in range(r.u2()))


def _parse_attribute(r: _Reader, pool: cp.ConstantPool):
    name_index = r.u2()
    length = r.u4()
    start = r.offset
    data = r.take(length)
    try:
        name = pool.utf8(name_index)
    except BadPoolRef as exc:
        raise BadPoolRef(f"attribute name: {exc}", offset=start - 6) from exc
    if name == "Code":
        return _parse_code(data, start, name_index, pool)
    return RawAttribute(name_index=name_index, data=data)


def _parse_code(data: bytes, base: int, name_index: int, pool: cp.ConstantPool):
    r = _Reader(data, base=base)
    max_stack = r.u2()
    max_locals = r.u2()
    code_length = r.u4()
    code = r.take(code_length)
    exception_table = tuple(
        ExceptionHandler(r.u2(), r.u2(), r.u2(), r.u2()) for _ in range(r.u2())
    )
    attributes = _parse_attributes(r, pool)
    if not r.at_end():
        raise Truncated("trailing bytes inside Code attribute", offset=r.offset)
    return CodeAttribute(
        name_index=name_index,
        max_stack=max_stack,
        max_locals=max_locals,
        code=code,
        exception_table=exception_table,
        attributes=attributes,
    )


def _check_top_level_refs(cf: RawClassFile):
    """Validate the pool indices the model itself dereferences."""
    pool = cf.pool
    pool.class_name(cf.this_class)
    if cf.super_class != 0:
        pool.class_name(cf.super_class)
    for i in cf.interfaces:
        pool.class_name(i)
    for member in cf.fields + cf.methods:
        pool.utf8(member.name_index)
        pool.utf8(member.descriptor_index)
