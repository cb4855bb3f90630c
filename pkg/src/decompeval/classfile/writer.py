"""Binary encoding of class files (inverse of parser.parse_class)."""

from __future__ import annotations

import struct

from . import pool as cp
from .errors import InconsistentPool
from .model import MAGIC, CodeAttribute, Member, RawAttribute, RawClassFile


def serialize_class(cf: RawClassFile) -> bytes:
    """Encode to bytes; byte-exact inverse of parse_class on its outputs."""
    cf.pool.check_consistent()
    out = bytearray()
    out += struct.pack(">IHH", MAGIC, cf.minor_version, cf.major_version)
    out += _encode_pool(cf.pool)
    out += struct.pack(">HHH", cf.access_flags, cf.this_class, cf.super_class)
    out += struct.pack(">H", len(cf.interfaces))
    for i in cf.interfaces:
        out += struct.pack(">H", i)
    for members in (cf.fields, cf.methods):
        out += struct.pack(">H", len(members))
        for m in members:
            out += _encode_member(m)
    out += _encode_attributes(cf.attributes)
    return bytes(out)


def _encode_pool(pool: cp.ConstantPool) -> bytes:
    out = bytearray(struct.pack(">H", pool.count))
    for _, e in pool.slots():
        out.append(e.tag)
        if isinstance(e, cp.Utf8Info):
            out += struct.pack(">H", len(e.raw))
            out += e.raw
        elif isinstance(e, (cp.IntegerInfo, cp.FloatInfo, cp.LongInfo, cp.DoubleInfo)):
            out += e.raw
        elif isinstance(e, cp.ClassInfo):
            out += struct.pack(">H", e.name_index)
        elif isinstance(e, cp.StringInfo):
            out += struct.pack(">H", e.string_index)
        elif isinstance(e, cp.RefInfo):
            out += struct.pack(">HH", e.class_index, e.name_and_type_index)
        elif isinstance(e, cp.NameAndTypeInfo):
            out += struct.pack(">HH", e.name_index, e.descriptor_index)
        elif isinstance(e, cp.MethodHandleInfo):
            out += struct.pack(">BH", e.reference_kind, e.reference_index)
        elif isinstance(e, cp.MethodTypeInfo):
            out += struct.pack(">H", e.descriptor_index)
        elif isinstance(e, cp.InvokeDynamicInfo):
            out += struct.pack(
                ">HH", e.bootstrap_method_attr_index, e.name_and_type_index
            )
        else:
            raise InconsistentPool(f"cannot encode pool entry {e!r}")
    return bytes(out)


def _encode_member(m: Member) -> bytes:
    out = bytearray(struct.pack(">HHH", m.access_flags, m.name_index, m.descriptor_index))
    out += _encode_attributes(m.attributes)
    return bytes(out)


def _encode_attributes(attributes: tuple) -> bytes:
    out = bytearray(struct.pack(">H", len(attributes)))
    for a in attributes:
        out += _encode_attribute(a)
    return bytes(out)


def _encode_attribute(a) -> bytes:
    if isinstance(a, CodeAttribute):
        body = bytearray(struct.pack(">HHI", a.max_stack, a.max_locals, len(a.code)))
        body += a.code
        body += struct.pack(">H", len(a.exception_table))
        for h in a.exception_table:
            body += struct.pack(
                ">HHHH", h.start_pc, h.end_pc, h.handler_pc, h.catch_type_index
            )
        body += _encode_attributes(a.attributes)
        data = bytes(body)
    elif isinstance(a, RawAttribute):
        data = a.data
    else:
        raise InconsistentPool(f"cannot encode attribute {a!r}")
    return struct.pack(">HI", a.name_index, len(data)) + data
