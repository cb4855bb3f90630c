"""Rewrite a class file through a constant-pool permutation.

Realizes the "modulo reordering of the constant pool" part of strict
equivalence as a test utility: the output is a well-formed class file that
is behaviorally identical to the input and must normalize equal to it.
"""

from __future__ import annotations

import struct

from . import pool as cp
from .code import decode_instructions, encode_instructions, to_index_targets
from .errors import InvalidPermutation
from .model import CodeAttribute, Member, RawAttribute, RawClassFile

# Attributes that carry pool indices in formats we do not rewrite. Failing
# closed here beats silently emitting a class with dangling indices.
_UNSUPPORTED_FOR_PERMUTE = {
    "RuntimeVisibleAnnotations",
    "RuntimeInvisibleAnnotations",
    "RuntimeVisibleParameterAnnotations",
    "RuntimeInvisibleParameterAnnotations",
    "RuntimeVisibleTypeAnnotations",
    "RuntimeInvisibleTypeAnnotations",
    "AnnotationDefault",
    "MethodParameters",
}


def identity_permutation(pool: cp.ConstantPool) -> dict:
    return {i: i for i, _ in pool.slots()}


def random_permutation(pool: cp.ConstantPool, rng) -> dict:
    """Uniformly shuffle pool entries, keeping wide entries in slot pairs."""
    blocks = [(i, e.width) for i, e in pool.slots()]
    order = list(range(len(blocks)))
    rng.shuffle(order)
    perm = {}
    slot = 1
    for position in order:
        old, width = blocks[position]
        perm[old] = slot
        slot += width
    return perm


def validate_permutation(pool: cp.ConstantPool, perm: dict):
    """Check that perm maps occupied slots bijectively onto a layout that
    keeps every two-slot entry in two adjacent slots."""
    occupied = {i: e for i, e in pool.slots()}
    if set(perm.keys()) != set(occupied.keys()):
        raise InvalidPermutation(
            "permutation domain does not match the occupied pool slots"
        )
    covered = {}
    n_slots = pool.count
    for old, new in perm.items():
        width = occupied[old].width
        for k in range(width):
            slot = new + k
            if slot < 1 or slot >= n_slots:
                raise InvalidPermutation(f"slot {slot} out of range")
            if slot in covered:
                raise InvalidPermutation(
                    f"slots {covered[slot]} and {old} both map onto slot {slot}"
                )
            covered[slot] = old
    if len(covered) != n_slots - 1:
        raise InvalidPermutation(
            "permutation image does not cover the pool (a wide pair was split)"
        )


def permute_constant_pool(cf: RawClassFile, perm: dict) -> RawClassFile:
    validate_permutation(cf.pool, perm)
    old_pool = cf.pool

    def p(index: int) -> int:
        if index == 0:
            return 0
        return perm[index]

    entries = [None] * old_pool.count
    for i, e in old_pool.slots():
        entries[perm[i]] = _rewrite_entry(e, p)
    new_pool = cp.ConstantPool(entries)

    fields = tuple(_rewrite_member(m, old_pool, p) for m in cf.fields)
    methods = tuple(_rewrite_member(m, old_pool, p) for m in cf.methods)
    attributes = tuple(_rewrite_attribute(a, old_pool, p) for a in cf.attributes)

    return RawClassFile(
        minor_version=cf.minor_version,
        major_version=cf.major_version,
        pool=new_pool,
        access_flags=cf.access_flags,
        this_class=p(cf.this_class),
        super_class=p(cf.super_class),
        interfaces=tuple(p(i) for i in cf.interfaces),
        fields=fields,
        methods=methods,
        attributes=attributes,
    )


def _rewrite_entry(e: cp.CpEntry, p):
    if isinstance(e, cp.ClassInfo):
        return cp.ClassInfo(name_index=p(e.name_index))
    if isinstance(e, cp.StringInfo):
        return cp.StringInfo(string_index=p(e.string_index))
    if isinstance(e, cp.RefInfo):
        return cp.RefInfo(
            class_index=p(e.class_index),
            name_and_type_index=p(e.name_and_type_index),
            tag=e.tag,
        )
    if isinstance(e, cp.NameAndTypeInfo):
        return cp.NameAndTypeInfo(
            name_index=p(e.name_index), descriptor_index=p(e.descriptor_index)
        )
    if isinstance(e, cp.MethodHandleInfo):
        return cp.MethodHandleInfo(
            reference_kind=e.reference_kind, reference_index=p(e.reference_index)
        )
    if isinstance(e, cp.MethodTypeInfo):
        return cp.MethodTypeInfo(descriptor_index=p(e.descriptor_index))
    if isinstance(e, cp.InvokeDynamicInfo):
        return cp.InvokeDynamicInfo(
            bootstrap_method_attr_index=e.bootstrap_method_attr_index,
            name_and_type_index=p(e.name_and_type_index),
        )
    return e  # Utf8 / numeric constants carry no indices


def _rewrite_member(m: Member, pool, p) -> Member:
    return Member(
        access_flags=m.access_flags,
        name_index=p(m.name_index),
        descriptor_index=p(m.descriptor_index),
        attributes=tuple(_rewrite_attribute(a, pool, p) for a in m.attributes),
    )


def _rewrite_attribute(a, pool, p):
    if isinstance(a, CodeAttribute):
        return _rewrite_code(a, pool, p)
    name = pool.utf8(a.name_index)
    if name in _UNSUPPORTED_FOR_PERMUTE:
        raise InvalidPermutation(
            f"cannot safely permute a class carrying a {name} attribute"
        )
    rewriter = _PAYLOAD_REWRITERS.get(name)
    data = rewriter(a.data, p) if rewriter else a.data
    return RawAttribute(name_index=p(a.name_index), data=data)


def _rw_u2(data, p):
    (idx,) = struct.unpack(">H", data)
    return struct.pack(">H", p(idx))


def _rw_u2_list(data, p):
    (count,) = struct.unpack_from(">H", data)
    indices = struct.unpack_from(f">{count}H", data, 2)
    return struct.pack(f">H{count}H", count, *(p(i) for i in indices))


def _rw_inner_classes(data, p):
    (count,) = struct.unpack_from(">H", data)
    out = bytearray(struct.pack(">H", count))
    pos = 2
    for _ in range(count):
        inner, outer, name, flags = struct.unpack_from(">HHHH", data, pos)
        out += struct.pack(">HHHH", p(inner), p(outer), p(name), flags)
        pos += 8
    return bytes(out)


def _rw_enclosing_method(data, p):
    cls, method = struct.unpack(">HH", data)
    return struct.pack(">HH", p(cls), p(method))


def _rw_bootstrap_methods(data, p):
    (count,) = struct.unpack_from(">H", data)
    out = bytearray(struct.pack(">H", count))
    pos = 2
    for _ in range(count):
        ref, nargs = struct.unpack_from(">HH", data, pos)
        pos += 4
        args = struct.unpack_from(f">{nargs}H", data, pos)
        pos += 2 * nargs
        out += struct.pack(f">HH{nargs}H", p(ref), nargs, *(p(a) for a in args))
    return bytes(out)


_PAYLOAD_REWRITERS = {
    "ConstantValue": _rw_u2,
    "Signature": _rw_u2,
    "SourceFile": _rw_u2,
    "Exceptions": _rw_u2_list,
    "InnerClasses": _rw_inner_classes,
    "EnclosingMethod": _rw_enclosing_method,
    "BootstrapMethods": _rw_bootstrap_methods,
}


def _rewrite_code(a: CodeAttribute, pool, p) -> CodeAttribute:
    instructions = to_index_targets(decode_instructions(a.code))
    old_offsets = [ins.offset for ins in instructions]
    for ins in instructions:
        if ins.cp is not None:
            ins.cp = p(ins.cp)
    new_code, new_offsets = encode_instructions(instructions)

    old_end = len(a.code)
    pc_map = {old: new_offsets[i] for i, old in enumerate(old_offsets)}
    pc_map[old_end] = new_offsets[-1]
    offsets_changed = any(old != new for old, new in pc_map.items())

    def remap_pc(pc, what):
        if pc not in pc_map:
            raise InvalidPermutation(f"{what} pc {pc} is not an instruction boundary")
        return pc_map[pc]

    exception_table = tuple(
        type(h)(
            start_pc=remap_pc(h.start_pc, "handler start"),
            end_pc=remap_pc(h.end_pc, "handler end"),
            handler_pc=remap_pc(h.handler_pc, "handler"),
            catch_type_index=p(h.catch_type_index),
        )
        for h in a.exception_table
    )

    attributes = []
    for nested in a.attributes:
        name = pool.utf8(nested.name_index)
        if name == "LineNumberTable":
            data = _rw_line_numbers(nested.data, remap_pc)
        elif name in ("LocalVariableTable", "LocalVariableTypeTable"):
            data = _rw_local_variables(nested.data, p, pc_map, remap_pc)
        elif name == "StackMapTable":
            if offsets_changed:
                raise InvalidPermutation(
                    "permutation changes instruction widths but the method "
                    "carries a StackMapTable; offset re-deltaing is unsupported"
                )
            data = _rw_stack_map(nested.data, p)
        elif name in _UNSUPPORTED_FOR_PERMUTE:
            raise InvalidPermutation(
                f"cannot safely permute a method carrying a {name} attribute"
            )
        else:
            data = nested.data
        attributes.append(RawAttribute(name_index=p(nested.name_index), data=data))

    return CodeAttribute(
        name_index=p(a.name_index),
        max_stack=a.max_stack,
        max_locals=a.max_locals,
        code=new_code,
        exception_table=exception_table,
        attributes=tuple(attributes),
    )


def _rw_line_numbers(data, remap_pc):
    (count,) = struct.unpack_from(">H", data)
    out = bytearray(struct.pack(">H", count))
    pos = 2
    for _ in range(count):
        start_pc, line = struct.unpack_from(">HH", data, pos)
        out += struct.pack(">HH", remap_pc(start_pc, "line-number"), line)
        pos += 4
    return bytes(out)


def _rw_local_variables(data, p, pc_map, remap_pc):
    (count,) = struct.unpack_from(">H", data)
    out = bytearray(struct.pack(">H", count))
    pos = 2
    for _ in range(count):
        start_pc, length, name, desc, index = struct.unpack_from(">HHHHH", data, pos)
        new_start = remap_pc(start_pc, "local-variable start")
        new_end = remap_pc(start_pc + length, "local-variable end")
        out += struct.pack(
            ">HHHHH", new_start, new_end - new_start, p(name), p(desc), index
        )
        pos += 10
    return bytes(out)


def _rw_stack_map(data, p):
    """Rewrite the cpool indices inside a StackMapTable (offsets unchanged)."""
    (count,) = struct.unpack_from(">H", data)
    out = bytearray(struct.pack(">H", count))
    pos = 2

    def copy(n):
        nonlocal pos
        out.extend(data[pos : pos + n])
        pos += n

    def rewrite_vtis(n):
        nonlocal pos
        for _ in range(n):
            tag = data[pos]
            copy(1)
            if tag == 7:  # Object_variable_info: cpool index
                (idx,) = struct.unpack_from(">H", data, pos)
                out += struct.pack(">H", p(idx))
                pos += 2
            elif tag == 8:  # Uninitialized_variable_info: bytecode offset
                copy(2)

    for _ in range(count):
        frame_type = data[pos]
        copy(1)
        if frame_type <= 63:
            pass
        elif frame_type <= 127:
            rewrite_vtis(1)
        elif frame_type == 247:
            copy(2)
            rewrite_vtis(1)
        elif 248 <= frame_type <= 251:
            copy(2)
        elif 252 <= frame_type <= 254:
            copy(2)
            rewrite_vtis(frame_type - 251)
        elif frame_type == 255:
            copy(2)
            (n_locals,) = struct.unpack_from(">H", data, pos)
            copy(2)
            rewrite_vtis(n_locals)
            (n_stack,) = struct.unpack_from(">H", data, pos)
            copy(2)
            rewrite_vtis(n_stack)
        else:
            raise InvalidPermutation(f"reserved StackMapTable frame type {frame_type}")
    return bytes(out)
