"""Pool-order-independent symbolic view of a class, and strict equivalence.

Two class files that differ only by a constant-pool permutation (or by
attributes in the ignore set) normalize to identical values. Instruction
operands are resolved to symbolic strings, branch targets become
instruction indices, and narrow/wide encodings of the same logical
instruction collapse to one spelling.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from . import pool as cp
from .code import decode_instructions, to_index_targets
from .model import CodeAttribute, RawAttribute, RawClassFile

# Debug metadata shifts on any recompilation, so it is excluded from strict
# equivalence by default; the set is a CLI-configurable choice, not a given.
DEFAULT_IGNORED_ATTRIBUTES = frozenset(
    {
        "SourceFile",
        "LineNumberTable",
        "LocalVariableTable",
        "LocalVariableTypeTable",
        "StackMapTable",
    }
)

# Narrow/wide encodings of one logical instruction.
_MNEMONIC_ALIASES = {"ldc_w": "ldc", "goto_w": "goto", "jsr_w": "jsr"}
for _t in "ilfda":
    for _n in range(4):
        _MNEMONIC_ALIASES[f"{_t}load_{_n}"] = f"{_t}load"
        _MNEMONIC_ALIASES[f"{_t}store_{_n}"] = f"{_t}store"


@dataclass(frozen=True)
class NormalizedCode:
    max_stack: int
    max_locals: int
    instructions: tuple
    handlers: tuple
    attributes: tuple


@dataclass(frozen=True)
class NormalizedMember:
    name: str
    descriptor: str
    access_flags: int
    attributes: tuple

    @property
    def key(self):
        return (self.name, self.descriptor)


@dataclass(frozen=True)
class NormalizedClass:
    name: str
    access_flags: int
    super_name: object
    interfaces: tuple
    fields: tuple
    methods: tuple
    attributes: tuple


@dataclass(frozen=True)
class Difference:
    location: str
    kind: str
    original: str
    recompiled: str


@dataclass(frozen=True)
class EquivalenceReport:
    equal: bool
    differences: tuple

    def to_dict(self):
        return {
            "equal": self.equal,
            "differences": [
                {
                    "location": d.location,
                    "kind": d.kind,
                    "original": d.original,
                    "recompiled": d.recompiled,
                }
                for d in self.differences
            ],
        }

    @staticmethod
    def from_dict(data) -> "EquivalenceReport":
        return EquivalenceReport(
            equal=data["equal"],
            differences=tuple(
                Difference(d["location"], d["kind"], d["original"], d["recompiled"])
                for d in data["differences"]
            ),
        )

    def render_text(self) -> str:
        if self.equal:
            return "equal\n"
        lines = [f"not equal ({len(self.differences)} differences)"]
        for d in self.differences:
            lines.append(f"  {d.location} [{d.kind}]")
            lines.append(f"    original:   {d.original}")
            lines.append(f"    recompiled: {d.recompiled}")
        return "\n".join(lines) + "\n"


def normalize(cf: RawClassFile, ignore=DEFAULT_IGNORED_ATTRIBUTES) -> NormalizedClass:
    pool = cf.pool
    bootstrap = _decode_bootstrap_methods(cf, pool)

    def norm_members(members):
        normed = [
            NormalizedMember(
                name=m.name(pool),
                descriptor=m.descriptor(pool),
                access_flags=m.access_flags,
                attributes=_norm_attributes(m.attributes, pool, ignore, bootstrap),
            )
            for m in members
        ]
        return tuple(sorted(normed, key=lambda m: m.key))

    return NormalizedClass(
        name=cf.name,
        access_flags=cf.access_flags,
        super_name=cf.super_name,
        interfaces=cf.interface_names(),
        fields=norm_members(cf.fields),
        methods=norm_members(cf.methods),
        attributes=_norm_attributes(cf.attributes, pool, ignore, bootstrap),
    )


def _decode_bootstrap_methods(cf: RawClassFile, pool):
    for a in cf.attributes:
        if isinstance(a, RawAttribute) and a.name(pool) == "BootstrapMethods":
            data = a.data
            (count,) = struct.unpack_from(">H", data)
            pos = 2
            methods = []
            for _ in range(count):
                ref, nargs = struct.unpack_from(">HH", data, pos)
                pos += 4
                args = struct.unpack_from(f">{nargs}H", data, pos)
                pos += 2 * nargs
                methods.append(
                    (
                        _symbol(pool, ref),
                        tuple(_symbol(pool, arg) for arg in args),
                    )
                )
            return tuple(methods)
    return ()


def _norm_attributes(attributes, pool, ignore, bootstrap) -> tuple:
    out = []
    for a in attributes:
        if isinstance(a, CodeAttribute):
            name = "Code"
        else:
            name = a.name(pool)
        if name in ignore:
            continue
        # BootstrapMethods is folded into invokedynamic operands.
        if name == "BootstrapMethods":
            continue
        out.append((name, _norm_attribute(name, a, pool, ignore, bootstrap)))
    return tuple(sorted(out, key=lambda pair: pair[0]))


def _norm_attribute(name, a, pool, ignore, bootstrap):
    if isinstance(a, CodeAttribute):
        return _norm_code(a, pool, ignore, bootstrap)
    data = a.data
    if name == "ConstantValue":
        return _symbol(pool, struct.unpack(">H", data)[0])
    if name == "Signature":
        return pool.utf8(struct.unpack(">H", data)[0])
    if name == "SourceFile":
        return pool.utf8(struct.unpack(">H", data)[0])
    if name == "Exceptions":
        (count,) = struct.unpack_from(">H", data)
        indices = struct.unpack_from(f">{count}H", data, 2)
        return tuple(pool.class_name(i) for i in indices)
    if name == "InnerClasses":
        (count,) = struct.unpack_from(">H", data)
        rows = []
        pos = 2
        for _ in range(count):
            inner, outer, simple, flags = struct.unpack_from(">HHHH", data, pos)
            rows.append(
                (
                    pool.class_name(inner) if inner else None,
                    pool.class_name(outer) if outer else None,
                    pool.utf8(simple) if simple else None,
                    flags,
                )
            )
            pos += 8
        return tuple(sorted(rows, key=lambda r: (r[0] or "",)))
    if name == "EnclosingMethod":
        cls, method = struct.unpack(">HH", data)
        return (
            pool.class_name(cls),
            pool.name_and_type(method) if method else None,
        )
    if name == "LineNumberTable":
        (count,) = struct.unpack_from(">H", data)
        return tuple(struct.unpack_from(">HH", data, 2 + 4 * i) for i in range(count))
    if name in ("LocalVariableTable", "LocalVariableTypeTable"):
        (count,) = struct.unpack_from(">H", data)
        rows = []
        for i in range(count):
            start, length, n, d, idx = struct.unpack_from(">HHHHH", data, 2 + 10 * i)
            rows.append((start, length, pool.utf8(n), pool.utf8(d), idx))
        return tuple(sorted(rows))
    # Unknown attribute: fail closed by comparing the raw payload.
    return data


def _norm_code(a: CodeAttribute, pool, ignore, bootstrap) -> NormalizedCode:
    instructions = to_index_targets(decode_instructions(a.code))
    offset_to_index = {ins.offset: i for i, ins in enumerate(instructions)}
    offset_to_index[len(a.code)] = len(instructions)
    symbolic = tuple(
        _symbolic_instruction(ins, pool, bootstrap) for ins in instructions
    )
    handlers = tuple(
        (
            offset_to_index[h.start_pc],
            offset_to_index[h.end_pc],
            offset_to_index[h.handler_pc],
            pool.class_name(h.catch_type_index) if h.catch_type_index else None,
        )
        for h in a.exception_table
    )
    attributes = _norm_attributes(a.attributes, pool, ignore, bootstrap)
    return NormalizedCode(
        max_stack=a.max_stack,
        max_locals=a.max_locals,
        instructions=symbolic,
        handlers=handlers,
        attributes=attributes,
    )


def _symbolic_instruction(ins, pool, bootstrap) -> str:
    mnemonic = _MNEMONIC_ALIASES.get(ins.mnemonic, ins.mnemonic)
    parts = [mnemonic]
    if ins.mnemonic.rsplit("_", 1)[-1] in "0123" and mnemonic != ins.mnemonic:
        parts.append(ins.mnemonic.rsplit("_", 1)[-1])
    elif ins.local is not None:
        parts.append(str(ins.local))
    if ins.cp is not None:
        if ins.mnemonic == "invokedynamic":
            nat = pool.get(ins.cp, cp.TAG_INVOKE_DYNAMIC)
            name, desc = pool.name_and_type(nat.name_and_type_index)
            bsm = (
                bootstrap[nat.bootstrap_method_attr_index]
                if nat.bootstrap_method_attr_index < len(bootstrap)
                else f"#bsm{nat.bootstrap_method_attr_index}"
            )
            parts.append(f"{name}:{desc} bsm={bsm}")
        else:
            parts.append(_symbol(pool, ins.cp))
    if ins.imm is not None:
        parts.append(str(ins.imm))
    if ins.atype is not None:
        parts.append(str(ins.atype))
    if ins.dims is not None:
        parts.append(f"dims={ins.dims}")
    if ins.count is not None:
        parts.append(f"count={ins.count}")
    if ins.target is not None:
        parts.append(f"->@{ins.target}")
    if ins.default is not None:
        parts.append(f"default->@{ins.default}")
    if ins.targets:
        if ins.match_keys:
            pairs = ",".join(
                f"{k}->@{t}" for k, t in zip(ins.match_keys, ins.targets)
            )
        else:
            pairs = ",".join(
                f"{ins.low + i}->@{t}" for i, t in enumerate(ins.targets)
            )
        parts.append(f"[{pairs}]")
    return " ".join(parts)


def _symbol(pool, index: int) -> str:
    """Render any pool entry as a pool-order-independent string."""
    e = pool.get(index)
    if isinstance(e, cp.Utf8Info):
        return f"utf8 {e.text!r}"
    if isinstance(e, cp.IntegerInfo):
        return f"int {e.value}"
    if isinstance(e, cp.FloatInfo):
        return f"float {e.raw.hex()}"
    if isinstance(e, cp.LongInfo):
        return f"long {e.value}"
    if isinstance(e, cp.DoubleInfo):
        return f"double {e.raw.hex()}"
    if isinstance(e, cp.ClassInfo):
        return f"class {pool.utf8(e.name_index)}"
    if isinstance(e, cp.StringInfo):
        return f"string {pool.utf8(e.string_index)!r}"
    if isinstance(e, cp.RefInfo):
        kind = {
            cp.TAG_FIELDREF: "field",
            cp.TAG_METHODREF: "method",
            cp.TAG_INTERFACE_METHODREF: "imethod",
        }[e.tag]
        owner = pool.class_name(e.class_index)
        name, desc = pool.name_and_type(e.name_and_type_index)
        return f"{kind} {owner}.{name}:{desc}"
    if isinstance(e, cp.NameAndTypeInfo):
        return f"nat {pool.utf8(e.name_index)}:{pool.utf8(e.descriptor_index)}"
    if isinstance(e, cp.MethodHandleInfo):
        return f"handle {e.reference_kind} {_symbol(pool, e.reference_index)}"
    if isinstance(e, cp.MethodTypeInfo):
        return f"mtype {pool.utf8(e.descriptor_index)}"
    if isinstance(e, cp.InvokeDynamicInfo):
        name, desc = pool.name_and_type(e.name_and_type_index)
        return f"indy {e.bootstrap_method_attr_index} {name}:{desc}"
    return repr(e)


def strict_equivalence(a: NormalizedClass, b: NormalizedClass) -> EquivalenceReport:
    """Total comparison; differences localize the first divergence per member."""
    diffs = []

    def diff(location, kind, orig, rec):
        diffs.append(Difference(location, kind, str(orig), str(rec)))

    for attr in ("name", "access_flags", "super_name", "interfaces"):
        va, vb = getattr(a, attr), getattr(b, attr)
        if va != vb:
            diff(f"class.{attr}", attr.replace("_", "-"), va, vb)

    _diff_attributes(f"class {a.name}", a.attributes, b.attributes, diff)

    for section in ("fields", "methods"):
        left = {m.key: m for m in getattr(a, section)}
        right = {m.key: m for m in getattr(b, section)}
        for key in sorted(set(left) | set(right)):
            loc = f"{section[:-1]} {key[0]}{key[1]}"
            if key not in right:
                diff(loc, "missing-member", "present", "absent")
                continue
            if key not in left:
                diff(loc, "extra-member", "absent", "present")
                continue
            ma, mb = left[key], right[key]
            if ma.access_flags != mb.access_flags:
                diff(loc, "flags", f"0x{ma.access_flags:04x}", f"0x{mb.access_flags:04x}")
            _diff_attributes(loc, ma.attributes, mb.attributes, diff)

    return EquivalenceReport(equal=not diffs, differences=tuple(diffs))


def _diff_attributes(location, attrs_a, attrs_b, diff):
    da, db = dict(attrs_a), dict(attrs_b)
    for name in sorted(set(da) | set(db)):
        loc = f"{location}/{name}"
        if name not in db:
            diff(loc, "missing-attribute", "present", "absent")
        elif name not in da:
            diff(loc, "extra-attribute", "absent", "present")
        elif isinstance(da[name], NormalizedCode):
            _diff_code(loc, da[name], db[name], diff)
        elif da[name] != db[name]:
            diff(loc, "attribute", da[name], db[name])


def _diff_code(location, ca: NormalizedCode, cb: NormalizedCode, diff):
    if not isinstance(cb, NormalizedCode):
        diff(location, "attribute", "Code", type(cb).__name__)
        return
    if (ca.max_stack, ca.max_locals) != (cb.max_stack, cb.max_locals):
        diff(
            location,
            "code-frame",
            f"stack={ca.max_stack} locals={ca.max_locals}",
            f"stack={cb.max_stack} locals={cb.max_locals}",
        )
    # Localize the first diverging instruction.
    for i, (ia, ib) in enumerate(zip(ca.instructions, cb.instructions)):
        if ia != ib:
            diff(f"{location}@{i}", "instruction", ia, ib)
            break
    else:
        if len(ca.instructions) != len(cb.instructions):
            diff(
                location,
                "code-length",
                f"{len(ca.instructions)} instructions",
                f"{len(cb.instructions)} instructions",
            )
    if ca.handlers != cb.handlers:
        diff(location, "exception-table", ca.handlers, cb.handlers)
    _diff_attributes(location, ca.attributes, cb.attributes, diff)
