"""Constant-pool entries and the pool container.

Entries keep their raw byte payloads where Python values would be lossy
(UTF-8 strings use the JVM's modified encoding, floats may carry NaN
payloads), so that serialization is byte-exact.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import BadPoolRef, InconsistentPool

TAG_UTF8 = 1
TAG_INTEGER = 3
TAG_FLOAT = 4
TAG_LONG = 5
TAG_DOUBLE = 6
TAG_CLASS = 7
TAG_STRING = 8
TAG_FIELDREF = 9
TAG_METHODREF = 10
TAG_INTERFACE_METHODREF = 11
TAG_NAME_AND_TYPE = 12
TAG_METHOD_HANDLE = 15
TAG_METHOD_TYPE = 16
TAG_INVOKE_DYNAMIC = 18

TAG_NAMES = {
    TAG_UTF8: "Utf8",
    TAG_INTEGER: "Integer",
    TAG_FLOAT: "Float",
    TAG_LONG: "Long",
    TAG_DOUBLE: "Double",
    TAG_CLASS: "Class",
    TAG_STRING: "String",
    TAG_FIELDREF: "Fieldref",
    TAG_METHODREF: "Methodref",
    TAG_INTERFACE_METHODREF: "InterfaceMethodref",
    TAG_NAME_AND_TYPE: "NameAndType",
    TAG_METHOD_HANDLE: "MethodHandle",
    TAG_METHOD_TYPE: "MethodType",
    TAG_INVOKE_DYNAMIC: "InvokeDynamic",
}

# Long and Double take up two pool slots; the slot after them is unusable.
WIDE_TAGS = frozenset({TAG_LONG, TAG_DOUBLE})


@dataclass(frozen=True)
class CpEntry:
    tag: int = 0

    @property
    def width(self) -> int:
        return 2 if self.tag in WIDE_TAGS else 1


@dataclass(frozen=True)
class Utf8Info(CpEntry):
    raw: bytes = b""
    tag: int = TAG_UTF8

    @property
    def text(self) -> str:
        return decode_modified_utf8(self.raw)


@dataclass(frozen=True)
class IntegerInfo(CpEntry):
    raw: bytes = b"\x00\x00\x00\x00"
    tag: int = TAG_INTEGER

    @property
    def value(self) -> int:
        return struct.unpack(">i", self.raw)[0]


@dataclass(frozen=True)
class FloatInfo(CpEntry):
    raw: bytes = b"\x00\x00\x00\x00"
    tag: int = TAG_FLOAT

    @property
    def value(self) -> float:
        return struct.unpack(">f", self.raw)[0]


@dataclass(frozen=True)
class LongInfo(CpEntry):
    raw: bytes = b"\x00" * 8
    tag: int = TAG_LONG

    @property
    def value(self) -> int:
        return struct.unpack(">q", self.raw)[0]


@dataclass(frozen=True)
class DoubleInfo(CpEntry):
    raw: bytes = b"\x00" * 8
    tag: int = TAG_DOUBLE

    @property
    def value(self) -> float:
        return struct.unpack(">d", self.raw)[0]


@dataclass(frozen=True)
class ClassInfo(CpEntry):
    name_index: int = 0
    tag: int = TAG_CLASS


@dataclass(frozen=True)
class StringInfo(CpEntry):
    string_index: int = 0
    tag: int = TAG_STRING


@dataclass(frozen=True)
class RefInfo(CpEntry):
    """Fieldref, Methodref, or InterfaceMethodref, selected by tag."""

    class_index: int = 0
    name_and_type_index: int = 0
    tag: int = TAG_FIELDREF


@dataclass(frozen=True)
class NameAndTypeInfo(CpEntry):
    name_index: int = 0
    descriptor_index: int = 0
    tag: int = TAG_NAME_AND_TYPE


@dataclass(frozen=True)
class MethodHandleInfo(CpEntry):
    reference_kind: int = 0
    reference_index: int = 0
    tag: int = TAG_METHOD_HANDLE


@dataclass(frozen=True)
class MethodTypeInfo(CpEntry):
    descriptor_index: int = 0
    tag: int = TAG_METHOD_TYPE


@dataclass(frozen=True)
class InvokeDynamicInfo(CpEntry):
    bootstrap_method_attr_index: int = 0
    name_and_type_index: int = 0
    tag: int = TAG_INVOKE_DYNAMIC


def decode_modified_utf8(raw: bytes) -> str:
    """Decode the JVM's modified UTF-8.

    Differences from standard UTF-8: NUL is encoded as 0xC0 0x80 and
    supplementary characters appear as CESU-8 surrogate pairs. Invalid
    bytes decode to U+DC80..DCFF escape surrogates so any payload still
    survives a byte round trip through the symbolic layer.
    """
    units = []
    i = 0
    n = len(raw)
    while i < n:
        b0 = raw[i]
        if 0x01 <= b0 <= 0x7F:
            units.append(b0)
            i += 1
        elif 0xC0 <= b0 <= 0xDF and i + 1 < n and raw[i + 1] & 0xC0 == 0x80:
            units.append(((b0 & 0x1F) << 6) | (raw[i + 1] & 0x3F))
            i += 2
        elif (0xE0 <= b0 <= 0xEF and i + 2 < n
              and raw[i + 1] & 0xC0 == 0x80 and raw[i + 2] & 0xC0 == 0x80):
            units.append(((b0 & 0x0F) << 12) | ((raw[i + 1] & 0x3F) << 6)
                         | (raw[i + 2] & 0x3F))
            i += 3
        else:
            # invalid byte: surrogate-escape it (byte identity holds for
            # bytes >= 0x80; a bare 0x00 is unreachable from valid input)
            units.append(0xDC00 + b0)
            i += 1
    # combine surrogate pairs into supplementary characters
    chars = []
    k = 0
    while k < len(units):
        u = units[k]
        if (0xD800 <= u <= 0xDBFF and k + 1 < len(units)
                and 0xDC00 <= units[k + 1] <= 0xDFFF):
            chars.append(chr(0x10000 + ((u - 0xD800) << 10)
                             + (units[k + 1] - 0xDC00)))
            k += 2
        else:
            chars.append(chr(u))
            k += 1
    return "".join(chars)


def encode_modified_utf8(text: str) -> bytes:
    out = bytearray()
    for ch in text:
        cp = ord(ch)
        if 0x01 <= cp <= 0x7F:
            out.append(cp)
        elif cp <= 0x7FF:  # includes NUL -> 0xC0 0x80
            out.append(0xC0 | (cp >> 6))
            out.append(0x80 | (cp & 0x3F))
        elif 0xDC80 <= cp <= 0xDCFF:
            # escape surrogate from a fallback decode: restore the raw byte
            out.append(cp - 0xDC00)
        elif cp <= 0xFFFF:
            out.append(0xE0 | (cp >> 12))
            out.append(0x80 | ((cp >> 6) & 0x3F))
            out.append(0x80 | (cp & 0x3F))
        else:
            # CESU-8 surrogate pair, 3 bytes each half
            cp -= 0x10000
            for unit in (0xD800 + (cp >> 10), 0xDC00 + (cp & 0x3FF)):
                out.append(0xE0 | (unit >> 12))
                out.append(0x80 | ((unit >> 6) & 0x3F))
                out.append(0x80 | (unit & 0x3F))
    return bytes(out)


class ConstantPool:
    """1-indexed constant pool; wide entries own two slots.

    Slot layout matches the class-file wire format: ``entries[i]`` is None
    for slot 0 and for the shadow slot after each Long/Double.
    """

    def __init__(self, entries=None):
        # entries: list indexed by slot; slot 0 is always None.
        self.entries: list = entries if entries is not None else [None]

    def __len__(self):
        return len(self.entries)

    @property
    def count(self) -> int:
        """The wire-format constant_pool_count (slot count, incl. slot 0)."""
        return len(self.entries)

    def add(self, entry: CpEntry) -> int:
        index = len(self.entries)
        self.entries.append(entry)
        if entry.width == 2:
            self.entries.append(None)
        return index

    def slots(self):
        """Yield (index, entry) for every occupied slot."""
        for i, e in enumerate(self.entries):
            if e is not None:
                yield i, e

    def get(self, index: int, expect_tag=None) -> CpEntry:
        if index < 1 or index >= len(self.entries):
            raise BadPoolRef(f"pool index {index} out of range 1..{len(self.entries) - 1}")
        entry = self.entries[index]
        if entry is None:
            raise BadPoolRef(f"pool index {index} points into the shadow slot of a wide entry")
        if expect_tag is not None and entry.tag != expect_tag:
            raise BadPoolRef(
                f"pool index {index} has tag {TAG_NAMES.get(entry.tag, entry.tag)}, "
                f"expected {TAG_NAMES.get(expect_tag, expect_tag)}"
            )
        return entry

    def utf8(self, index: int) -> str:
        return self.get(index, TAG_UTF8).text

    def class_name(self, index: int) -> str:
        return self.utf8(self.get(index, TAG_CLASS).name_index)

    def name_and_type(self, index: int) -> tuple:
        nat = self.get(index, TAG_NAME_AND_TYPE)
        return self.utf8(nat.name_index), self.utf8(nat.descriptor_index)

    def check_consistent(self):
        """Raise InconsistentPool if any entry references a missing slot."""
        n = len(self.entries)

        def check(idx, what):
            if idx < 1 or idx >= n or self.entries[idx] is None:
                raise InconsistentPool(f"{what} references missing pool slot {idx}")

        for i, e in self.slots():
            if isinstance(e, ClassInfo):
                check(e.name_index, f"Class #{i}")
            elif isinstance(e, StringInfo):
                check(e.string_index, f"String #{i}")
            elif isinstance(e, RefInfo):
                check(e.class_index, f"ref #{i}")
                check(e.name_and_type_index, f"ref #{i}")
            elif isinstance(e, NameAndTypeInfo):
                check(e.name_index, f"NameAndType #{i}")
                check(e.descriptor_index, f"NameAndType #{i}")
            elif isinstance(e, MethodHandleInfo):
                check(e.reference_index, f"MethodHandle #{i}")
            elif isinstance(e, MethodTypeInfo):
                check(e.descriptor_index, f"MethodType #{i}")
            elif isinstance(e, InvokeDynamicInfo):
                check(e.name_and_type_index, f"InvokeDynamic #{i}")
