"""Structural model of a JVM class file.

The model is faithful: everything needed for a byte-exact re-encoding is
kept. Code attributes are decoded structurally (they are rewritten during
pool permutation); all other attributes keep their raw payload.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .pool import ConstantPool

MAGIC = 0xCAFEBABE

# Majors 45..52 cover Java 1.1 through Java 8, the corpus range.
SUPPORTED_MAJORS = range(45, 53)


@dataclass(frozen=True)
class RawAttribute:
    name_index: int
    data: bytes

    def name(self, pool: ConstantPool) -> str:
        return pool.utf8(self.name_index)


@dataclass(frozen=True)
class ExceptionHandler:
    start_pc: int
    end_pc: int
    handler_pc: int
    catch_type_index: int  # 0 means "any"


@dataclass(frozen=True)
class CodeAttribute:
    name_index: int
    max_stack: int
    max_locals: int
    code: bytes
    exception_table: tuple
    attributes: tuple

    def name(self, pool: ConstantPool) -> str:
        return pool.utf8(self.name_index)


@dataclass(frozen=True)
class Member:
    """A field or method."""

    access_flags: int
    name_index: int
    descriptor_index: int
    attributes: tuple

    def name(self, pool: ConstantPool) -> str:
        return pool.utf8(self.name_index)

    def descriptor(self, pool: ConstantPool) -> str:
        return pool.utf8(self.descriptor_index)


@dataclass
class RawClassFile:
    minor_version: int
    major_version: int
    pool: ConstantPool
    access_flags: int
    this_class: int
    super_class: int  # 0 for java/lang/Object itself
    interfaces: tuple
    fields: tuple
    methods: tuple
    attributes: tuple

    @property
    def name(self) -> str:
        return self.pool.class_name(self.this_class)

    @property
    def super_name(self):
        if self.super_class == 0:
            return None
        return self.pool.class_name(self.super_class)

    def interface_names(self):
        return tuple(self.pool.class_name(i) for i in self.interfaces)

    def with_(self, **kwargs) -> "RawClassFile":
        new = RawClassFile(**{**self.__dict__, **kwargs})
        return new


def replace_attr(obj, **kwargs):
    """dataclasses.replace that works across our frozen attribute types."""
    return replace(obj, **kwargs)
