"""Errors raised while decoding, encoding, or rewriting class files."""


class ClassFileError(Exception):
    """Base class; carries the byte offset where decoding went wrong."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class BadMagic(ClassFileError):
    """First four bytes are not 0xCAFEBABE."""


class Truncated(ClassFileError):
    """Input ended in the middle of a structure."""


class BadPoolRef(ClassFileError):
    """A constant-pool index is out of range or refers to the wrong tag."""


class InconsistentPool(ClassFileError):
    """A pool entry references a slot that does not exist."""


class InvalidPermutation(ClassFileError):
    """A pool permutation is not bijective or splits a two-slot entry."""
