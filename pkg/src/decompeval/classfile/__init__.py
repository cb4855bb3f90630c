"""JVM class-file parsing, serialization, and strict-equivalence checks."""

from .errors import (
    BadMagic,
    BadPoolRef,
    ClassFileError,
    InconsistentPool,
    InvalidPermutation,
    Truncated,
)
from .model import CodeAttribute, ExceptionHandler, Member, RawAttribute, RawClassFile
from .normalize import (
    DEFAULT_IGNORED_ATTRIBUTES,
    EquivalenceReport,
    NormalizedClass,
    normalize,
    strict_equivalence,
)
from .parser import parse_class
from .permute import (
    identity_permutation,
    permute_constant_pool,
    random_permutation,
    validate_permutation,
)
from .writer import serialize_class

__all__ = [
    "BadMagic",
    "BadPoolRef",
    "ClassFileError",
    "CodeAttribute",
    "DEFAULT_IGNORED_ATTRIBUTES",
    "EquivalenceReport",
    "ExceptionHandler",
    "InconsistentPool",
    "InvalidPermutation",
    "Member",
    "NormalizedClass",
    "RawAttribute",
    "RawClassFile",
    "Truncated",
    "identity_permutation",
    "normalize",
    "parse_class",
    "permute_constant_pool",
    "random_permutation",
    "serialize_class",
    "strict_equivalence",
    "validate_permutation",
]
