"""Java source parsing, tree differencing and the distortion metric."""

from .apply import ScriptReplayError, apply_and_compare, apply_script
from .diff import EditAction, TreeDiff, diff_sources, diff_trees
from .distortion import DistortionScore, counted_actions, distortion, distortion_between
from .errors import ParseError
from .lexer import Token, tokenize
from .parser import parse_source
from .tree import (
    IDENTIFIER_KINDS,
    STRUCTURAL_KINDS,
    VOCABULARY,
    Node,
    SourceTree,
    parent_map,
    reprint,
)

__all__ = [
    "EditAction",
    "DistortionScore",
    "IDENTIFIER_KINDS",
    "Node",
    "ParseError",
    "STRUCTURAL_KINDS",
    "ScriptReplayError",
    "SourceTree",
    "Token",
    "TreeDiff",
    "VOCABULARY",
    "apply_and_compare",
    "apply_script",
    "counted_actions",
    "diff_sources",
    "diff_trees",
    "distortion",
    "distortion_between",
    "parent_map",
    "parse_source",
    "reprint",
    "tokenize",
]
