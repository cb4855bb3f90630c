"""Syntactic distortion: normalized edit count between two parse trees.

The score is the number of edit actions divided by the original tree's node
count. Label updates on identifier nodes are excluded, so plain variable or
member renames do not count as distortion.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diff import TreeDiff, diff_trees
from .tree import IDENTIFIER_KINDS, SourceTree


@dataclass(frozen=True)
class DistortionScore:
    counted_edits: int
    original_nodes: int

    @property
    def ratio(self) -> float:
        return self.counted_edits / self.original_nodes

    def to_dict(self) -> dict:
        return {
            "counted_edits": self.counted_edits,
            "original_nodes": self.original_nodes,
            "ratio": self.ratio,
        }

    @staticmethod
    def from_dict(data: dict) -> "DistortionScore":
        return DistortionScore(
            counted_edits=int(data["counted_edits"]),
            original_nodes=int(data["original_nodes"]),
        )


def counted_actions(actions: list) -> int:
    """Actions that count toward distortion (renames excluded)."""
    return sum(
        1 for a in actions
        if not (a.op == "update" and a.node.kind in IDENTIFIER_KINDS)
    )


def distortion(actions: list, original: SourceTree) -> DistortionScore:
    """Score an edit script produced by diffing against `original`."""
    if original.node_count < 1:
        raise ValueError("original tree has no nodes")
    return DistortionScore(
        counted_edits=counted_actions(actions),
        original_nodes=original.node_count,
    )


def distortion_between(original: SourceTree, decompiled: SourceTree) -> DistortionScore:
    result = diff_trees(original, decompiled)
    return distortion(result.actions, original)
