"""Replay edit scripts against a tree to validate them.

apply_script rebuilds the destination tree from the source tree, the action
list and the node mapping; apply_and_compare checks the result is isomorphic
to the actual destination. Every diff the harness trusts goes through this
check in the test suite.
"""

from __future__ import annotations

from .diff import TreeDiff
from .tree import Node, parent_map


class ScriptReplayError(Exception):
    """An action referenced a node the replay state does not know about."""


def apply_script(diff: TreeDiff) -> Node:
    """Apply diff.actions to a copy of the source tree and return the result."""
    src_root = diff.source.root
    work_root = src_root.deep_copy()
    work_of_src = {}  # id(original src node) -> work node
    for w, s in zip(work_root.walk(), src_root.walk()):
        work_of_src[id(s)] = w
    work_of_dst = {}  # id(dst node) -> work node
    for src_id, d in diff.mapping.items():
        if src_id in work_of_src:
            work_of_dst[id(d)] = work_of_src[src_id]
    wp = parent_map(work_root)

    def register_subtree(dst_node: Node, work_node: Node):
        work_of_dst[id(dst_node)] = work_node
        for dc, wc in zip(dst_node.children, work_node.children):
            wp[id(wc)] = work_node
            register_subtree(dc, wc)

    def detach(w: Node):
        parent = wp.get(id(w))
        if parent is not None:
            parent.children.remove(w)
            del wp[id(w)]

    for action in diff.actions:
        if action.op == "insert":
            if action.subtree:
                w = action.node.deep_copy()
            else:
                w = Node(kind=action.node.kind, label=action.node.label,
                         span=action.node.span)
            if action.parent is None:
                work_root = w
            else:
                parent_w = work_of_dst.get(id(action.parent))
                if parent_w is None:
                    raise ScriptReplayError("insert under unknown parent")
                k = min(action.position, len(parent_w.children))
                parent_w.children.insert(k, w)
                wp[id(w)] = parent_w
            if action.subtree:
                register_subtree(action.node, w)
            else:
                work_of_dst[id(action.node)] = w
        elif action.op == "update":
            w = work_of_src.get(id(action.node))
            if w is None:
                raise ScriptReplayError("update of unknown node")
            w.label = action.label
        elif action.op == "move":
            w = work_of_src.get(id(action.node))
            parent_w = work_of_dst.get(id(action.parent))
            if w is None or parent_w is None:
                raise ScriptReplayError("move with unknown endpoint")
            detach(w)
            k = min(action.position, len(parent_w.children))
            parent_w.children.insert(k, w)
            wp[id(w)] = parent_w
        elif action.op == "delete":
            w = work_of_src.get(id(action.node))
            if w is None:
                raise ScriptReplayError("delete of unknown node")
            detach(w)
        else:
            raise ScriptReplayError(f"unknown action {action.op!r}")
    return work_root


def apply_and_compare(diff: TreeDiff) -> bool:
    """True when replaying the script reproduces the destination tree."""
    return apply_script(diff).isomorphic_to(diff.destination.root)
