"""Tree differencing between two Java parse trees.

Two-phase matching in the GumTree style: anchor large isomorphic subtrees
top-down, then extend the mapping bottom-up by container similarity. The
mapping is turned into an edit script with subtree-level inserts/deletes,
subtree moves and label updates. For small trees a branch-and-bound search
over candidate mappings replaces the heuristics, so minimal scripts are
found where the heuristics could settle for more.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

from .tree import Node, SourceTree, parent_map

MIN_ANCHOR_HEIGHT = 2
DICE_THRESHOLD = 0.5
EXACT_NODE_LIMIT = 12
EXACT_STEP_BUDGET = 50_000


@dataclass(frozen=True)
class EditAction:
    """One step of an edit script.

    op is one of "insert", "delete", "move", "update". node is the affected
    node: a destination-tree node for inserts, a source-tree node otherwise.
    Inserts and moves carry the destination parent and the child position.
    Updates carry the replacement label. subtree marks inserts/deletes that
    cover the node's whole subtree rather than the single node.
    """

    op: str
    node: Node
    parent: Node | None = None
    position: int | None = None
    label: str | None = None
    subtree: bool = False

    def describe(self) -> str:
        what = self.node.kind if self.node.label is None else \
            f"{self.node.kind} {self.node.label!r}"
        if self.subtree:
            what += " subtree"
        if self.op == "insert":
            where = self.parent.kind if self.parent is not None else "root"
            return f"insert {what} under {where} at {self.position}"
        if self.op == "delete":
            return f"delete {what}"
        if self.op == "move":
            return f"move {what} under {self.parent.kind} at {self.position}"
        return f"update {what} to {self.label!r}"


@dataclass
class TreeDiff:
    """Mapping plus edit script between a source and destination tree."""

    source: SourceTree
    destination: SourceTree
    mapping: dict  # id(src node) -> dst node
    actions: list

    @property
    def edit_count(self) -> int:
        return len(self.actions)

    def describe(self) -> str:
        return "\n".join(a.describe() for a in self.actions)


class _Mapping:
    """Bidirectional node mapping keyed by object identity."""

    def __init__(self):
        self.src_to_dst = {}
        self.dst_to_src = {}

    def add(self, s: Node, d: Node):
        self.src_to_dst[id(s)] = d
        self.dst_to_src[id(d)] = s

    def add_iso(self, s: Node, d: Node):
        """Map two isomorphic subtrees node by node.

        Pairs whose nodes are already spoken for are skipped so the mapping
        stays injective.
        """
        if not self.has_src(s) and not self.has_dst(d):
            self.add(s, d)
        for a, b in zip(s.children, d.children):
            self.add_iso(a, b)

    def has_src(self, s: Node) -> bool:
        return id(s) in self.src_to_dst

    def has_dst(self, d: Node) -> bool:
        return id(d) in self.dst_to_src

    def dst(self, s: Node):
        return self.src_to_dst.get(id(s))

    def src(self, d: Node):
        return self.dst_to_src.get(id(d))


def diff_trees(source: SourceTree, destination: SourceTree, *,
               min_height: int = MIN_ANCHOR_HEIGHT,
               sim_threshold: float = DICE_THRESHOLD) -> TreeDiff:
    """Compute an edit script that rewrites source into destination."""
    s_root, d_root = source.root, destination.root
    mapping = None
    if source.node_count <= EXACT_NODE_LIMIT \
            and destination.node_count <= EXACT_NODE_LIMIT:
        mapping = _exact_mapping(s_root, d_root)
    if mapping is None:
        mapping = _heuristic_mapping(s_root, d_root, min_height, sim_threshold)
    mapping = _sanitize_mapping(s_root, d_root, mapping)
    actions = _edit_script(s_root, d_root, mapping)
    return TreeDiff(
        source=source,
        destination=destination,
        mapping=dict(mapping.src_to_dst),
        actions=actions,
    )


def diff_sources(original: str, changed: str, **kwargs) -> TreeDiff:
    from .parser import parse_source

    return diff_trees(parse_source(original), parse_source(changed), **kwargs)


def _heuristic_mapping(s_root, d_root, min_height, sim_threshold) -> "_Mapping":
    mapping = _Mapping()
    _top_down(s_root, d_root, mapping, min_height)
    _bottom_up(s_root, d_root, mapping, sim_threshold)
    return mapping


# -- phase 1: top-down anchoring ---------------------------------------------


class _HeightQueue:
    def __init__(self, root: Node):
        self.heap = []
        self.counter = itertools.count()
        self.push(root)

    def push(self, node: Node):
        heapq.heappush(self.heap, (-node.height, next(self.counter), node))

    def peek_height(self) -> int:
        return -self.heap[0][0] if self.heap else 0

    def pop_level(self) -> list:
        h = self.peek_height()
        out = []
        while self.heap and -self.heap[0][0] == h:
            out.append(heapq.heappop(self.heap)[2])
        return out

    def open(self, node: Node):
        for child in node.children:
            self.push(child)


def _top_down(s_root: Node, d_root: Node, mapping: _Mapping, min_height: int):
    s_parents = parent_map(s_root)
    d_parents = parent_map(d_root)
    q1, q2 = _HeightQueue(s_root), _HeightQueue(d_root)
    candidates = []
    while min(q1.peek_height(), q2.peek_height()) >= min_height:
        h1, h2 = q1.peek_height(), q2.peek_height()
        if h1 != h2:
            taller = q1 if h1 > h2 else q2
            for node in taller.pop_level():
                taller.open(node)
            continue
        level1, level2 = q1.pop_level(), q2.pop_level()
        by_sig1, by_sig2 = {}, {}
        for node in level1:
            by_sig1.setdefault(node.signature(), []).append(node)
        for node in level2:
            by_sig2.setdefault(node.signature(), []).append(node)
        matched1, matched2 = set(), set()
        for sig, group1 in by_sig1.items():
            group2 = by_sig2.get(sig, [])
            if not group2:
                continue
            if len(group1) == 1 and len(group2) == 1:
                mapping.add_iso(group1[0], group2[0])
            else:
                candidates.append((group1, group2))
            matched1.update(id(n) for n in group1)
            matched2.update(id(n) for n in group2)
        for node in level1:
            if id(node) not in matched1:
                q1.open(node)
        for node in level2:
            if id(node) not in matched2:
                q2.open(node)
    # resolve ambiguous groups: prefer pairs whose parents look most alike
    scored = []
    for group1, group2 in candidates:
        for s, d in itertools.product(group1, group2):
            score = _dice(s_parents.get(id(s)), d_parents.get(id(d)), mapping)
            scored.append((-score, len(scored), s, d))
    scored.sort()
    taken_s, taken_d = set(), set()
    for _, _, s, d in scored:
        if id(s) in taken_s or id(d) in taken_d:
            continue
        if mapping.has_src(s) or mapping.has_dst(d):
            continue
        mapping.add_iso(s, d)
        taken_s.add(id(s))
        taken_d.add(id(d))


def _dice(s, d, mapping: _Mapping) -> float:
    if s is None or d is None:
        return 0.0
    d_ids = {id(n) for n in d.walk()}
    common = sum(
        1 for n in s.walk()
        if mapping.has_src(n) and id(mapping.dst(n)) in d_ids
    )
    total = s.node_count + d.node_count
    return 2.0 * common / total if total else 0.0


# -- phase 2: bottom-up container matching ------------------------------------


def _bottom_up(s_root: Node, d_root: Node, mapping: _Mapping, threshold: float):
    d_parents = parent_map(d_root)
    for s in s_root.post_order():
        if s is s_root:
            if not mapping.has_src(s) and not mapping.has_dst(d_root) \
                    and s.kind == d_root.kind:
                mapping.add(s, d_root)
                _recover(s, d_root, mapping)
            continue
        if mapping.has_src(s) or not s.children:
            continue
        best, best_score = None, threshold
        for d in _container_candidates(s, d_parents, mapping):
            score = _dice(s, d, mapping)
            if score > best_score:
                best, best_score = d, score
        if best is not None:
            mapping.add(s, best)
            _recover(s, best, mapping)


def _container_candidates(s: Node, d_parents, mapping: _Mapping):
    """Unmapped dst nodes of s's kind above partners of s's descendants."""
    seen = set()
    for desc in s.walk():
        partner = mapping.dst(desc)
        if partner is None:
            continue
        anc = d_parents.get(id(partner))
        while anc is not None:
            if id(anc) in seen:
                break
            seen.add(id(anc))
            if anc.kind == s.kind and not mapping.has_dst(anc):
                yield anc
            anc = d_parents.get(id(anc))


def _recover(s: Node, d: Node, mapping: _Mapping):
    """After matching two containers, pair up leftover children.

    Free children are aligned positionally by kind (longest common
    subsequence); signature-equal pairs map as whole subtrees, the rest map
    as single nodes and recurse. This is what makes pure renames come out
    as label updates instead of delete/insert churn.
    """
    s_free = [c for c in s.children if not mapping.has_src(c)]
    d_free = [c for c in d.children if not mapping.has_dst(c)]
    if not s_free or not d_free:
        return
    for a, b in _lcs_pairs(s_free, d_free, lambda x, y: x.kind == y.kind):
        if a.signature() == b.signature():
            mapping.add_iso(a, b)
        else:
            mapping.add(a, b)
            _recover(a, b, mapping)


# -- exact search for small trees ---------------------------------------------


class _Budget(Exception):
    pass


def _exact_mapping(s_root: Node, d_root: Node):
    """Branch-and-bound over same-kind mappings, minimizing script length.

    Roots are pinned to each other when their kinds agree. Returns None when
    the step budget runs out; the caller falls back to the heuristics.
    """
    if s_root.kind != d_root.kind:
        # nothing anchors the two trees; wholesale replacement is optimal
        return _Mapping()
    s_nodes = [n for n in s_root.walk() if n is not s_root]
    s_parent = parent_map(s_root)
    d_by_kind = {}
    for d in d_root.walk():
        if d is not d_root:
            d_by_kind.setdefault(d.kind, []).append(d)

    seed = _heuristic_mapping(s_root, d_root, MIN_ANCHOR_HEIGHT, DICE_THRESHOLD)
    if not seed.has_src(s_root):
        prior = seed.src(d_root)
        if prior is not None:
            del seed.src_to_dst[id(prior)]
            del seed.dst_to_src[id(d_root)]
        seed.add(s_root, d_root)
    best = {"cost": len(_edit_script(s_root, d_root, seed)), "mapping": seed}
    if best["cost"] == 0:
        return seed

    assignment = {id(s_root): d_root}
    used_dst = {id(d_root)}
    # admissible lower bound: every unmapped src subtree root costs one
    # delete, every label mismatch on a mapped pair costs one update
    floor = [0]
    steps = [0]

    def search(index: int):
        steps[0] += 1
        if steps[0] > EXACT_STEP_BUDGET:
            raise _Budget()
        if floor[0] >= best["cost"]:
            return
        if index == len(s_nodes):
            m = _Mapping()
            m.add(s_root, d_root)
            for s in s_nodes:
                d = assignment.get(id(s))
                if d is not None:
                    m.add(s, d)
            cost = len(_edit_script(s_root, d_root, m))
            if cost < best["cost"]:
                best["cost"] = cost
                best["mapping"] = m
            return
        s = s_nodes[index]
        options = [d for d in d_by_kind.get(s.kind, ())
                   if id(d) not in used_dst]
        # label-equal candidates first; they never cost an update
        options.sort(key=lambda d: d.label != s.label)
        for d in options:
            bump = 1 if d.label != s.label else 0
            assignment[id(s)] = d
            used_dst.add(id(d))
            floor[0] += bump
            search(index + 1)
            floor[0] -= bump
            used_dst.discard(id(d))
            del assignment[id(s)]
        assignment[id(s)] = None
        parent = s_parent.get(id(s))
        is_root_of_gap = parent is None or assignment.get(id(parent)) is not None
        if is_root_of_gap:
            floor[0] += 1
        search(index + 1)
        if is_root_of_gap:
            floor[0] -= 1
        del assignment[id(s)]

    try:
        search(0)
    except _Budget:
        return None
    return best["mapping"]


# -- edit script generation ----------------------------------------------------


def _sanitize_mapping(s_root: Node, d_root: Node, mapping: _Mapping) -> _Mapping:
    """Drop mapped pairs that flip ancestry between the two trees.

    If a maps above s in the source but below it in the destination, the
    script generator would have to move a node into its own subtree. The
    deeper pair is dropped; its nodes fall back to insert/delete.
    """
    enter, leave = {}, {}
    clock = 0
    for n in d_root.walk():
        enter[id(n)] = clock
        clock += 1
    # walk() is pre-order, so a second pass computes subtree extents
    def extent(n: Node) -> int:
        last = enter[id(n)]
        for c in n.children:
            last = max(last, extent(c))
        leave[id(n)] = last
        return last

    extent(d_root)

    def is_strict_ancestor(a: Node, b: Node) -> bool:
        return a is not b and enter[id(a)] <= enter[id(b)] <= leave[id(a)]

    s_parents = parent_map(s_root)
    kept = _Mapping()
    for s in s_root.walk():
        d = mapping.dst(s)
        if d is None or kept.has_dst(d):
            continue
        ok = True
        anc = s_parents.get(id(s))
        while anc is not None:
            pa = kept.dst(anc)
            if pa is not None and is_strict_ancestor(d, pa):
                ok = False
                break
            anc = s_parents.get(id(anc))
        if ok:
            kept.add(s, d)
    return kept


def _edit_script(s_root: Node, d_root: Node, mapping: _Mapping) -> list:
    """Chawathe-style script over the mapping, then subtree folding."""
    mapping = _sanitize_mapping(s_root, d_root, mapping)
    if mapping.dst(s_root) is not d_root:
        # unanchored roots: replace the whole tree
        return [
            EditAction(op="delete", node=s_root, subtree=True),
            EditAction(op="insert", node=d_root, parent=None, position=0,
                       subtree=True),
        ]
    gen = _ScriptState(s_root, d_root, mapping)
    raw = gen.run()
    return _fold_subtrees(raw, s_root, d_root)


class _ScriptState:
    """Generates raw per-node actions while replaying them on a work copy.

    The work copy starts as a clone of the source tree; after run() it is
    shaped exactly like the destination, which the apply module exploits to
    validate scripts independently.
    """

    def __init__(self, s_root: Node, d_root: Node, mapping: _Mapping):
        self.d_root = d_root
        self.work = s_root.deep_copy()
        self.origin = {}  # id(work node) -> original src node (None: inserted)
        for w, s in zip(self.work.walk(), s_root.walk()):
            self.origin[id(w)] = s
        self.map = _Mapping()
        for w in self.work.walk():
            d = mapping.dst(self.origin[id(w)])
            if d is not None:
                self.map.add(w, d)
        self.d_parents = parent_map(d_root)
        self.wp = parent_map(self.work)  # maintained incrementally
        self.in_order_w = set()
        self.in_order_d = set()
        self.actions = []

    def run(self) -> list:
        queue = [self.d_root]
        while queue:
            x = queue.pop(0)
            queue.extend(x.children)
            y = self.d_parents.get(id(x))
            w = self.map.src(x)
            if w is None:
                z = self.map.src(y)
                k = self._find_pos(x)
                w = Node(kind=x.kind, label=x.label, span=x.span)
                self.map.add(w, x)
                self.origin[id(w)] = None
                z.children.insert(k, w)
                self.wp[id(w)] = z
                self.actions.append(
                    EditAction(op="insert", node=x, parent=y, position=k))
            else:
                if w.label != x.label:
                    self.actions.append(
                        EditAction(op="update", node=self.origin[id(w)],
                                   label=x.label))
                    w.label = x.label
                v = self.wp.get(id(w))
                if y is not None and self.map.src(y) is not v:
                    z = self.map.src(y)
                    k = self._find_pos(x)
                    v.children.remove(w)
                    k = min(k, len(z.children))
                    z.children.insert(k, w)
                    self.wp[id(w)] = z
                    self.actions.append(
                        EditAction(op="move", node=self.origin[id(w)],
                                   parent=y, position=k))
            self.in_order_w.add(id(w))
            self.in_order_d.add(id(x))
            self._align_children(w, x)
        for w in list(self.work.post_order()):
            if not self.map.has_src(w):
                parent = self.wp.get(id(w))
                if parent is not None:
                    parent.children.remove(w)
                self.actions.append(
                    EditAction(op="delete", node=self.origin[id(w)]))
        return self.actions

    def _find_pos(self, x: Node) -> int:
        y = self.d_parents.get(id(x))
        before = None
        for sib in y.children:
            if sib is x:
                break
            if id(sib) in self.in_order_d:
                before = sib
        if before is None:
            return 0
        u = self.map.src(before)
        return self.wp[id(u)].children.index(u) + 1

    def _align_children(self, w: Node, x: Node):
        for c in w.children:
            self.in_order_w.discard(id(c))
        for c in x.children:
            self.in_order_d.discard(id(c))
        d_child_ids = {id(c) for c in x.children}
        w_child_ids = {id(c) for c in w.children}
        s1 = [c for c in w.children
              if self.map.has_src(c) and id(self.map.dst(c)) in d_child_ids]
        s2 = [c for c in x.children
              if self.map.has_dst(c) and id(self.map.src(c)) in w_child_ids]
        lcs = _lcs_pairs(s1, s2, lambda a, b: self.map.dst(a) is b)
        lcs_w = {id(a) for a, _ in lcs}
        for a, b in lcs:
            self.in_order_w.add(id(a))
            self.in_order_d.add(id(b))
        for b in s2:
            if id(b) in self.in_order_d:
                continue
            a = self.map.src(b)
            if id(a) in lcs_w:
                continue
            k = self._find_pos(b)
            w.children.remove(a)
            k = min(k, len(w.children))
            w.children.insert(k, a)
            self.actions.append(
                EditAction(op="move", node=self.origin[id(a)],
                           parent=x, position=k))
            self.in_order_w.add(id(a))
            self.in_order_d.add(id(b))


def _lcs_pairs(s1: list, s2: list, equal) -> list:
    m, n = len(s1), len(s2)
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        for j in range(n - 1, -1, -1):
            if equal(s1[i], s2[j]):
                table[i][j] = table[i + 1][j + 1] + 1
            else:
                table[i][j] = max(table[i + 1][j], table[i][j + 1])
    out = []
    i = j = 0
    while i < m and j < n:
        if equal(s1[i], s2[j]):
            out.append((s1[i], s2[j]))
            i += 1
            j += 1
        elif table[i + 1][j] >= table[i][j + 1]:
            i += 1
        else:
            j += 1
    return out


def _fold_subtrees(actions: list, s_root: Node, d_root: Node) -> list:
    """Collapse chains of per-node inserts/deletes into subtree actions.

    A run of inserts covering an entire destination subtree becomes one
    subtree insert at its top; deletes fold the same way. Nodes referenced
    by moves or updates block folding of their ancestors.
    """
    inserted_ids = {id(a.node) for a in actions if a.op == "insert"}
    deleted_ids = {id(a.node) for a in actions if a.op == "delete"}
    blocked_d, blocked_s = set(), set()
    for a in actions:
        if a.op == "move":
            blocked_s.add(id(a.node))
            if a.parent is not None:
                blocked_d.add(id(a.parent))
        elif a.op == "update":
            blocked_s.add(id(a.node))

    d_parents = parent_map(d_root)
    s_parents = parent_map(s_root)

    fold_cache_i, fold_cache_d = {}, {}

    def insert_foldable(x: Node) -> bool:
        key = id(x)
        if key not in fold_cache_i:
            fold_cache_i[key] = all(
                id(n) in inserted_ids and id(n) not in blocked_d
                for n in x.walk()
            )
        return fold_cache_i[key]

    def delete_foldable(s: Node) -> bool:
        key = id(s)
        if key not in fold_cache_d:
            fold_cache_d[key] = all(
                id(n) in deleted_ids and id(n) not in blocked_s
                for n in s.walk()
            )
        return fold_cache_d[key]

    def covered(node: Node, parents, in_set, foldable) -> bool:
        """True when the parent's whole-subtree action subsumes node.

        Foldability is closed under descent, so the chain of drops always
        ends at a surviving subtree action.
        """
        anc = parents.get(id(node))
        return anc is not None and id(anc) in in_set and foldable(anc)

    out = []
    for a in actions:
        if a.op == "insert":
            if covered(a.node, d_parents, inserted_ids, insert_foldable):
                continue
            if insert_foldable(a.node) and a.node.children:
                a = EditAction(op="insert", node=a.node, parent=a.parent,
                               position=a.position, subtree=True)
        elif a.op == "delete":
            if covered(a.node, s_parents, deleted_ids, delete_foldable):
                continue
            if delete_foldable(a.node) and a.node.children:
                a = EditAction(op="delete", node=a.node, subtree=True)
        out.append(a)
    return out
