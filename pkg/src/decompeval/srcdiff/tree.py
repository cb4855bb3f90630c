"""Labeled ordered source trees.

The tree is a concrete syntax tree minus comments and whitespace: every
lexical token is a leaf, structural grammar productions are internal
nodes. The full node-kind vocabulary is documented in VOCABULARY.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

# The fixed grammar-node vocabulary. Token leaves use the lexical kinds
# (identifier, *_literal, operator) or their own spelling for keywords and
# punctuation; internal nodes use the structural kinds below.
STRUCTURAL_KINDS = (
    "compilation_unit",
    "package_declaration",
    "import_declaration",
    "class_declaration",
    "interface_declaration",
    "enum_declaration",
    "enum_constant",
    "annotation",
    "modifiers",
    "type_parameters",
    "type_parameter",
    "type_arguments",
    "wildcard",
    "class_body",
    "field_declaration",
    "variable_declarator",
    "method_declaration",
    "constructor_declaration",
    "initializer_block",
    "formal_parameters",
    "formal_parameter",
    "throws_clause",
    "type",
    "name",
    "block",
    "local_variable_declaration",
    "expression_statement",
    "if_statement",
    "while_statement",
    "do_statement",
    "for_statement",
    "enhanced_for_statement",
    "switch_statement",
    "switch_case",
    "try_statement",
    "catch_clause",
    "catch_parameter",
    "finally_clause",
    "return_statement",
    "throw_statement",
    "break_statement",
    "continue_statement",
    "synchronized_statement",
    "assert_statement",
    "labeled_statement",
    "empty_statement",
    "condition",
    "assignment",
    "ternary_expression",
    "binary_expression",
    "instanceof_expression",
    "unary_expression",
    "update_expression",
    "cast_expression",
    "parenthesized_expression",
    "method_invocation",
    "field_access",
    "array_access",
    "object_creation",
    "array_creation",
    "array_initializer",
    "argument_list",
    "class_literal",
    "anonymous_class_body",
    "array_dims",
)

TOKEN_KINDS = (
    "identifier",
    "number_literal",
    "string_literal",
    "char_literal",
    "boolean_literal",
    "null_literal",
    "operator",
)
# ...plus one kind per keyword / punctuation spelling ("while", "{", ";").

# Kinds whose label carries renameable text: Update actions on these are
# the "renaming" the distortion metric excludes.
IDENTIFIER_KINDS = frozenset({"identifier"})

VOCABULARY = """\
Tree shape rules (fixed; both diff operands must use the same rules):
  1. Every lexical token is a leaf node. Keywords and punctuation use
     their own spelling as the kind; identifiers, literals and operators
     use a lexical kind with the text as the label.
  2. Comments and whitespace produce no nodes.
  3. Each structural production creates one internal node whose children
     are its tokens and sub-productions, in source order.
  4. Every identifier token is wrapped in a `name` node at its use site.
  5. The controlling expression of if/while/do/for/switch/synchronized,
     including its parentheses, is wrapped in a `condition` node.
  6. Declaration modifiers (including annotations) are grouped under a
     `modifiers` node when at least one is present.
  7. Types are always wrapped in a `type` node.
"""


# eq=False: nodes compare by identity, so list.remove/.index inside the
# differ never confuse two equal-looking leaves
@dataclass(eq=False)
class Node:
    kind: str
    label: str | None = None
    children: list = dc_field(default_factory=list)
    span: tuple = (0, 0)

    def __repr__(self):
        lbl = f" {self.label!r}" if self.label is not None else ""
        return f"<{self.kind}{lbl} x{len(self.children)}>"

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        """Pre-order traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def post_order(self):
        for child in self.children:
            yield from child.post_order()
        yield self

    @property
    def node_count(self) -> int:
        return sum(1 for _ in self.walk())

    @property
    def height(self) -> int:
        if not self.children:
            return 1
        return 1 + max(c.height for c in self.children)

    def signature(self):
        """Hashable structure fingerprint: equal iff subtrees isomorphic."""
        return (self.kind, self.label, tuple(c.signature() for c in self.children))

    def isomorphic_to(self, other: "Node") -> bool:
        if self.kind != other.kind or self.label != other.label:
            return False
        if len(self.children) != len(other.children):
            return False
        return all(a.isomorphic_to(b) for a, b in zip(self.children, other.children))

    def deep_copy(self) -> "Node":
        return Node(
            kind=self.kind,
            label=self.label,
            children=[c.deep_copy() for c in self.children],
            span=self.span,
        )

    def tokens(self):
        """Leaf texts in order (keyword/punct kinds are their own text)."""
        for node in self.pre_order_leaves():
            yield node.label if node.label is not None else node.kind

    def pre_order_leaves(self):
        for node in self.walk():
            if node.is_leaf:
                yield node


@dataclass(frozen=True)
class SourceTree:
    """Parse result: the root node plus derived totals."""

    root: Node
    node_count: int

    @classmethod
    def of(cls, root: Node) -> "SourceTree":
        return cls(root=root, node_count=root.node_count)


def reprint(tree: SourceTree) -> str:
    """Whitespace-normalized reprint; reparsing it yields an isomorphic tree."""
    return " ".join(tree.root.tokens())


def parent_map(root: Node) -> dict:
    parents = {id(root): None}
    for node in root.walk():
        for child in node.children:
            parents[id(child)] = node
    return parents
