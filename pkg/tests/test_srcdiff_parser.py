"""Java lexing and token-inclusive parse trees."""

from pathlib import Path

import pytest

from decompeval.srcdiff import (
    Node,
    ParseError,
    SourceTree,
    parse_source,
    reprint,
    tokenize,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

FIXTURE_SOURCES = sorted(FIXTURES.rglob("*.java"))


def test_corpus_present():
    assert len(FIXTURE_SOURCES) >= 10


def test_tokenize_kinds_and_spans():
    src = 'int x = a.b(42, "s");  // trailing comment\n'
    tokens = tokenize(src)
    kinds = [t.kind for t in tokens]
    assert kinds == ["int", "identifier", "operator", "identifier", ".",
                     "identifier", "(", "number_literal", ",",
                     "string_literal", ")", ";"]
    for token in tokens:
        assert src[token.start:token.end] == token.text


def test_comments_and_whitespace_excluded():
    src = "/* block */ class A { } // line\n"
    texts = [t.text for t in tokenize(src)]
    assert texts == ["class", "A", "{", "}"]


@pytest.mark.parametrize("path", FIXTURE_SOURCES, ids=lambda p: str(p.relative_to(FIXTURES)))
def test_every_fixture_source_parses(path):
    tree = parse_source(path.read_text())
    assert tree.node_count > 10


@pytest.mark.parametrize("path", FIXTURE_SOURCES, ids=lambda p: str(p.relative_to(FIXTURES)))
def test_reprint_round_trip(path):
    text = path.read_text()
    tree = parse_source(text)
    again = parse_source(reprint(tree))
    assert tree.root.isomorphic_to(again.root)


def test_every_token_is_a_leaf():
    src = FIXTURE_SOURCES[0].read_text()
    tree = parse_source(src)
    leaf_texts = [n.label for n in tree.root.walk()
                  if n.is_leaf and n.label is not None]
    token_labels = [t.label for t in tokenize(src) if t.label is not None]
    assert leaf_texts == token_labels


def test_identifiers_wrapped_in_name_nodes():
    tree = parse_source("class A { int foo; }")
    name_nodes = [n for n in tree.root.walk() if n.kind == "name"]
    assert name_nodes
    for node in name_nodes:
        assert len(node.children) == 1
        assert node.children[0].kind == "identifier"


def test_condition_includes_parentheses():
    tree = parse_source("class A { void f(int i) { if (i > 0) { i = 1; } } }")
    conds = [n for n in tree.root.walk() if n.kind == "condition"]
    assert len(conds) == 1
    tokens = list(conds[0].tokens())
    assert tokens[0] == "(" and tokens[-1] == ")"


def test_missing_brace_raises_with_position():
    text = FIXTURE_SOURCES[0].read_text()
    cut = text.rfind("}")
    broken = text[:cut] + text[cut + 1:]
    with pytest.raises(ParseError):
        parse_source(broken)


def test_parse_error_is_not_scored_as_zero():
    with pytest.raises(ParseError):
        parse_source("class {{{")


def test_foo_node_count_is_104():
    tree = parse_source((FIXTURES / "foo" / "src" / "Foo.java").read_text())
    assert tree.node_count == 104


def test_generics_and_casts():
    src = """
    class G {
        java.util.List<String> xs;
        Object f(Comparable<String> c) { return (Object) c; }
        int g() { return (int) 3L; }
    }
    """
    tree = parse_source(src)
    assert any(n.kind == "cast_expression" for n in tree.root.walk())


def test_source_tree_of_counts_nodes():
    leaf = Node(kind="identifier", label="a")
    root = Node(kind="name", children=[leaf])
    tree = SourceTree.of(root)
    assert tree.node_count == 2
