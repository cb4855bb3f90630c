"""Recursive-descent parser for Java sources (1.5-1.8 feature set).

Produces the token-inclusive concrete syntax tree described in
``tree.VOCABULARY``. Lambdas and method references are not supported; the
corpus this harness scores predates them.
"""

from __future__ import annotations

from .errors import ParseError
from .lexer import Token, tokenize
from .tree import Node, SourceTree

PRIMITIVES = frozenset(
    {"boolean", "byte", "short", "int", "long", "char", "float", "double", "void"}
)
MODIFIER_KEYWORDS = frozenset(
    """public protected private static final abstract native synchronized
    transient volatile strictfp default""".split()
)
ASSIGN_OPS = frozenset(
    {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}
)

_BINARY_LEVELS = [
    {"||"},
    {"&&"},
    {"|"},
    {"^"},
    {"&"},
    {"==", "!="},
    {"<", ">", "<=", ">=", "instanceof"},
    {"<<", ">>", ">>>"},
    {"+", "-"},
    {"*", "/", "%"},
]


def parse_source(text: str) -> SourceTree:
    """Parse Java source text into a SourceTree; raises ParseError."""
    parser = _Parser(tokenize(text))
    root = parser.compilation_unit()
    return SourceTree.of(root)


def _leaf(tok: Token) -> Node:
    return Node(kind=tok.kind, label=tok.label, span=(tok.start, tok.end))


def _node(kind: str, children: list) -> Node:
    span = (children[0].span[0], children[-1].span[1]) if children else (0, 0)
    return Node(kind=kind, children=children, span=span)


class _Parser:
    def __init__(self, tokens: list):
        self.tokens = tokens
        self.pos = 0
        # journal of (index, original_token) edits made by expect_gt, so
        # tentative parses can be rolled back cleanly
        self.splits = []

    # -- token plumbing -------------------------------------------------

    def cur(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def peek(self, ahead=1) -> Token | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, *kinds) -> bool:
        tok = self.cur()
        return tok is not None and tok.kind in kinds

    def at_op(self, *texts) -> bool:
        tok = self.cur()
        return tok is not None and tok.kind == "operator" and tok.text in texts

    def error(self, message) -> ParseError:
        tok = self.cur()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            return ParseError(message + " (at end of input)",
                              last.line if last else 1, last.column if last else 1)
        return ParseError(f"{message}, found {tok.text!r}", tok.line, tok.column)

    def take(self) -> Node:
        tok = self.cur()
        if tok is None:
            raise self.error("unexpected end of input")
        self.pos += 1
        return _leaf(tok)

    def expect(self, kind) -> Node:
        if not self.at(kind):
            raise self.error(f"expected {kind!r}")
        return self.take()

    def expect_op(self, text) -> Node:
        if not self.at_op(text):
            raise self.error(f"expected {text!r}")
        return self.take()

    def expect_gt(self) -> Node:
        """Consume one '>' even when the lexer merged it into >> or >>>."""
        tok = self.cur()
        if tok is None or tok.kind != "operator" or not tok.text.startswith(">"):
            raise self.error("expected '>'")
        if tok.text == ">":
            return self.take()
        rest = Token("operator", tok.text[1:], tok.start + 1, tok.end,
                     tok.line, tok.column + 1)
        self.splits.append((self.pos, tok))
        self.tokens[self.pos] = rest
        return Node(kind="operator", label=">", span=(tok.start, tok.start + 1))

    # -- tentative parsing ----------------------------------------------

    def attempt(self, production):
        """Run production; on ParseError rewind and return None."""
        saved_pos = self.pos
        saved_splits = len(self.splits)
        try:
            return production()
        except ParseError:
            self.pos = saved_pos
            while len(self.splits) > saved_splits:
                index, original = self.splits.pop()
                self.tokens[index] = original
            return None

    # -- compilation unit ------------------------------------------------

    def compilation_unit(self) -> Node:
        children = []
        if self.at("package"):
            kids = [self.take(), self.qualified_name(), self.expect(";")]
            children.append(_node("package_declaration", kids))
        while self.at("import"):
            kids = [self.take()]
            if self.at("static"):
                kids.append(self.take())
            kids.append(self.qualified_name(allow_star=True))
            kids.append(self.expect(";"))
            children.append(_node("import_declaration", kids))
        while self.cur() is not None:
            if self.at(";"):
                children.append(_node("empty_statement", [self.take()]))
                continue
            children.append(self.type_declaration())
        if not children:
            raise ParseError("empty compilation unit", 1, 1)
        return _node("compilation_unit", children)

    def qualified_name(self, allow_star=False) -> Node:
        kids = [self.wrap_identifier()]
        while self.at(".") and (
            (self.peek() and self.peek().kind == "identifier")
            or (allow_star and self.peek() and self.peek().text == "*")
        ):
            kids.append(self.take())
            if allow_star and self.at_op("*"):
                kids.append(self.take())
                break
            kids.append(self.wrap_identifier())
        return _node("name", kids) if len(kids) > 1 else kids[0]

    def wrap_identifier(self) -> Node:
        tok = self.expect("identifier")
        return Node(kind="name", children=[tok], span=tok.span)

    # -- declarations ----------------------------------------------------

    def modifiers_node(self) -> Node | None:
        kids = []
        while True:
            if self.at(*MODIFIER_KEYWORDS):
                kids.append(self.take())
            elif self.at("@") and self.peek() and self.peek().kind == "identifier" \
                    and self.peek().text != "interface":
                kids.append(self.annotation())
            else:
                break
        return _node("modifiers", kids) if kids else None

    def annotation(self) -> Node:
        kids = [self.expect("@"), self.qualified_name()]
        if self.at("("):
            kids.append(self.argument_list())
        return _node("annotation", kids)

    def type_declaration(self) -> Node:
        mods = self.modifiers_node()
        prefix = [mods] if mods else []
        if self.at("class"):
            return self.class_declaration(prefix)
        if self.at("interface"):
            return self.interface_declaration(prefix)
        if self.at("enum"):
            return self.enum_declaration(prefix)
        raise self.error("expected a type declaration")

    def class_declaration(self, prefix) -> Node:
        kids = prefix + [self.expect("class"), self.wrap_identifier()]
        if self.at_op("<"):
            kids.append(self.type_parameters())
        if self.at("extends"):
            kids.append(self.take())
            kids.append(self.type_node())
        if self.at("implements"):
            kids.append(self.take())
            kids.append(self.type_node())
            while self.at(","):
                kids.append(self.take())
                kids.append(self.type_node())
        kids.append(self.class_body())
        return _node("class_declaration", kids)

    def interface_declaration(self, prefix) -> Node:
        kids = prefix + [self.expect("interface"), self.wrap_identifier()]
        if self.at_op("<"):
            kids.append(self.type_parameters())
        if self.at("extends"):
            kids.append(self.take())
            kids.append(self.type_node())
            while self.at(","):
                kids.append(self.take())
                kids.append(self.type_node())
        kids.append(self.class_body())
        return _node("interface_declaration", kids)

    def enum_declaration(self, prefix) -> Node:
        kids = prefix + [self.expect("enum"), self.wrap_identifier()]
        if self.at("implements"):
            kids.append(self.take())
            kids.append(self.type_node())
            while self.at(","):
                kids.append(self.take())
                kids.append(self.type_node())
        body = [self.expect("{")]
        while self.at("identifier") or self.at("@"):
            const = []
            while self.at("@"):
                const.append(self.annotation())
            const.append(self.wrap_identifier())
            if self.at("("):
                const.append(self.argument_list())
            if self.at("{"):
                const.append(self.class_body())
            body.append(_node("enum_constant", const))
            if self.at(","):
                body.append(self.take())
            else:
                break
        if self.at(";"):
            body.append(self.take())
            while not self.at("}"):
                body.append(self.class_member())
        body.append(self.expect("}"))
        kids.append(_node("class_body", body))
        return _node("enum_declaration", kids)

    def type_parameters(self) -> Node:
        kids = [self.expect_op("<")]
        while True:
            param = [self.wrap_identifier()]
            if self.at("extends"):
                param.append(self.take())
                param.append(self.type_node())
                while self.at_op("&"):
                    param.append(self.take())
                    param.append(self.type_node())
            kids.append(_node("type_parameter", param))
            if self.at(","):
                kids.append(self.take())
            else:
                break
        kids.append(self.expect_gt())
        return _node("type_parameters", kids)

    def class_body(self) -> Node:
        kids = [self.expect("{")]
        while not self.at("}"):
            if self.cur() is None:
                raise self.error("unterminated class body")
            kids.append(self.class_member())
        kids.append(self.expect("}"))
        return _node("class_body", kids)

    def class_member(self) -> Node:
        if self.at(";"):
            return _node("empty_statement", [self.take()])
        # initializer blocks: optional 'static' directly before '{'
        if self.at("{"):
            return _node("initializer_block", [self.block()])
        if self.at("static") and self.peek() and self.peek().kind == "{":
            return _node("initializer_block", [self.take(), self.block()])
        mods = self.modifiers_node()
        prefix = [mods] if mods else []
        if self.at("class"):
            return self.class_declaration(prefix)
        if self.at("interface"):
            return self.interface_declaration(prefix)
        if self.at("enum"):
            return self.enum_declaration(prefix)
        if self.at_op("<"):
            prefix.append(self.type_parameters())
        # constructor: Identifier '('
        if self.at("identifier") and self.peek() and self.peek().kind == "(":
            kids = prefix + [self.wrap_identifier(), self.formal_parameters()]
            if self.at("throws"):
                kids.append(self.throws_clause())
            kids.append(self.block())
            return _node("constructor_declaration", kids)
        ret_type = self.type_node()
        name = self.wrap_identifier()
        if self.at("("):
            kids = prefix + [ret_type, name, self.formal_parameters()]
            while self.at("["):
                kids.append(self.take())
                kids.append(self.expect("]"))
            if self.at("throws"):
                kids.append(self.throws_clause())
            if self.at(";"):
                kids.append(self.take())
            else:
                kids.append(self.block())
            return _node("method_declaration", kids)
        kids = prefix + [ret_type, self.variable_declarator(first_name=name)]
        while self.at(","):
            kids.append(self.take())
            kids.append(self.variable_declarator())
        kids.append(self.expect(";"))
        return _node("field_declaration", kids)

    def variable_declarator(self, first_name=None) -> Node:
        kids = [first_name if first_name is not None else self.wrap_identifier()]
        while self.at("["):
            kids.append(self.take())
            kids.append(self.expect("]"))
        if self.at_op("="):
            kids.append(self.take())
            kids.append(self.variable_initializer())
        return _node("variable_declarator", kids)

    def variable_initializer(self) -> Node:
        if self.at("{"):
            return self.array_initializer()
        return self.expression()

    def array_initializer(self) -> Node:
        kids = [self.expect("{")]
        while not self.at("}"):
            kids.append(self.variable_initializer())
            if self.at(","):
                kids.append(self.take())
            else:
                break
        kids.append(self.expect("}"))
        return _node("array_initializer", kids)

    def formal_parameters(self) -> Node:
        kids = [self.expect("(")]
        while not self.at(")"):
            param = []
            mods = self.modifiers_node()
            if mods:
                param.append(mods)
            param.append(self.type_node())
            if self.at_op("..."):
                param.append(self.take())
            elif self.at("..."):
                param.append(self.take())
            param.append(self.wrap_identifier())
            while self.at("["):
                param.append(self.take())
                param.append(self.expect("]"))
            kids.append(_node("formal_parameter", param))
            if self.at(","):
                kids.append(self.take())
        kids.append(self.expect(")"))
        return _node("formal_parameters", kids)

    def throws_clause(self) -> Node:
        kids = [self.expect("throws"), self.type_node()]
        while self.at(","):
            kids.append(self.take())
            kids.append(self.type_node())
        return _node("throws_clause", kids)

    # -- types -------------------------------------------------------------

    def type_node(self, dims=True) -> Node:
        kids = []
        if self.at(*PRIMITIVES):
            kids.append(self.take())
        else:
            kids.append(self.class_type_segment())
            while self.at(".") and self.peek() and self.peek().kind == "identifier":
                kids.append(self.take())
                kids.append(self.class_type_segment())
        while dims and self.at("[") and self.peek() and self.peek().kind == "]":
            kids.append(self.take())
            kids.append(self.take())
        return _node("type", kids)

    def class_type_segment(self) -> Node:
        name = self.wrap_identifier()
        if self.at_op("<"):
            args = self.type_arguments()
            return _node("name", [name, args])
        return name

    def type_arguments(self) -> Node:
        kids = [self.expect_op("<")]
        if self.at_op(">"):  # diamond
            kids.append(self.expect_gt())
            return _node("type_arguments", kids)
        while True:
            if self.at_op("?"):
                wc = [self.take()]
                if self.at("extends") or self.at("super"):
                    wc.append(self.take())
                    wc.append(self.type_node())
                kids.append(_node("wildcard", wc))
            else:
                kids.append(self.type_node())
            if self.at(","):
                kids.append(self.take())
            else:
                break
        kids.append(self.expect_gt())
        return _node("type_arguments", kids)

    # -- statements ----------------------------------------------------------

    def block(self) -> Node:
        kids = [self.expect("{")]
        while not self.at("}"):
            if self.cur() is None:
                raise self.error("unterminated block")
            kids.append(self.block_statement())
        kids.append(self.expect("}"))
        return _node("block", kids)

    def block_statement(self) -> Node:
        if self.at("class"):
            return self.class_declaration([])
        decl = self.attempt(lambda: self.local_variable_declaration(require=True))
        if decl is not None:
            return decl
        return self.statement()

    def local_variable_declaration(self, require=False, stop_at_semi=True) -> Node:
        kids = []
        mods = self.modifiers_node()
        if mods:
            kids.append(mods)
        kids.append(self.type_node())
        if not self.at("identifier"):
            raise self.error("expected a variable name")
        nxt = self.peek()
        if nxt is None or not (
            nxt.kind in (";", ",", "[")
            or (nxt.kind == "operator" and nxt.text == "=")
        ):
            raise self.error("not a variable declaration")
        kids.append(self.variable_declarator())
        while self.at(","):
            kids.append(self.take())
            kids.append(self.variable_declarator())
        if stop_at_semi:
            kids.append(self.expect(";"))
        return _node("local_variable_declaration", kids)

    def condition(self) -> Node:
        return _node("condition", [self.expect("("), self.expression(), self.expect(")")])

    def statement(self) -> Node:
        if self.at("{"):
            return self.block()
        if self.at(";"):
            return _node("empty_statement", [self.take()])
        if self.at("if"):
            kids = [self.take(), self.condition(), self.statement()]
            if self.at("else"):
                kids.append(self.take())
                kids.append(self.statement())
            return _node("if_statement", kids)
        if self.at("while"):
            return _node("while_statement", [self.take(), self.condition(), self.statement()])
        if self.at("do"):
            kids = [self.take(), self.statement(), self.expect("while"),
                    self.condition(), self.expect(";")]
            return _node("do_statement", kids)
        if self.at("for"):
            return self.for_statement()
        if self.at("switch"):
            return self.switch_statement()
        if self.at("try"):
            return self.try_statement()
        if self.at("return"):
            kids = [self.take()]
            if not self.at(";"):
                kids.append(self.expression())
            kids.append(self.expect(";"))
            return _node("return_statement", kids)
        if self.at("throw"):
            return _node("throw_statement", [self.take(), self.expression(), self.expect(";")])
        if self.at("break"):
            kids = [self.take()]
            if self.at("identifier"):
                kids.append(self.wrap_identifier())
            kids.append(self.expect(";"))
            return _node("break_statement", kids)
        if self.at("continue"):
            kids = [self.take()]
            if self.at("identifier"):
                kids.append(self.wrap_identifier())
            kids.append(self.expect(";"))
            return _node("continue_statement", kids)
        if self.at("synchronized"):
            return _node("synchronized_statement", [self.take(), self.condition(), self.block()])
        if self.at("assert"):
            kids = [self.take(), self.expression()]
            if self.at_op(":"):
                kids.append(self.take())
                kids.append(self.expression())
            kids.append(self.expect(";"))
            return _node("assert_statement", kids)
        if self.at("identifier") and self.peek() and self.peek().kind == "operator" \
                and self.peek().text == ":":
            kids = [self.wrap_identifier(), self.take(), self.statement()]
            return _node("labeled_statement", kids)
        expr = self.expression()
        return _node("expression_statement", [expr, self.expect(";")])

    def for_statement(self) -> Node:
        head = [self.expect("for"), self.expect("(")]
        enhanced = self.attempt(self._enhanced_for_header)
        if enhanced is not None:
            head.extend(enhanced)
            head.append(self.expect(")"))
            head.append(self.statement())
            return _node("enhanced_for_statement", head)
        # classic for
        if self.at(";"):
            head.append(self.take())
        else:
            init = self.attempt(
                lambda: self.local_variable_declaration(require=True)
            )
            if init is not None:
                head.append(init)  # declaration consumed its ';'
            else:
                head.append(self.expression())
                while self.at(","):
                    head.append(self.take())
                    head.append(self.expression())
                head.append(self.expect(";"))
        if not self.at(";"):
            head.append(_node("condition", [self.expression()]))
        head.append(self.expect(";"))
        if not self.at(")"):
            head.append(self.expression())
            while self.at(","):
                head.append(self.take())
                head.append(self.expression())
        head.append(self.expect(")"))
        head.append(self.statement())
        return _node("for_statement", head)

    def _enhanced_for_header(self) -> list:
        kids = []
        mods = self.modifiers_node()
        if mods:
            kids.append(mods)
        kids.append(self.type_node())
        kids.append(self.wrap_identifier())
        if not self.at_op(":"):
            raise self.error("not an enhanced for")
        kids.append(self.take())
        kids.append(self.expression())
        return kids

    def switch_statement(self) -> Node:
        kids = [self.expect("switch"), self.condition(), self.expect("{")]
        while not self.at("}"):
            case = []
            if self.at("case"):
                case.append(self.take())
                case.append(self.expression())
                case.append(self.expect_op(":") if self.at_op(":") else self.expect(":"))
            elif self.at("default"):
                case.append(self.take())
                case.append(self.expect_op(":") if self.at_op(":") else self.expect(":"))
            else:
                raise self.error("expected 'case' or 'default'")
            while not self.at("case", "default", "}"):
                case.append(self.block_statement())
            kids.append(_node("switch_case", case))
        kids.append(self.expect("}"))
        return _node("switch_statement", kids)

    def try_statement(self) -> Node:
        kids = [self.expect("try"), self.block()]
        while self.at("catch"):
            c = [self.take(), self.expect("(")]
            param = []
            mods = self.modifiers_node()
            if mods:
                param.append(mods)
            param.append(self.type_node())
            param.append(self.wrap_identifier())
            c.append(_node("catch_parameter", param))
            c.append(self.expect(")"))
            c.append(self.block())
            kids.append(_node("catch_clause", c))
        if self.at("finally"):
            kids.append(_node("finally_clause", [self.take(), self.block()]))
        return _node("try_statement", kids)

    # -- expressions ----------------------------------------------------------

    def expression(self) -> Node:
        return self.assignment_expression()

    def assignment_expression(self) -> Node:
        left = self.ternary_expression()
        tok = self.cur()
        if tok is not None and tok.kind == "operator" and tok.text in ASSIGN_OPS:
            op = self.take()
            right = self.assignment_expression()
            return _node("assignment", [left, op, right])
        return left

    def ternary_expression(self) -> Node:
        cond = self.binary_expression(0)
        if self.at_op("?"):
            q = self.take()
            then = self.expression()
            colon = self.expect_op(":")
            other = self.ternary_expression()
            return _node("ternary_expression", [cond, q, then, colon, other])
        return cond

    def binary_expression(self, level: int) -> Node:
        if level >= len(_BINARY_LEVELS):
            return self.unary_expression()
        ops = _BINARY_LEVELS[level]
        left = self.binary_expression(level + 1)
        while True:
            tok = self.cur()
            if tok is None:
                return left
            if "instanceof" in ops and tok.kind == "instanceof":
                kw = self.take()
                right = self.type_node()
                left = _node("instanceof_expression", [left, kw, right])
                continue
            if tok.kind == "operator" and tok.text in ops:
                op = self.take()
                right = self.binary_expression(level + 1)
                left = _node("binary_expression", [left, op, right])
                continue
            return left

    def unary_expression(self) -> Node:
        if self.at_op("+", "-", "!", "~"):
            op = self.take()
            return _node("unary_expression", [op, self.unary_expression()])
        if self.at_op("++", "--"):
            op = self.take()
            return _node("update_expression", [op, self.unary_expression()])
        if self.at("("):
            cast = self.attempt(self._cast_expression)
            if cast is not None:
                return cast
        return self.postfix_expression()

    def _cast_expression(self) -> Node:
        lparen = self.expect("(")
        ty = self.type_node()
        rparen = self.expect(")")
        primitive = ty.children and ty.children[0].kind in PRIMITIVES
        tok = self.cur()
        if tok is None:
            raise self.error("dangling cast")
        ok_kinds = {
            "identifier", "number_literal", "string_literal", "char_literal",
            "boolean_literal", "null_literal", "this", "super", "new", "(",
        }
        ok = tok.kind in ok_kinds or (
            primitive and tok.kind == "operator" and tok.text in ("+", "-", "!", "~")
        ) or (tok.kind == "operator" and tok.text in ("!", "~"))
        if not ok:
            raise self.error("not a cast")
        value = self.unary_expression()
        return _node("cast_expression", [lparen, ty, rparen, value])

    def postfix_expression(self) -> Node:
        node = self.primary_expression()
        while True:
            if self.at("."):
                nxt = self.peek()
                if nxt is not None and nxt.kind == "class":
                    dot = self.take()
                    kw = self.take()
                    node = _node("class_literal", [node, dot, kw])
                    continue
                if nxt is not None and nxt.kind == "new":
                    dot = self.take()
                    kw = self.take()
                    seg = self.class_type_segment()
                    node = _node("object_creation",
                                 [node, dot, kw, _node("type", [seg]),
                                  self.argument_list()])
                    continue
                if nxt is not None and nxt.kind in ("this", "super"):
                    dot = self.take()
                    kw = self.take()
                    node = _node("field_access", [node, dot, kw])
                    continue
                dot = self.take()
                name = self.wrap_identifier()
                if self.at("("):
                    args = self.argument_list()
                    node = _node("method_invocation", [node, dot, name, args])
                else:
                    node = _node("field_access", [node, dot, name])
                continue
            if self.at("["):
                lb = self.take()
                index = self.expression()
                rb = self.expect("]")
                node = _node("array_access", [node, lb, index, rb])
                continue
            if self.at_op("++", "--"):
                op = self.take()
                node = _node("update_expression", [node, op])
                continue
            return node

    def argument_list(self) -> Node:
        kids = [self.expect("(")]
        while not self.at(")"):
            kids.append(self.expression())
            if self.at(","):
                kids.append(self.take())
            elif not self.at(")"):
                raise self.error("expected ',' or ')'")
        kids.append(self.expect(")"))
        return _node("argument_list", kids)

    def primary_expression(self) -> Node:
        if self.at("number_literal", "string_literal", "char_literal",
                   "boolean_literal", "null_literal"):
            return self.take()
        if self.at("this"):
            kw = self.take()
            if self.at("("):
                return _node("method_invocation", [kw, self.argument_list()])
            return kw
        if self.at("super"):
            kw = self.take()
            if self.at("("):
                return _node("method_invocation", [kw, self.argument_list()])
            return kw
        if self.at("("):
            lp = self.take()
            inner = self.expression()
            rp = self.expect(")")
            return _node("parenthesized_expression", [lp, inner, rp])
        if self.at("new"):
            return self.creation_expression()
        if self.at(*PRIMITIVES):
            # primitive class literal: int.class, or array type literal
            ty = self.type_node()
            return ty
        if self.at("identifier"):
            name = self.wrap_identifier()
            if self.at("("):
                return _node("method_invocation", [name, self.argument_list()])
            return name
        raise self.error("expected an expression")

    def creation_expression(self) -> Node:
        kw = self.expect("new")
        ty = self.type_node(dims=False)
        if self.at("["):
            kids = [kw, ty]
            dims = []
            while self.at("["):
                dims.append(self.take())
                if not self.at("]"):
                    dims.append(self.expression())
                dims.append(self.expect("]"))
            kids.append(_node("array_dims", dims))
            if self.at("{"):
                kids.append(self.array_initializer())
            return _node("array_creation", kids)
        kids = [kw, ty, self.argument_list()]
        if self.at("{"):
            body = self.class_body()
            body.kind = "anonymous_class_body"
            kids.append(body)
        return _node("object_creation", kids)


def _leaf_like(node: Node) -> Node:
    return node
