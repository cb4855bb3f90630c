"""Tokenizer for the supported Java feature set (Java 1.5-1.8 sources)."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while""".split()
)

# longest-match first
OPERATORS = [
    ">>>=", "<<=", ">>=", ">>>", "...", "++", "--", "&&", "||", "==", "!=",
    "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    "->", "::", "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|",
    "^", "?", ":", ".", ",", ";", "(", ")", "{", "}", "[", "]", "@",
]

PUNCTUATION = frozenset({"(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "::", "..."})


@dataclass
class Token:
    kind: str  # "identifier", "*_literal", "operator", or the spelling itself
    text: str
    start: int  # byte offset
    end: int
    line: int
    column: int

    @property
    def label(self):
        if self.kind in ("identifier", "number_literal", "string_literal",
                         "char_literal", "boolean_literal", "null_literal",
                         "operator"):
            return self.text
        return None


def tokenize(text: str) -> list:
    tokens = []
    i = 0
    n = len(text)
    line = 1
    line_start = 0
    byte_offset = 0

    def advance_bytes(s: str) -> int:
        return len(s.encode("utf-8", errors="surrogateescape"))

    while i < n:
        ch = text[i]
        if ch in " \t\r\f":
            byte_offset += advance_bytes(ch)
            i += 1
            continue
        if ch == "\n":
            line += 1
            line_start = i + 1
            byte_offset += 1
            i += 1
            continue
        col = i - line_start + 1
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            j = text.find("\n", i)
            j = n if j == -1 else j
            byte_offset += advance_bytes(text[i:j])
            i = j
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "*":
            j = text.find("*/", i + 2)
            if j == -1:
                raise ParseError("unterminated block comment", line, col)
            chunk = text[i : j + 2]
            line += chunk.count("\n")
            if "\n" in chunk:
                line_start = i + chunk.rfind("\n") + 1
            byte_offset += advance_bytes(chunk)
            i = j + 2
            continue
        start_byte = byte_offset

        if ch.isalpha() or ch in "_$":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            word = text[i:j]
            if word in ("true", "false"):
                kind = "boolean_literal"
            elif word == "null":
                kind = "null_literal"
            elif word in KEYWORDS:
                kind = word
            else:
                kind = "identifier"
            byte_offset += advance_bytes(word)
            tokens.append(Token(kind, word, start_byte, byte_offset, line, col))
            i = j
            continue

        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            if text.startswith(("0x", "0X"), i):
                j = i + 2
                while j < n and (text[j] in "0123456789abcdefABCDEF_"):
                    j += 1
            else:
                while j < n and (text[j].isdigit() or text[j] in "._eE"):
                    if text[j] in "eE" and j + 1 < n and text[j + 1] in "+-":
                        j += 2
                        continue
                    # stop a trailing '.' that starts a member access: 1..
                    if text[j] == "." and not (j + 1 < n and text[j + 1].isdigit()):
                        if text[i:j].count(".") > 0:
                            break
                        if j + 1 < n and (text[j + 1].isalpha() or text[j + 1] in "_$"):
                            break
                    j += 1
            if j < n and text[j] in "lLfFdD":
                j += 1
            word = text[i:j]
            byte_offset += advance_bytes(word)
            tokens.append(Token("number_literal", word, start_byte, byte_offset, line, col))
            i = j
            continue

        if ch == '"' or ch == "'":
            quote = ch
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == quote:
                    break
                if text[j] == "\n":
                    raise ParseError("unterminated literal", line, col)
                j += 1
            if j >= n:
                raise ParseError("unterminated literal", line, col)
            word = text[i : j + 1]
            kind = "string_literal" if quote == '"' else "char_literal"
            byte_offset += advance_bytes(word)
            tokens.append(Token(kind, word, start_byte, byte_offset, line, col))
            i = j + 1
            continue

        for op in OPERATORS:
            if text.startswith(op, i):
                kind = op if op in PUNCTUATION else "operator"
                byte_offset += advance_bytes(op)
                tokens.append(Token(kind, op, start_byte, byte_offset, line, col))
                i += len(op)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)

    return tokens
