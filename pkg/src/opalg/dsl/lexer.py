"""
Tokenizer for .oad scripts.

Tokens: NAME, INT, punctuation (including the two-character "=="), EOF.
"#" starts a comment running to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from opalg.errors import ParseError, SourceSpan


class TokenKind(str, Enum):
    NAME = "NAME"
    INT = "INT"
    PUNCT = "PUNCT"
    EOF = "EOF"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    value: str
    span: SourceSpan

    def describe(self) -> str:
        return "end of input" if self.kind is TokenKind.EOF else self.value


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<punct>==|[()\[\]{},;:=+\-*/^])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    """Split `text` into tokens; the list always ends with an EOF token."""
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        span = SourceSpan(line, pos - line_start + 1)
        if m is None:
            raise ParseError(span, "a token", text[pos])
        kind = m.lastgroup
        if kind == "newline":
            line, line_start = line + 1, m.end()
        elif kind == "name":
            tokens.append(Token(TokenKind.NAME, m.group(), span))
        elif kind == "int":
            tokens.append(Token(TokenKind.INT, m.group(), span))
        elif kind == "punct":
            tokens.append(Token(TokenKind.PUNCT, m.group(), span))
        pos = m.end()
    tokens.append(Token(TokenKind.EOF, "", SourceSpan(line, pos - line_start + 1)))
    return tokens
