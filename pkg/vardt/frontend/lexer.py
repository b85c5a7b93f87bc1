#!/usr/bin/env python3
"""
MiniLang lexer.

Turns source text into a deque of tokens carrying their line and column.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque

from ..errors import MiniLangSyntaxError

logger = logging.getLogger(__name__)

KEYWORDS = {"func", "test", "if", "else", "while", "return", "throw", "assert", "true", "false", "null"}

# longest first so that "<=" wins over "<"
OPERATORS = ("&&", "||", "==", "!=", "<=", ">=", "<", ">", "+", "-", "*", "/", "%", "!", "=")
PUNCTUATION = "(){}[],;"

ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", '"': '"', "'": "'"}


@dataclass(frozen=True)
class Token:
    kind: str  # INT, STRING, CHAR, IDENT, KEYWORD, OP, PUNCT, EOF
    text: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.kind}({self.text!r}) at {self.line}:{self.column}"


def tokenize(source: str) -> Deque[Token]:
    tokens: Deque[Token] = deque()
    pos, line, col = 0, 1, 1
    length = len(source)

    while pos < length:
        char = source[pos]

        if char == "\n":
            pos, line, col = pos + 1, line + 1, 1
            continue
        if char.isspace():
            pos, col = pos + 1, col + 1
            continue
        if source.startswith("//", pos):
            while pos < length and source[pos] != "\n":
                pos += 1
            continue

        start_line, start_col = line, col

        if char.isdigit():
            end = pos
            while end < length and source[end].isdigit():
                end += 1
            if end < length and (source[end].isalpha() or source[end] == "_"):
                raise MiniLangSyntaxError(f"malformed number {source[pos:end + 1]!r}", start_line, start_col)
            tokens.append(Token("INT", source[pos:end], start_line, start_col))
            col += end - pos
            pos = end
            continue

        if char.isalpha() or char == "_":
            end = pos
            while end < length and (source[end].isalnum() or source[end] == "_"):
                end += 1
            word = source[pos:end]
            tokens.append(Token("KEYWORD" if word in KEYWORDS else "IDENT", word, start_line, start_col))
            col += end - pos
            pos = end
            continue

        if char in ('"', "'"):
            text, consumed = _read_quoted(source, pos, start_line, start_col)
            if char == "'" and len(text) != 1:
                raise MiniLangSyntaxError("character literal must hold exactly one character", start_line, start_col)
            tokens.append(Token("STRING" if char == '"' else "CHAR", text, start_line, start_col))
            pos += consumed
            col += consumed
            continue

        operator = next((op for op in OPERATORS if source.startswith(op, pos)), None)
        if operator is not None:
            tokens.append(Token("OP", operator, start_line, start_col))
            pos += len(operator)
            col += len(operator)
            continue

        if char in PUNCTUATION:
            tokens.append(Token("PUNCT", char, start_line, start_col))
            pos, col = pos + 1, col + 1
            continue

        raise MiniLangSyntaxError(f"unexpected character {char!r}", start_line, start_col)

    tokens.append(Token("EOF", "", line, col))
    logger.debug(f"Tokenized {len(tokens) - 1} tokens over {line} lines")
    return tokens


def _read_quoted(source: str, pos: int, line: int, col: int):
    quote = source[pos]
    chars = []
    i = pos + 1
    while i < len(source):
        char = source[i]
        if char == "\n":
            break
        if char == "\\":
            if i + 1 >= len(source) or source[i + 1] not in ESCAPES:
                raise MiniLangSyntaxError("invalid escape sequence", line, col + (i - pos))
            chars.append(ESCAPES[source[i + 1]])
            i += 2
            continue
        if char == quote:
            return "".join(chars), i + 1 - pos
        chars.append(char)
        i += 1
    raise MiniLangSyntaxError("unterminated literal", line, col)
