"""Tokenizer for the model language."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..errors import ParseError

KEYWORDS = {
    "types", "consts", "pointers", "vars", "places", "transitions", "arcs",
    "marking", "invariants", "guard", "op", "true", "false", "if", "then",
    "else", "and", "or", "not", "in", "subset", "union", "ref", "rec",
    "set", "list", "int", "bool", "str", "unit", "skip", "add", "append",
    "to", "new", "forall", "also",
}

# longest first so '->', '==', '<=' win over their prefixes
_SYMBOLS = [
    "->", "==", "!=", "<=", ">=",
    "(", ")", "{", "}", "[", "]",
    ",", ";", ":", ".", "#", "=", "<", ">", "+", "-", "*",
]


@dataclass(frozen=True)
class Token:
    kind: str   # "ident" | "keyword" | "int" | "string" | "symbol" | "eof"
    text: str
    line: int
    col: int


def tokenize(source: str) -> Iterator[Token]:
    i = 0
    line = 1
    col = 1
    n = len(source)

    def error(msg: str) -> ParseError:
        return ParseError(msg, line, col)

    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end < 0:
                raise error("unterminated block comment")
            skipped = source[i:end + 2]
            line += skipped.count("\n")
            if "\n" in skipped:
                col = len(skipped) - skipped.rfind("\n")
            else:
                col += len(skipped)
            i = end + 2
            continue
        if c == '"':
            start_line, start_col = line, col
            j = i + 1
            buf = []
            while j < n and source[j] != '"':
                ch = source[j]
                if ch == "\n":
                    raise ParseError("unterminated string", start_line, start_col)
                if ch == "\\":
                    if j + 1 >= n:
                        raise ParseError("unterminated escape", line, col)
                    esc = source[j + 1]
                    mapped = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc)
                    if mapped is None:
                        raise ParseError(f"unknown escape \\{esc}", start_line, start_col)
                    buf.append(mapped)
                    j += 2
                else:
                    buf.append(ch)
                    j += 1
            if j >= n:
                raise ParseError("unterminated string", start_line, start_col)
            yield Token("string", "".join(buf), start_line, start_col)
            col += j + 1 - i
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            yield Token("int", source[i:j], line, col)
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            if word == "_":
                yield Token("symbol", "_", line, col)
            elif word in KEYWORDS:
                yield Token("keyword", word, line, col)
            else:
                yield Token("ident", word, line, col)
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, i):
                yield Token("symbol", sym, line, col)
                col += len(sym)
                i += len(sym)
                break
        else:
            raise error(f"unexpected character {c!r}")
    yield Token("eof", "", line, col)
