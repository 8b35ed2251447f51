from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

KEYWORDS = frozenset({
    "model", "machine", "stages", "thing", "var", "flow", "trigger", "when",
    "event", "over", "chronology", "par", "then", "loop", "action",
})
KINDS = frozenset({"create", "process", "release", "transfer", "receive"})
RESERVED = KEYWORDS | KINDS

# longest first
PUNCT = ("->", "<=", ">=", "==", "{", "}", ";", ",", ":", ".", "=", "<", ">", "+", "-")


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 0

    def __post_init__(self):
        if self.line < 1 or self.column < 1 or self.length < 0:
            raise ValueError(f"bad span {self.line}:{self.column}+{self.length}")

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    span: Optional[SourceSpan] = None
    element: str = ""

    def render(self) -> str:
        where = f"{self.span} " if self.span else ""
        return f"{where}{self.severity}[{self.code}] {self.message}"


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, FIELD, INT, STRING, PUNCT, EOF
    text: str
    span: SourceSpan
    value: object = None


class LexError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.span = span


def _is_ident_start(ch: str) -> bool:
    return ch == "_" or ("a" <= ch <= "z") or ("A" <= ch <= "Z")


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or ("0" <= ch <= "9")


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens, ending with a zero-length EOF token."""
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i, col = i + 1, col + 1
            continue
        start_col = col
        if _is_ident_start(ch) or ch == "$":
            j = i + 1
            if ch == "$" and (j >= n or not _is_ident_start(text[j])):
                raise LexError("'$' must be followed by a field name", SourceSpan(line, col, 1))
            while j < n and _is_ident_char(text[j]):
                j += 1
            word = text[i:j]
            kind = "FIELD" if ch == "$" else "IDENT"
            tokens.append(Token(kind, word, SourceSpan(line, start_col, j - i),
                                word[1:] if ch == "$" else word))
            col += j - i
            i = j
            continue
        if "0" <= ch <= "9":
            j = i
            while j < n and "0" <= text[j] <= "9":
                j += 1
            if j < n and _is_ident_start(text[j]):
                raise LexError(f"malformed number {text[i:j + 1]!r}", SourceSpan(line, col, j + 1 - i))
            word = text[i:j]
            tokens.append(Token("INT", word, SourceSpan(line, start_col, j - i), int(word)))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            out = []
            while True:
                if j >= n or text[j] == "\n":
                    raise LexError("unterminated string", SourceSpan(line, col, j - i))
                c = text[j]
                if c == '"':
                    break
                if c == "\\":
                    if j + 1 >= n or text[j + 1] not in '"\\n':
                        raise LexError("bad escape in string", SourceSpan(line, col + j - i, min(2, n - j)))
                    out.append("\n" if text[j + 1] == "n" else text[j + 1])
                    j += 2
                    continue
                out.append(c)
                j += 1
            tokens.append(Token("STRING", text[i:j + 1], SourceSpan(line, start_col, j + 1 - i), "".join(out)))
            col += j + 1 - i
            i = j + 1
            continue
        for p in PUNCT:
            if text.startswith(p, i):
                tokens.append(Token("PUNCT", p, SourceSpan(line, start_col, len(p))))
                i += len(p)
                col += len(p)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", SourceSpan(line, col, 1))
    tokens.append(Token("EOF", "", SourceSpan(line, col, 0)))
    return tokens
