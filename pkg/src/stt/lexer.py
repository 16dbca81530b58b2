"""Tokenizer for .stt source files."""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import CheckError
from .syntax import Span

SYMBOLS = sorted([
    "|->", "===", "=_{", ":=", "->", "<=", "/\\", "\\/", "|-",
    "(", ")", "{", "}", "[", "]", "<", ">", ",", ":", "|", "\\", "*", "=",
], key=len, reverse=True)

ALIASES = {
    "≤": "<=", "≡": "===", "∧": "/\\", "∨": "\\/", "⊤": "TOP", "⊥": "BOT",
    "𝟚": "2", "𝟙": "1", "λ": "\\", "→": "->", "↦": "|->", "×": "*", "⊢": "|-",
}

KEYWORDS = {
    "def", "postulate", "import", "U", "fst", "snd", "refl", "J", "recOR", "recBOT",
    "TOP", "BOT", "star",
}

SUBSCRIPTS = "₀₁₂₃₄₅₆₇₈₉"


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, num, string, sym, eof
    text: str
    span: Span


def _ident_char(c: str) -> bool:
    return c.isalnum() or c in "_'" or c in SUBSCRIPTS


def tokenize(text: str, file: str = "<input>") -> list:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)

    def emit(kind, value, start_col, length):
        tokens.append(Token(kind, value, Span(file, line, start_col, length)))

    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in ALIASES:
            value = ALIASES[c]
            kind = "keyword" if value in KEYWORDS else ("num" if value.isdigit() else "sym")
            emit(kind, value, col, 1)
            i, col = i + 1, col + 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            emit("num", text[i:j], col, j - i)
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i + 1
            while j < n:
                if _ident_char(text[j]):
                    j += 1
                elif text[j] == "-" and j + 1 < n and text[j + 1].isalnum():
                    j += 1
                else:
                    break
            word = text[i:j]
            emit("keyword" if word in KEYWORDS else "ident", word, col, j - i)
            col += j - i
            i = j
            continue
        if c == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise CheckError("SyntaxError", "unterminated string", Span(file, line, col))
            emit("string", text[i + 1:j], col, j + 1 - i)
            col += j + 1 - i
            i = j + 1
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                emit("sym", sym, col, len(sym))
                i, col = i + len(sym), col + len(sym)
                break
        else:
            raise CheckError("SyntaxError", f"unexpected character {c!r}", Span(file, line, col))
    tokens.append(Token("eof", "", Span(file, line, col, 0)))
    return tokens
