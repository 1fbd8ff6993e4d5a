"""Tokenizer for metamodel files and instance files.

Typeset operators are folded into their ASCII spellings, so the parser only
ever sees one form (``∧`` arrives as ``&&``, ``⊆`` as ``in``).
"""
from __future__ import annotations

from dataclasses import dataclass

from ..kernel.ast import SourceSpan
from .diagnostics import DslSyntaxError

KEYWORDS = frozenset(
    """package abstract class extends super attribute property model ghost
    one lone some no all exists in univ int2expr sum pi datatype enum""".split()
)

# longest first
SYMBOLS = (
    "..", "&&", "||", "=>", "->",
    "{", "}", "(", ")", "[", "]", "<", ">", ",", ":", ";", ".", "|", "=",
    "!", "+", "-", "&", "*", "/", "#", "~", "^", "?", "\\",
)

UNICODE = {
    "¬": "!",
    "∧": "&&",
    "∨": "||",
    "⇒": "=>",
    "∀": "all",
    "∃": "exists",
    "⊆": "in",
    "∈": "in",
    "⊂": "in",
    "∪": "+",
    "∩": "&",
    "∖": "-",
    "→": "->",
    "×": "*",
    "÷": "/",
    "π": "pi",
    "∼": "~",
}
# negated forms become two tokens
UNICODE_NEGATED = {"∉": "in", "⊄": "in", "≠": "="}


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", "string", "eof", or the symbol/keyword itself
    value: str
    span: SourceSpan

    def __repr__(self):
        return f"Token({self.kind!r}, {self.value!r}, {self.span.line}:{self.span.column})"


def _ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def tokenize(text: str, file: str = "<input>", keywords=KEYWORDS) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def span(start, length, ln, cl):
        return SourceSpan(file, ln, cl, max(length, 1), start)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("--", i) or text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                raise DslSyntaxError("unterminated comment", span(i, 2, line, col))
            chunk = text[i : j + 2]
            line += chunk.count("\n")
            col = len(chunk) - chunk.rfind("\n") if "\n" in chunk else col + len(chunk)
            i = j + 2
            continue
        start, sl, sc = i, line, col
        if _ident_start(ch):
            while i < n and _ident_part(text[i]):
                i += 1
            word = text[start:i]
            kind = word if word in keywords else "ident"
            toks.append(Token(kind, word, span(start, i - start, sl, sc)))
            col += i - start
            continue
        if ch.isdigit():
            while i < n and text[i].isdigit():
                i += 1
            toks.append(Token("int", text[start:i], span(start, i - start, sl, sc)))
            col += i - start
            continue
        if ch == '"':
            i += 1
            buf = []
            while True:
                if i >= n or text[i] == "\n":
                    raise DslSyntaxError("unterminated string literal", span(start, i - start, sl, sc), ['"'])
                c = text[i]
                if c == "\\" and i + 1 < n:
                    buf.append({"n": "\n", "t": "\t"}.get(text[i + 1], text[i + 1]))
                    i += 2
                    continue
                i += 1
                if c == '"':
                    break
                buf.append(c)
            toks.append(Token("string", "".join(buf), span(start, i - start, sl, sc)))
            col += i - start
            continue
        if ch in UNICODE_NEGATED:
            toks.append(Token("!", "!", span(start, 1, sl, sc)))
            sym = UNICODE_NEGATED[ch]
            toks.append(Token(sym, sym, span(start, 1, sl, sc)))
            i += 1
            col += 1
            continue
        if ch in UNICODE:
            sym = UNICODE[ch]
            toks.append(Token(sym, sym, span(start, 1, sl, sc)))
            i += 1
            col += 1
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                kind = "-" if sym == "\\" else sym
                toks.append(Token(kind, sym, span(start, len(sym), sl, sc)))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise DslSyntaxError(f"unexpected character {ch!r}", span(start, 1, sl, sc))
    toks.append(Token("eof", "", SourceSpan(file, line, col, 1, n)))
    return toks
