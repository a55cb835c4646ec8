"""Tokenizer and small sub-parsers shared by the DSL, ring and group code.

Positions are 1-based ``(line, column)`` pairs so every error can point at
the offending character.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class DslError(Exception):
    """A parse or resolution failure with a source position.

    ``kind`` is one of ``"lexical"``, ``"syntax"``, ``"unresolved"`` or
    ``"non-homogeneous"``.
    """

    def __init__(self, kind: str, message: str, line: int = 1, column: int = 1):
        self.kind = kind
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {kind} error: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, STRING, OP, EOF
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<INT>\d+)
  | (?P<NAME>[A-Za-z_~][A-Za-z0-9_~]*)
  | (?P<STRING>"[^"\n]*")
  | (?P<OP>⊕|[{}();:,\[\]^*+\-=])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslError(
                "lexical", f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    """Cursor over a token list with the usual peek/expect helpers."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @classmethod
    def from_text(cls, text: str) -> "TokenStream":
        return cls(tokenize(text))

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind in ("OP", "NAME") and tok.text == text

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if not self.at(text):
            found = tok.text or "end of input"
            raise DslError("syntax", f"expected {text!r}, found {found!r}", tok.line, tok.column)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise DslError("syntax", f"expected {what}, found {found!r}", tok.line, tok.column)
        return self.next()

    def error(self, message: str, tok: Token | None = None) -> DslError:
        tok = tok or self.peek()
        return DslError("syntax", message, tok.line, tok.column)


# A raw polynomial term: coefficient and a list of (name, exponent, token).
RawTerm = tuple[int, list[tuple[str, int, Token]]]


def parse_poly_terms(ts: TokenStream, stop: tuple[str, ...] = (";",)) -> list[RawTerm]:
    """Parse ``2*y3 - x4^2*x7 + ...`` up to (not including) a stop token."""
    terms: list[RawTerm] = []
    sign = 1
    first = True
    while True:
        if ts.accept("-"):
            sign = -sign
        elif ts.accept("+"):
            pass
        elif not first:
            break
        coef = 1
        factors: list[tuple[str, int, Token]] = []
        tok = ts.peek()
        if tok.kind == "INT":
            coef = int(ts.next().text)
            if not ts.accept("*"):
                nxt = ts.peek()
                if nxt.kind == "NAME":
                    raise ts.error("expected '*' between coefficient and generator")
        elif tok.kind != "NAME":
            raise ts.error(f"expected a term, found {tok.text or 'end of input'!r}")
        while ts.peek().kind == "NAME":
            name_tok = ts.next()
            exp = 1
            if ts.accept("^"):
                exp = int(ts.expect_kind("INT", "an exponent").text)
            factors.append((name_tok.text, exp, name_tok))
            if not ts.accept("*"):
                break
        terms.append((sign * coef, factors))
        first = False
        sign = 1
        if ts.peek().kind == "EOF" or any(ts.at(s) for s in stop):
            break
        if not (ts.at("+") or ts.at("-")):
            raise ts.error(f"unexpected {ts.peek().text!r} in polynomial")
    return terms


def parse_group_parts(ts: TokenStream) -> list[tuple[str, int]]:
    """Parse ``Z ⊕ Z^2 + Z_4`` into a list of ("free", r) / ("cyclic", d) parts."""
    parts: list[tuple[str, int]] = []
    while True:
        tok = ts.peek()
        if tok.kind == "INT" and tok.text == "0":
            ts.next()
        elif tok.kind == "NAME" and tok.text == "Z":
            ts.next()
            r = 1
            if ts.accept("^"):
                r = int(ts.expect_kind("INT", "a rank").text)
            parts.append(("free", r))
        elif tok.kind == "NAME" and re.fullmatch(r"Z_\d+", tok.text):
            ts.next()
            parts.append(("cyclic", int(tok.text[2:])))
        elif tok.kind == "NAME" and tok.text == "Z_":
            ts.next()
            parts.append(("cyclic", int(ts.expect_kind("INT", "a cyclic order").text)))
        else:
            raise ts.error(f"expected a group term, found {tok.text or 'end of input'!r}")
        if not (ts.accept("⊕") or ts.accept("+")):
            return parts
