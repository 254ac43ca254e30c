"""Concrete syntax for session types.

    type := "end" | ident | "rec" ident "." type
          | "+{" "!" ident "." type ("," ...)* "}"
          | "&{" "?" ident "." type ("," ...)* "}"
          | "!" ident "." type | "?" ident "." type

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .types import (
    Choice,
    End,
    END,
    InvalidType,
    Kind,
    Rec,
    SessionType,
    Var,
    validate_type,
)


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.pos = pos


@dataclass(frozen=True)
class Token:
    kind: str  # ident | sym | eof
    text: str
    pos: int


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<open>[+&]\s*\{)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>->|[.,}!?(){}])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind == "open":
            toks.append(Token("sym", text[pos] + "{", pos))
        elif kind != "ws":
            toks.append(Token(kind, m.group(), pos))
        pos = m.end()
    toks.append(Token("eof", "", len(text)))
    return toks


class TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek
        return ParseError(message, self.text, tok.pos)

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text or tok.kind == "eof":
            shown = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}", tok)
        return tok

    def ident(self) -> str:
        tok = self.next()
        if tok.kind != "ident":
            raise self.error(f"expected identifier, found {tok.text or 'end of input'!r}", tok)
        return tok.text


_KEYWORDS = {"end", "rec"}


def _parse(ts: TokenStream) -> SessionType:
    tok = ts.peek
    if tok.kind == "ident":
        ts.next()
        if tok.text == "end":
            return END
        if tok.text == "rec":
            var = ts.ident()
            if var in _KEYWORDS:
                raise ts.error(f"{var!r} is reserved")
            ts.expect(".")
            return Rec(var, _parse(ts))
        return Var(tok.text)
    if tok.text in ("!", "?"):
        kind = Kind.INTERNAL if tok.text == "!" else Kind.EXTERNAL
        label, cont = _branch(ts, kind)
        return Choice(kind, [(label, cont)])
    if tok.text in ("+{", "&{"):
        ts.next()
        kind = Kind.INTERNAL if tok.text == "+{" else Kind.EXTERNAL
        branches = [_branch(ts, kind)]
        while ts.peek.text == ",":
            ts.next()
            branches.append(_branch(ts, kind))
        ts.expect("}")
        return Choice(kind, branches)
    raise ts.error(f"expected a type, found {tok.text or 'end of input'!r}")


def _branch(ts: TokenStream, kind: Kind) -> tuple[str, SessionType]:
    tok = ts.next()
    want = kind.direction.value
    if tok.text != want:
        raise ts.error(f"branch of {kind.value}{{...}} must start with {want!r}", tok)
    label = ts.ident()
    ts.expect(".")
    return label, _parse(ts)


def rename_apart(t: SessionType) -> SessionType:
    """Alpha-rename so every ``rec`` binds a distinct name that is never also free."""
    taken: set[str] = set(t.free_vars)

    def fresh(x: str) -> str:
        if x not in taken:
            return x
        i = 1
        while f"{x}_{i}" in taken:
            i += 1
        return f"{x}_{i}"

    def go(t: SessionType, env: dict[str, str]) -> SessionType:
        match t:
            case Var(name):
                new = env.get(name, name)
                return t if new == name else Var(new)
            case Rec(var, body):
                new = fresh(var)
                taken.add(new)
                inner = go(body, {**env, var: new})
                if new == var and inner is body:
                    return t
                return Rec(new, inner)
            case Choice(kind, branches):
                new_br = [(lab, go(c, env)) for lab, c in branches]
                if all(a[1] is b[1] for a, b in zip(new_br, branches)):
                    return t
                return Choice(kind, new_br)
        return t

    return go(t, {})


def parse_type(text: str, require_closed: bool = True) -> SessionType:
    """Parse, alpha-rename apart and validate a session type.

    Raises ``ParseError`` (with line:col) on bad syntax and ``InvalidType``
    listing the violations when the term is ill-formed.
    """
    ts = TokenStream(text)
    t = _parse(ts)
    if ts.peek.kind != "eof":
        raise ts.error(f"trailing input {ts.peek.text!r}")
    t = rename_apart(t)
    errs = validate_type(t, require_closed)
    if errs:
        raise InvalidType(errs)
    return t


def print_type(t: SessionType) -> str:
    parts: list[str] = []

    def go(t: SessionType) -> None:
        match t:
            case End():
                parts.append("end")
            case Var(name):
                parts.append(name)
            case Rec(var, body):
                parts.append(f"rec {var} . ")
                go(body)
            case Choice(kind, branches):
                d = kind.direction.value
                if len(branches) == 1:
                    lab, cont = branches[0]
                    parts.append(f"{d}{lab} . ")
                    go(cont)
                    return
                parts.append(f"{kind.value}{{ ")
                for i, (lab, cont) in enumerate(branches):
                    if i:
                        parts.append(", ")
                    parts.append(f"{d}{lab} . ")
                    go(cont)
                parts.append(" }")

    go(t)
    return "".join(parts)


def read_type_file(path, require_closed: bool = True) -> SessionType:
    with open(path, encoding="utf-8") as fh:
        return parse_type(fh.read(), require_closed)
