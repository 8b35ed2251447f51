"""Recursive-descent parser for ``.tm`` model files."""

from __future__ import annotations

from typing import Optional, Union

from ..model import (
    COMPARATORS,
    Assignment,
    Chronology,
    DuplicateIdentifier,
    Expr,
    Guard,
    Machine,
    Model,
    ModelBuilder,
    ModelError,
    Operand,
    ParallelGroup,
    StageKind,
)
from .lexer import KINDS, RESERVED, Diagnostic, LexError, SourceSpan, Token, tokenize


MAX_NESTING = 64


class ParseError(Exception):
    """Raised by :func:`parse`; ``diagnostics`` holds at least one entry."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(d.render() for d in diagnostics))


class _Syntax(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.span = span


def parse(text: Union[str, bytes]) -> Model:
    """Parse a model, raising :class:`ParseError` on any failure."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            line = bytes(text)[: exc.start].count(b"\n") + 1
            raise ParseError([Diagnostic("error", "LexError", "input is not valid UTF-8",
                                         SourceSpan(line, 1, 0))]) from None
    try:
        tokens = tokenize(text)
    except LexError as exc:
        raise ParseError([Diagnostic("error", "LexError", str(exc), exc.span)]) from None
    try:
        return _Parser(tokens).parse_model()
    except _Syntax as exc:
        raise ParseError([Diagnostic("error", "SyntaxError", str(exc), exc.span)]) from None
    except ModelError as exc:
        span = exc.span if exc.span is not None else SourceSpan(1, 1, 0)
        raise ParseError([Diagnostic("error", exc.code, str(exc), span)]) from None


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "EOF" else repr(tok.text)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    # -- token helpers -----------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.cur
        return tok.kind in ("PUNCT", "IDENT") and tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise _Syntax(f"expected '{text}', found {_describe(self.cur)}", self.cur.span)
        return self.advance()

    def name(self, what: str = "identifier") -> Token:
        tok = self.cur
        if tok.kind != "IDENT":
            raise _Syntax(f"expected {what}, found {_describe(tok)}", tok.span)
        if tok.text in RESERVED:
            raise _Syntax(f"expected {what}, found keyword '{tok.text}'", tok.span)
        return self.advance()

    def integer(self) -> int:
        neg = False
        if self.at("-"):
            self.advance()
            neg = True
        tok = self.cur
        if tok.kind != "INT":
            raise _Syntax(f"expected integer, found {_describe(tok)}", tok.span)
        self.advance()
        return -tok.value if neg else tok.value

    def path(self) -> tuple[str, SourceSpan]:
        first = self.name("machine name")
        parts = [first.text]
        while True:
            self.expect(".")
            tok = self.cur
            if tok.kind == "IDENT" and tok.text in KINDS:
                self.advance()
                parts.append(tok.text)
                break
            parts.append(self.name("machine name or stage kind").text)
        end = self.toks[self.pos - 1].span
        length = end.column + end.length - first.span.column if end.line == first.span.line else first.span.length
        return ".".join(parts), SourceSpan(first.span.line, first.span.column, length)

    # -- grammar -----------------------------------------------------------

    def parse_model(self) -> Model:
        start = self.expect("model")
        b = ModelBuilder(self.name("model name").text, start.span)
        self.expect("{")
        while not self.at("}"):
            tok = self.cur
            handler = self.ITEMS.get(tok.text) if tok.kind == "IDENT" else None
            if handler is None:
                raise _Syntax(f"expected a declaration, found {_describe(tok)}", tok.span)
            handler(self, b)
        self.expect("}")
        if self.cur.kind != "EOF":
            raise _Syntax(f"unexpected {_describe(self.cur)} after model", self.cur.span)
        return b.build()

    def thing_decl(self, b: ModelBuilder) -> None:
        self.expect("thing")
        tok = self.name("thing name")
        self.expect(";")
        b.add_thing(tok.text, tok.span)

    def var_decl(self, b: ModelBuilder) -> None:
        self.expect("var")
        tok = self.name("variable name")
        initial = 0
        if self.at("="):
            self.advance()
            initial = self.integer()
        self.expect(";")
        b.add_var(tok.text, initial, tok.span)

    def machine_decl(self, b: ModelBuilder) -> None:
        machine, span = self.machine()
        b.add_machine(machine, span)

    def machine(self, depth: int = 0) -> tuple[Machine, SourceSpan]:
        kw = self.expect("machine")
        if depth > MAX_NESTING:
            raise _Syntax(f"machines nested deeper than {MAX_NESTING} levels", kw.span)
        tok = self.name("machine name")
        self.expect("{")
        kinds: list[StageKind] = []
        if self.at("stages"):
            self.advance()
            while True:
                k = self.cur
                if k.kind != "IDENT" or k.text not in KINDS:
                    raise _Syntax(f"expected stage kind, found {_describe(k)}", k.span)
                self.advance()
                if StageKind(k.text) in kinds:
                    raise DuplicateIdentifier(f"stage kind '{k.text}' listed twice", k.span)
                kinds.append(StageKind(k.text))
                if not self.at(","):
                    break
                self.advance()
            self.expect(";")
        subs = []
        seen: set[str] = set()
        while self.at("machine"):
            sub, span = self.machine(depth + 1)
            if sub.name in seen:
                raise DuplicateIdentifier(f"duplicate submachine {sub.name!r}", span)
            seen.add(sub.name)
            subs.append(sub)
        self.expect("}")
        return Machine(tok.text, tuple(kinds), tuple(subs)), tok.span

    def flow_decl(self, b: ModelBuilder) -> None:
        self.expect("flow")
        thing = self.name("thing name")
        self.expect(":")
        prev, _ = self.path()
        self.expect("->")
        while True:
            nxt, span = self.path()
            b.add_flow(thing.text, prev, nxt, span)
            prev = nxt
            if not self.at("->"):
                break
            self.advance()
        self.expect(";")

    def trigger_decl(self, b: ModelBuilder) -> None:
        kw = self.expect("trigger")
        src, _ = self.path()
        self.expect("->")
        dst, _ = self.path()
        guard = None
        if self.at("when"):
            self.advance()
            var = self.name("variable name").text
            op = self.cur
            if op.kind != "PUNCT" or op.text not in COMPARATORS:
                raise _Syntax(f"expected comparison operator, found {_describe(op)}", op.span)
            self.advance()
            rhs: Union[str, int]
            if self.cur.kind == "IDENT":
                rhs = self.name("variable name").text
            else:
                rhs = self.integer()
            guard = Guard(var, op.text, rhs)
        self.expect(";")
        b.add_trigger(src, dst, guard, kw.span)

    def operand(self) -> Operand:
        tok = self.cur
        if tok.kind == "FIELD":
            self.advance()
            return Operand.payload(tok.value)
        if tok.kind == "INT" or self.at("-"):
            return Operand.literal(self.integer())
        return Operand.variable(self.name("operand").text)

    def action_decl(self, b: ModelBuilder) -> None:
        kw = self.expect("action")
        stage, _ = self.path()
        self.expect("{")
        effects = []
        while not self.at("}"):
            tok = self.cur
            if tok.kind == "FIELD":
                self.advance()
                target = Operand.payload(tok.value)
            else:
                target = Operand.variable(self.name("assignment target").text)
            self.expect("=")
            left = self.operand()
            op: Optional[str] = None
            right = None
            if self.at("+") or self.at("-"):
                op = self.advance().text
                right = self.operand()
            self.expect(";")
            effects.append(Assignment(target, Expr(left, op, right)))
        self.expect("}")
        b.add_action(stage, effects, kw.span)

    def event_decl(self, b: ModelBuilder) -> None:
        self.expect("event")
        tok = self.name("event name")
        desc = self.cur
        if desc.kind != "STRING":
            raise _Syntax(f"expected event description string, found {_describe(desc)}", desc.span)
        self.advance()
        self.expect("over")
        self.expect("{")
        region = []
        if not self.at("}"):
            while True:
                region.append(self.path()[0])
                if not self.at(","):
                    break
                self.advance()
        self.expect("}")
        self.expect(";")
        b.add_event(tok.text, desc.value, region, tok.span)

    def chronology_decl(self, b: ModelBuilder) -> None:
        kw = self.expect("chronology")
        self.expect("{")
        edges = []
        groups = []
        while not self.at("}"):
            if self.at("par"):
                self.advance()
                self.expect("{")
                members = [self.name("event name").text]
                while self.at(","):
                    self.advance()
                    members.append(self.name("event name").text)
                self.expect("}")
                loop = False
                if self.at("then"):
                    self.advance()
                    self.expect("loop")
                    loop = True
                self.expect(";")
                groups.append(ParallelGroup(tuple(members), loop))
            else:
                a = self.name("event name").text
                self.expect("->")
                c = self.name("event name").text
                self.expect(";")
                edges.append((a, c))
        self.expect("}")
        b.set_chronology(Chronology(tuple(edges), tuple(groups)), kw.span)

    ITEMS = {
        "thing": thing_decl,
        "var": var_decl,
        "machine": machine_decl,
        "flow": flow_decl,
        "trigger": trigger_decl,
        "action": action_decl,
        "event": event_decl,
        "chronology": chronology_decl,
    }
