"""Textual syntax for thinging-machine models."""

from .lexer import Diagnostic, LexError, SourceSpan, tokenize
from .parser import ParseError, parse
from .printer import emit

__all__ = ["Diagnostic", "LexError", "ParseError", "SourceSpan", "emit", "parse", "tokenize"]
