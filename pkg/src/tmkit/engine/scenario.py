"""``.tmrun`` scenario files: variable overrides and scheduled token injections."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Union


class ScenarioError(Exception):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class Injection:
    thing: str
    stage: str
    tick: int
    payload: Mapping[str, int] = field(default_factory=dict)

    def to_text(self) -> str:
        body = ",".join(f"{k}:{v}" for k, v in self.payload.items())
        return f"inject {self.thing} at {self.stage} t={self.tick} payload {{{body}}}"


@dataclass(frozen=True)
class Scenario:
    settings: Mapping[str, int] = field(default_factory=dict)
    injections: tuple[Injection, ...] = ()

    def to_text(self) -> str:
        lines = [f"set {k} = {v}" for k, v in self.settings.items()]
        lines.extend(inj.to_text() for inj in self.injections)
        return "\n".join(lines) + "\n"


_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_INT = r"-?[0-9]+"
_SET = re.compile(rf"set\s+({_IDENT})\s*=\s*({_INT})")
_INJECT = re.compile(
    rf"inject\s+({_IDENT})\s+at\s+({_IDENT}(?:\.{_IDENT})+)\s+t\s*=\s*([0-9]+)"
    rf"(?:\s+payload\s*\{{(.*)\}})?")
_PAIR = re.compile(rf"\s*({_IDENT})\s*:\s*({_INT})\s*")


def _payload(body: str, lineno: int) -> dict[str, int]:
    out: dict[str, int] = {}
    if not body.strip():
        return out
    for part in body.split(","):
        m = _PAIR.fullmatch(part)
        if not m:
            raise ScenarioError(f"bad payload entry {part.strip()!r}", lineno)
        if m.group(1) in out:
            raise ScenarioError(f"payload field {m.group(1)!r} given twice", lineno)
        out[m.group(1)] = int(m.group(2))
    return out


def parse_scenario(text: str) -> Scenario:
    settings: dict[str, int] = {}
    injections = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _SET.fullmatch(line):
            if m.group(1) in settings:
                raise ScenarioError(f"variable {m.group(1)!r} set twice", lineno)
            settings[m.group(1)] = int(m.group(2))
        elif m := _INJECT.fullmatch(line):
            injections.append(Injection(m.group(1), m.group(2), int(m.group(3)),
                                        _payload(m.group(4) or "", lineno)))
        else:
            raise ScenarioError(f"cannot read {line!r}", lineno)
    return Scenario(settings, tuple(injections))


def load_scenario(path: Union[str, Path]) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))
