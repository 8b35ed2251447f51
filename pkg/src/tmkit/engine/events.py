"""Event detection over traces and chronology (second-level control) checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..model import Chronology, EventSpec
from .sim import TraceRecord, Verb

_WITNESS_VERBS = (Verb.ARRIVE, Verb.CREATE)


@dataclass(frozen=True)
class EventOccurrence:
    spec: EventSpec
    time: int
    witnesses: tuple[int, ...]  # indices into the trace

    @property
    def name(self) -> str:
        return self.spec.name

    def to_text(self) -> str:
        idx = ",".join(str(i) for i in self.witnesses)
        return f"event={self.name} t={self.time} witnesses=[{idx}]"


def detect_events(trace: Sequence[TraceRecord], events: Iterable[EventSpec]) -> list[EventOccurrence]:
    """Find every completed activation window of every event.

    A token witnesses a region stage when it arrives at or is created there.
    Each token keeps its own window per event: the window fills as region
    stages are witnessed, yields an occurrence when all of them have been,
    and restarts if a stage repeats before that.
    """
    records = list(trace)
    found: list[tuple[int, int, int, EventOccurrence]] = []
    for ev_index, spec in enumerate(events):
        region = set(spec.region)
        if not region:
            continue
        windows: dict[int, dict[str, int]] = {}
        for i, rec in enumerate(records):
            if rec.verb not in _WITNESS_VERBS or rec.stage not in region:
                continue
            window = windows.setdefault(rec.token, {})
            if rec.stage in window:
                window.clear()
            window[rec.stage] = i
            if len(window) == len(region):
                occ = EventOccurrence(spec, rec.time, tuple(sorted(window.values())))
                found.append((rec.time, i, ev_index, occ))
                window.clear()
    found.sort(key=lambda item: item[:3])
    return [occ for *_, occ in found]


@dataclass(frozen=True)
class Violation:
    kind: str  # "sequence" or "join"
    events: tuple[str, ...]
    time: int
    message: str

    def __str__(self) -> str:
        if self.kind == "sequence":
            return f"Violation({self.events[0]}->{self.events[1]})"
        return f"Violation(join {{{','.join(self.events)}}})"

    def to_text(self) -> str:
        return f"violation {self.kind} {' '.join(self.events)} t={self.time} {self.message}"


def check_chronology(occurrences: Sequence[EventOccurrence], chronology: Chronology) -> list[Violation]:
    """Check occurrences against sequence edges and parallel-join groups.

    Edge ``A -> B``: every occurrence of B needs an occurrence of A strictly
    earlier and after the previous B (so repeated B's each need a fresh A).
    Group with members M: for every k, the k-th occurrence of each member must
    come before any member's (k+1)-th occurrence.  Events outside the
    chronology's alphabet are ignored.
    """
    alphabet = chronology.alphabet
    occs = sorted((o for o in occurrences if o.name in alphabet), key=lambda o: o.time)
    violations: list[Violation] = []

    for a, b in chronology.edges:
        last_a = None
        last_b = None
        for o in occs:
            if o.name == b:
                if last_a is None or (last_b is not None and last_a <= last_b) or last_a >= o.time:
                    violations.append(Violation(
                        "sequence", (a, b), o.time,
                        f"{b} at t={o.time} without a preceding {a}"))
                    break
                last_b = o.time
            if o.name == a:
                last_a = o.time

    for group in chronology.groups:
        times: dict[str, list[int]] = {m: [] for m in group.members}
        for o in occs:
            if o.name in times:
                times[o.name].append(o.time)
        rounds = max((len(t) for t in times.values()), default=0)
        broken = None
        for k in range(rounds - 1):
            for m in group.members:
                if len(times[m]) <= k:
                    continue
                late = times[m][k]
                for other in group.members:
                    nxt = times[other][k + 1] if len(times[other]) > k + 1 else None
                    if nxt is not None and nxt < late:
                        broken = (m, k, other, nxt)
                        break
                if broken:
                    break
            if broken:
                break
        if broken:
            m, k, other, nxt = broken
            violations.append(Violation(
                "join", group.members, nxt,
                f"{other} starts round {k + 2} at t={nxt} before {m} finished round {k + 1}"))
    return violations
