"""Static well-formedness checks over a built model."""

from __future__ import annotations

import enum
from collections import deque

from .model import FlowArc, Model, StageKind, legal_stage_edge
from .text.lexer import Diagnostic


class CheckCode(str, enum.Enum):
    ILLEGAL_STAGE_EDGE = "ILLEGAL_STAGE_EDGE"
    MIXED_STREAMS = "MIXED_STREAMS"
    NON_TRANSFER_BOUNDARY = "NON_TRANSFER_BOUNDARY"
    TRIGGER_SAME_FLOW = "TRIGGER_SAME_FLOW"
    DANGLING_STAGE = "DANGLING_STAGE"
    UNREACHABLE_STAGE = "UNREACHABLE_STAGE"
    GUARD_UNDECLARED_VAR = "GUARD_UNDECLARED_VAR"
    EVENT_EMPTY_REGION = "EVENT_EMPTY_REGION"


ERROR = "error"
WARNING = "warning"

SEVERITY = {code: ERROR for code in CheckCode}
SEVERITY[CheckCode.DANGLING_STAGE] = WARNING
SEVERITY[CheckCode.UNREACHABLE_STAGE] = WARNING


def _diag(code: CheckCode, element: str, message: str) -> Diagnostic:
    return Diagnostic(SEVERITY[code], code.value, message, None, element)


def render(diag: Diagnostic) -> str:
    """One-line text form: ``CODE severity element message``."""
    return f"{diag.code} {diag.severity} {diag.element} {diag.message}"


def has_errors(diags) -> bool:
    return any(d.severity == ERROR for d in diags)


def stage_things(model: Model) -> dict[str, list[str]]:
    """Distinct things flowing through each stage, in first-use order."""
    things: dict[str, list[str]] = {sid: [] for sid in model.stages}
    for arc in model.flows:
        for sid in (arc.src, arc.dst):
            if arc.thing not in things[sid]:
                things[sid].append(arc.thing)
    return things


def reachable_stages(model: Model, extra_roots=()) -> set[str]:
    """Stages reachable over flow and trigger arcs from the model's entry points.

    Entry points are create stages and transfer stages nothing flows or
    triggers into (things imported from outside the model).
    """
    incoming = {sid: 0 for sid in model.stages}
    succ: dict[str, list[str]] = {sid: [] for sid in model.stages}
    for arc in model.arcs:
        incoming[arc.dst] += 1
        succ[arc.src].append(arc.dst)
    roots = [sid for sid, st in model.stages.items()
             if st.kind == StageKind.CREATE
             or (st.kind == StageKind.TRANSFER and incoming[sid] == 0)]
    roots.extend(extra_roots)
    seen = set(roots)
    todo = deque(roots)
    while todo:
        for nxt in succ[todo.popleft()]:
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def validate(model: Model) -> list[Diagnostic]:
    """Return every well-formedness diagnostic for ``model``, deterministically ordered.

    An empty list means the model is well-formed.  Dangling and unreachable
    stages are warnings; everything else is an error.
    """
    found: list[tuple[tuple, Diagnostic]] = []
    stages = model.stages
    n_arcs = len(model.arcs)
    vars_declared = model.var_names
    things = stage_things(model)

    for arc in model.arcs:
        src, dst = stages[arc.src], stages[arc.dst]
        edge = f"{arc.src}->{arc.dst}"
        key = (src.machine, arc.order)
        cross = src.machine != dst.machine
        if isinstance(arc, FlowArc):
            if cross and not legal_stage_edge(src.kind, dst.kind, True):
                found.append((key, _diag(
                    CheckCode.NON_TRANSFER_BOUNDARY, edge,
                    f"{arc.thing} leaves machine {src.machine} from {src.kind.value} "
                    f"into {dst.kind.value}; machines exchange things transfer to transfer")))
            elif not cross and not legal_stage_edge(src.kind, dst.kind, False):
                found.append((key, _diag(
                    CheckCode.ILLEGAL_STAGE_EDGE, edge,
                    f"{src.kind.value} cannot flow to {dst.kind.value} inside a machine")))
        else:
            shared = set(things[arc.src]) & set(things[arc.dst])
            if not cross and shared:
                found.append((key, _diag(
                    CheckCode.TRIGGER_SAME_FLOW, edge,
                    f"trigger stays on the {', '.join(sorted(shared))} stream of {src.machine}")))
            if arc.guard is not None:
                missing = [v for v in arc.guard.variables if v not in vars_declared]
                if missing:
                    found.append((key, _diag(
                        CheckCode.GUARD_UNDECLARED_VAR, edge,
                        f"guard '{arc.guard}' uses undeclared {', '.join(missing)}")))

    incoming_ok = {arc.dst for arc in model.arcs}
    dangling = [sid for sid, st in stages.items()
                if st.kind in (StageKind.RECEIVE, StageKind.PROCESS) and sid not in incoming_ok]
    reached = reachable_stages(model, dangling)

    for index, (sid, st) in enumerate(stages.items()):
        key = (st.machine, n_arcs + index)
        if len(things[sid]) > 1:
            found.append((key, _diag(
                CheckCode.MIXED_STREAMS, sid,
                f"stage carries several streams: {', '.join(things[sid])}")))
        if sid in dangling:
            found.append((key, _diag(
                CheckCode.DANGLING_STAGE, sid, f"nothing flows or triggers into {st.kind.value}")))
        elif sid not in reached:
            found.append((key, _diag(
                CheckCode.UNREACHABLE_STAGE, sid, "no create stage or entry transfer leads here")))

    for index, ev in enumerate(model.events):
        if not ev.region:
            found.append((("", 2 * n_arcs + len(stages) + index), _diag(
                CheckCode.EVENT_EMPTY_REGION, ev.name, "event region is empty")))

    found.sort(key=lambda item: (item[0], item[1].code))
    return [d for _, d in found]
