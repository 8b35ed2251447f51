"""Canonical text form of a model; ``parse(emit(m)) == m``."""

from __future__ import annotations

from ..model import FlowArc, Machine, Model

INDENT = "  "


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _machine_lines(machine: Machine, depth: int) -> list[str]:
    pad = INDENT * depth
    lines = [f"{pad}machine {machine.name} {{"]
    if machine.kinds:
        lines.append(f"{pad}{INDENT}stages {', '.join(k.value for k in machine.kinds)};")
    for sub in machine.submachines:
        lines.extend(_machine_lines(sub, depth + 1))
    lines.append(f"{pad}}}")
    return lines


def emit(model: Model) -> str:
    """Render ``model`` as canonical ``.tm`` text (LF line endings)."""
    lines = [f"model {model.name} {{"]
    for thing in model.things:
        lines.append(f"{INDENT}thing {thing};")
    for var in model.vars:
        init = f" = {var.initial}" if var.initial else ""
        lines.append(f"{INDENT}var {var.name}{init};")
    for machine in model.machines:
        lines.extend(_machine_lines(machine, 1))

    arcs = model.arcs
    i = 0
    while i < len(arcs):
        arc = arcs[i]
        if isinstance(arc, FlowArc):
            chain = [arc.src, arc.dst]
            while (i + 1 < len(arcs) and isinstance(arcs[i + 1], FlowArc)
                   and arcs[i + 1].thing == arc.thing and arcs[i + 1].src == chain[-1]):
                i += 1
                chain.append(arcs[i].dst)
            lines.append(f"{INDENT}flow {arc.thing}: {' -> '.join(chain)};")
        else:
            guard = f" when {arc.guard}" if arc.guard is not None else ""
            lines.append(f"{INDENT}trigger {arc.src} -> {arc.dst}{guard};")
        i += 1

    for action in model.actions:
        lines.append(f"{INDENT}action {action.stage} {{")
        for eff in action.effects:
            lines.append(f"{INDENT * 2}{eff};")
        lines.append(f"{INDENT}}}")
    for ev in model.events:
        region = ", ".join(ev.region)
        inner = f" {region} " if region else " "
        lines.append(f"{INDENT}event {ev.name} {_quote(ev.description)} over {{{inner}}};")
    chron = model.chronology
    if chron:
        lines.append(f"{INDENT}chronology {{")
        for a, b in chron.edges:
            lines.append(f"{INDENT * 2}{a} -> {b};")
        for group in chron.groups:
            tail = " then loop" if group.then_loop else ""
            lines.append(f"{INDENT * 2}par {{ {', '.join(group.members)} }}{tail};")
        lines.append(f"{INDENT}}}")
    lines.append("}")
    return "\n".join(lines) + "\n"
