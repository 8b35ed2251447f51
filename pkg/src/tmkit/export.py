"""Graphviz DOT exports of models and event chronologies."""

from __future__ import annotations

from .model import Chronology, FlowArc, Machine, Model


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _cluster(model: Model, path: str, machine: Machine, depth: int, out: list[str]) -> None:
    pad = "  " * depth
    out.append(f"{pad}subgraph {_q('cluster_' + path)} {{")
    out.append(f"{pad}  label={_q(machine.name)};")
    out.append(f"{pad}  style=rounded;")
    for kind in machine.kinds:
        sid = f"{path}.{kind.value}"
        out.append(f"{pad}  {_q(sid)} [label={_q(kind.value)}];")
    for sub in machine.submachines:
        _cluster(model, f"{path}.{sub.name}", sub, depth + 1, out)
    out.append(f"{pad}}}")


def export_dot(model: Model) -> str:
    """Machines as nested clusters, stages as nodes, flows solid, triggers dashed."""
    out = [f"digraph {_q(model.name)} {{", "  compound=true;", "  node [shape=box];"]
    for machine in model.machines:
        _cluster(model, machine.name, machine, 1, out)
    for arc in model.arcs:
        if isinstance(arc, FlowArc):
            out.append(f"  {_q(arc.src)} -> {_q(arc.dst)} [label={_q(arc.thing)}];")
        else:
            attrs = "style=dashed"
            if arc.guard is not None:
                attrs += f", label={_q(str(arc.guard))}"
            out.append(f"  {_q(arc.src)} -> {_q(arc.dst)} [{attrs}];")
    out.append("}")
    return "\n".join(out) + "\n"


def export_chronology_dot(chronology: Chronology, name: str = "chronology") -> str:
    """Events as nodes, sequence edges as arrows, each parallel group as a join bar.

    Group members share a rank; all of them feed the join bar, and a looping
    group gets a bold edge from the bar back to its first member.
    """
    out = [f"digraph {_q(name)} {{", "  rankdir=TB;", "  node [shape=ellipse];"]
    for event in sorted(chronology.alphabet):
        out.append(f"  {_q(event)};")
    for a, b in chronology.edges:
        out.append(f"  {_q(a)} -> {_q(b)};")
    for index, group in enumerate(chronology.groups, 1):
        join = f"join{index}"
        out.append(f"  {_q(join)} [shape=box, style=filled, fillcolor=black, "
                   f"label=\"\", height=0.08, width=1.5];")
        members = " ".join(_q(m) + ";" for m in group.members)
        out.append(f"  {{ rank=same; {members} }}")
        for member in group.members:
            out.append(f"  {_q(member)} -> {_q(join)};")
        if group.then_loop:
            out.append(f"  {_q(join)} -> {_q(group.members[0])} "
                       f"[style=bold, constraint=false, label=\"loop\"];")
    out.append("}")
    return "\n".join(out) + "\n"
