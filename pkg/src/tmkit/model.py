"""Static thinging-machine models.

A model is a tree of machines, each owning a subset of the five stages,
plus typed flow arcs between stages, guarded trigger arcs, global integer
variables, stage actions, named events and an event chronology.  Models are
immutable once built; :class:`ModelBuilder` interns declarations, checks
names and cross-links everything into lookup tables.
"""

from __future__ import annotations

import enum
import graphlib
import operator
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Mapping, Optional, Sequence, Union


class StageKind(str, enum.Enum):
    CREATE = "create"
    PROCESS = "process"
    RELEASE = "release"
    TRANSFER = "transfer"
    RECEIVE = "receive"

    @property
    def rank(self) -> int:
        return _KIND_RANK[self]


_KIND_RANK = {kind: i for i, kind in enumerate(StageKind)}

_C, _P, _REL, _T, _REC = StageKind

INTRA_MACHINE_EDGES = frozenset({
    (_T, _REC),
    (_REC, _P),
    (_REC, _REL),
    (_P, _REL),
    (_C, _P),
    (_C, _REL),
    (_REL, _T),
})
CROSS_MACHINE_EDGES = frozenset({(_T, _T)})


def legal_stage_edge(src: StageKind, dst: StageKind, cross_machine: bool) -> bool:
    """Whether a thing may flow from a ``src`` stage to a ``dst`` stage."""
    table = CROSS_MACHINE_EDGES if cross_machine else INTRA_MACHINE_EDGES
    return (StageKind(src), StageKind(dst)) in table


class ModelError(Exception):
    """Raised when declarations cannot be assembled into a model."""

    def __init__(self, message: str, span=None):
        super().__init__(message)
        self.span = span

    @property
    def code(self) -> str:
        return type(self).__name__


class DuplicateIdentifier(ModelError):
    pass


class UnresolvedReference(ModelError):
    pass


class EmptyModel(ModelError):
    pass


class CyclicChronology(ModelError):
    """Chronology sequence edges must form a DAG; repetition is expressed with ``then loop``."""


class IllegalAction(ModelError):
    pass


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class Machine:
    name: str
    kinds: tuple[StageKind, ...] = ()
    submachines: tuple["Machine", ...] = ()

    def __post_init__(self):
        kinds = tuple(StageKind(k) for k in self.kinds)
        if len(set(kinds)) != len(kinds):
            raise DuplicateIdentifier(f"machine {self.name!r} declares a stage kind twice")
        object.__setattr__(self, "kinds", tuple(sorted(kinds, key=lambda k: k.rank)))
        object.__setattr__(self, "submachines", tuple(self.submachines))


@dataclass(frozen=True)
class Stage:
    id: str
    machine: str
    kind: StageKind


COMPARATORS = {
    "<": operator.lt,
    "<=": operator.le,
    "==": operator.eq,
    ">=": operator.ge,
    ">": operator.gt,
}


@dataclass(frozen=True)
class Guard:
    """``var CMP rhs`` where rhs is another variable name or an integer."""

    var: str
    op: str
    rhs: Union[str, int]

    def __post_init__(self):
        if self.op not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.op!r}")

    @property
    def variables(self) -> tuple[str, ...]:
        if isinstance(self.rhs, str):
            return (self.var, self.rhs)
        return (self.var,)

    def evaluate(self, env: Mapping[str, int]) -> bool:
        rhs = env.get(self.rhs, 0) if isinstance(self.rhs, str) else self.rhs
        return COMPARATORS[self.op](env.get(self.var, 0), rhs)

    def __str__(self) -> str:
        return f"{self.var} {self.op} {self.rhs}"


@dataclass(frozen=True)
class FlowArc:
    src: str
    dst: str
    thing: str
    order: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class TriggerArc:
    src: str
    dst: str
    guard: Optional[Guard] = None
    order: int = field(default=-1, compare=False)


Arc = Union[FlowArc, TriggerArc]


@dataclass(frozen=True)
class Operand:
    """A variable, a token payload field (``$name``) or an integer literal."""

    kind: str  # "var" | "field" | "int"
    value: Union[str, int]

    @classmethod
    def variable(cls, name: str) -> "Operand":
        return cls("var", name)

    @classmethod
    def payload(cls, name: str) -> "Operand":
        return cls("field", name)

    @classmethod
    def literal(cls, value: int) -> "Operand":
        return cls("int", value)

    def __str__(self) -> str:
        if self.kind == "field":
            return f"${self.value}"
        return str(self.value)


@dataclass(frozen=True)
class Expr:
    left: Operand
    op: Optional[str] = None  # "+" | "-"
    right: Optional[Operand] = None

    def __post_init__(self):
        if (self.op is None) != (self.right is None):
            raise ValueError("binary expression needs both an operator and a right operand")
        if self.op not in (None, "+", "-"):
            raise ValueError(f"unsupported operator {self.op!r}")

    def operands(self) -> tuple[Operand, ...]:
        return (self.left,) if self.right is None else (self.left, self.right)

    def __str__(self) -> str:
        if self.op is None:
            return str(self.left)
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class Assignment:
    target: Operand
    expr: Expr

    def __post_init__(self):
        if self.target.kind == "int":
            raise ValueError("cannot assign to an integer literal")

    def __str__(self) -> str:
        return f"{self.target} = {self.expr}"


@dataclass(frozen=True)
class Action:
    stage: str
    effects: tuple[Assignment, ...]

    def __post_init__(self):
        object.__setattr__(self, "effects", tuple(self.effects))


@dataclass(frozen=True)
class GlobalVar:
    name: str
    initial: int = 0


@dataclass(frozen=True)
class EventSpec:
    name: str
    description: str
    region: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "region", tuple(self.region))


@dataclass(frozen=True)
class ParallelGroup:
    members: tuple[str, ...]
    then_loop: bool = True

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))


@dataclass(frozen=True)
class Chronology:
    edges: tuple[tuple[str, str], ...] = ()
    groups: tuple[ParallelGroup, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "groups", tuple(self.groups))

    @property
    def alphabet(self) -> frozenset[str]:
        names = {n for edge in self.edges for n in edge}
        for group in self.groups:
            names.update(group.members)
        return frozenset(names)

    def __bool__(self) -> bool:
        return bool(self.edges or self.groups)


def _walk(machines: Sequence[Machine], prefix: str = "") -> Iterator[tuple[str, Machine]]:
    for m in machines:
        path = f"{prefix}.{m.name}" if prefix else m.name
        yield path, m
        yield from _walk(m.submachines, path)


@dataclass(frozen=True)
class Model:
    name: str
    things: tuple[str, ...]
    vars: tuple[GlobalVar, ...]
    machines: tuple[Machine, ...]
    arcs: tuple[Arc, ...]
    actions: tuple[Action, ...] = ()
    events: tuple[EventSpec, ...] = ()
    chronology: Chronology = Chronology()

    # lookup tables, filled by ModelBuilder.build
    stages: Mapping[str, Stage] = field(default_factory=dict, compare=False, repr=False)
    machine_index: Mapping[str, Machine] = field(default_factory=dict, compare=False, repr=False)
    streams: Mapping[str, Optional[str]] = field(default_factory=dict, compare=False, repr=False)
    _out_flows: Mapping[str, tuple[FlowArc, ...]] = field(default_factory=dict, compare=False, repr=False)
    _in_flows: Mapping[str, tuple[FlowArc, ...]] = field(default_factory=dict, compare=False, repr=False)
    _out_triggers: Mapping[str, tuple[TriggerArc, ...]] = field(default_factory=dict, compare=False, repr=False)
    _in_triggers: Mapping[str, tuple[TriggerArc, ...]] = field(default_factory=dict, compare=False, repr=False)
    _actions: Mapping[str, Action] = field(default_factory=dict, compare=False, repr=False)

    @property
    def flows(self) -> tuple[FlowArc, ...]:
        return tuple(a for a in self.arcs if isinstance(a, FlowArc))

    @property
    def triggers(self) -> tuple[TriggerArc, ...]:
        return tuple(a for a in self.arcs if isinstance(a, TriggerArc))

    @property
    def var_names(self) -> frozenset[str]:
        return frozenset(v.name for v in self.vars)

    def iter_machines(self) -> Iterator[tuple[str, Machine]]:
        """Yield ``(path, machine)`` in pre-order."""
        return _walk(self.machines)

    def parent_of(self, machine_path: str) -> Optional[str]:
        head, _, _ = machine_path.rpartition(".")
        return head or None

    def stage(self, stage_id: str) -> Stage:
        try:
            return self.stages[stage_id]
        except KeyError:
            raise UnresolvedReference(f"no stage {stage_id!r}") from None

    def stream_of(self, stage_id: str) -> Optional[str]:
        return self.streams.get(stage_id)

    def is_cross_machine(self, arc: Arc) -> bool:
        return self.stages[arc.src].machine != self.stages[arc.dst].machine

    def outgoing_flows(self, stage_id: str) -> tuple[FlowArc, ...]:
        return self._out_flows.get(stage_id, ())

    def incoming_flows(self, stage_id: str) -> tuple[FlowArc, ...]:
        return self._in_flows.get(stage_id, ())

    def triggers_from(self, stage_id: str) -> tuple[TriggerArc, ...]:
        return self._out_triggers.get(stage_id, ())

    def triggers_into(self, stage_id: str) -> tuple[TriggerArc, ...]:
        return self._in_triggers.get(stage_id, ())

    def action_at(self, stage_id: str) -> Optional[Action]:
        return self._actions.get(stage_id)

    def event(self, name: str) -> EventSpec:
        for ev in self.events:
            if ev.name == name:
                return ev
        raise UnresolvedReference(f"no event {name!r}")


# ---------------------------------------------------------------------------
# construction


class ModelBuilder:
    """Collects declarations in order and assembles a cross-linked :class:`Model`.

    Every ``add_*`` method accepts an optional ``span`` that is attached to
    any :class:`ModelError` raised for that declaration.
    """

    def __init__(self, name: str = "model", span=None):
        self.name = name
        self.span = span
        self._things: list[tuple[str, object]] = []
        self._vars: list[tuple[GlobalVar, object]] = []
        self._machines: list[tuple[Machine, object]] = []
        self._arcs: list[tuple[Arc, object]] = []
        self._actions: list[tuple[Action, object]] = []
        self._events: list[tuple[EventSpec, object]] = []
        self._chronology: Optional[tuple[Chronology, object]] = None

    def add_thing(self, name: str, span=None) -> "ModelBuilder":
        self._things.append((name, span))
        return self

    def add_var(self, name: str, initial: int = 0, span=None) -> "ModelBuilder":
        self._vars.append((GlobalVar(name, initial), span))
        return self

    def add_machine(self, machine: Machine, span=None) -> "ModelBuilder":
        self._machines.append((machine, span))
        return self

    def add_flow(self, thing: str, src: str, dst: str, span=None) -> "ModelBuilder":
        self._arcs.append((FlowArc(src, dst, thing), span))
        return self

    def add_trigger(self, src: str, dst: str, guard: Optional[Guard] = None, span=None) -> "ModelBuilder":
        self._arcs.append((TriggerArc(src, dst, guard), span))
        return self

    def add_action(self, stage: str, effects: Sequence[Assignment], span=None) -> "ModelBuilder":
        self._actions.append((Action(stage, tuple(effects)), span))
        return self

    def add_event(self, name: str, description: str, region: Sequence[str], span=None) -> "ModelBuilder":
        self._events.append((EventSpec(name, description, tuple(region)), span))
        return self

    def set_chronology(self, chronology: Chronology, span=None) -> "ModelBuilder":
        if self._chronology is not None:
            raise DuplicateIdentifier("chronology declared more than once", span)
        self._chronology = (chronology, span)
        return self

    def build(self) -> Model:
        if not self._machines:
            raise EmptyModel("a model must contain at least one machine", self.span)

        things = _unique(self._things, lambda t: t, "thing")
        var_decls = [v for v, _ in self._vars]
        _unique(self._vars, lambda v: v.name, "var")
        var_names = {v.name for v in var_decls}
        _unique(self._events, lambda e: e.name, "event")

        machine_index: dict[str, Machine] = {}
        stages: dict[str, Stage] = {}
        _unique(self._machines, lambda m: m.name, "machine")
        for top, span in self._machines:
            for path, m in _walk([top]):
                _unique([(s.name, span) for s in m.submachines], lambda n: n, f"submachine of {path}")
                machine_index[path] = m
                for kind in m.kinds:
                    sid = f"{path}.{kind.value}"
                    stages[sid] = Stage(sid, path, kind)

        def resolve(stage_id: str, span, what: str) -> None:
            if stage_id not in stages:
                raise UnresolvedReference(f"{what} refers to unknown stage {stage_id!r}", span)

        arcs: list[Arc] = []
        for order, (arc, span) in enumerate(self._arcs):
            resolve(arc.src, span, "arc")
            resolve(arc.dst, span, "arc")
            if isinstance(arc, FlowArc):
                if arc.thing not in things:
                    raise UnresolvedReference(f"flow names unknown thing {arc.thing!r}", span)
                arcs.append(FlowArc(arc.src, arc.dst, arc.thing, order))
            else:
                arcs.append(TriggerArc(arc.src, arc.dst, arc.guard, order))

        actions: dict[str, Action] = {}
        for action, span in self._actions:
            resolve(action.stage, span, "action")
            if stages[action.stage].kind not in (StageKind.PROCESS, StageKind.CREATE):
                raise IllegalAction(
                    f"actions attach to process or create stages, not {action.stage!r}", span)
            if action.stage in actions:
                raise DuplicateIdentifier(f"second action block for {action.stage!r}", span)
            for eff in action.effects:
                for op in (eff.target, *eff.expr.operands()):
                    if op.kind == "var" and op.value not in var_names:
                        raise UnresolvedReference(f"action uses undeclared var {op.value!r}", span)
            actions[action.stage] = action

        for ev, span in self._events:
            for sid in ev.region:
                resolve(sid, span, f"event {ev.name}")

        chronology = Chronology()
        if self._chronology is not None:
            chronology, span = self._chronology
            event_names = {e.name for e, _ in self._events}
            for name in sorted(chronology.alphabet):
                if name not in event_names:
                    raise UnresolvedReference(f"chronology names unknown event {name!r}", span)
            graph: dict[str, set[str]] = {}
            for a, b in chronology.edges:
                graph.setdefault(b, set()).add(a)
            try:
                tuple(graphlib.TopologicalSorter(graph).static_order())
            except graphlib.CycleError as exc:
                cycle = " -> ".join(exc.args[1])
                raise CyclicChronology(f"chronology edges form a cycle: {cycle}", span) from None

        streams: dict[str, Optional[str]] = {sid: None for sid in stages}
        out_flows: dict[str, list[FlowArc]] = {}
        in_flows: dict[str, list[FlowArc]] = {}
        out_trig: dict[str, list[TriggerArc]] = {}
        in_trig: dict[str, list[TriggerArc]] = {}
        for arc in arcs:
            if isinstance(arc, FlowArc):
                for sid in (arc.src, arc.dst):
                    if streams[sid] is None:
                        streams[sid] = arc.thing
                out_flows.setdefault(arc.src, []).append(arc)
                in_flows.setdefault(arc.dst, []).append(arc)
            else:
                out_trig.setdefault(arc.src, []).append(arc)
                in_trig.setdefault(arc.dst, []).append(arc)

        def frozen(d):
            return MappingProxyType({k: tuple(v) for k, v in d.items()})

        return Model(
            name=self.name,
            things=tuple(things),
            vars=tuple(var_decls),
            machines=tuple(m for m, _ in self._machines),
            arcs=tuple(arcs),
            actions=tuple(actions.values()),
            events=tuple(e for e, _ in self._events),
            chronology=chronology,
            stages=MappingProxyType(stages),
            machine_index=MappingProxyType(machine_index),
            streams=MappingProxyType(streams),
            _out_flows=frozen(out_flows),
            _in_flows=frozen(in_flows),
            _out_triggers=frozen(out_trig),
            _in_triggers=frozen(in_trig),
            _actions=MappingProxyType(actions),
        )


def _unique(items, key, what: str) -> list:
    seen: set = set()
    out = []
    for item, span in items:
        k = key(item)
        if k in seen:
            raise DuplicateIdentifier(f"duplicate {what} {k!r}", span)
        seen.add(k)
        out.append(item)
    return out


def build_model(
    machines: Sequence[Machine],
    things: Sequence[str],
    flows: Sequence[FlowArc] = (),
    triggers: Sequence[TriggerArc] = (),
    vars: Sequence[GlobalVar] = (),
    events: Sequence[EventSpec] = (),
    chronology: Optional[Chronology] = None,
    *,
    actions: Sequence[Action] = (),
    name: str = "model",
) -> Model:
    """Assemble a model from declaration lists.

    Arc declaration order (which drives simulation tie-breaks) is all
    ``flows`` followed by all ``triggers``; use :class:`ModelBuilder` for an
    interleaved order.
    """
    b = ModelBuilder(name)
    for t in things:
        b.add_thing(t)
    for v in vars:
        b.add_var(v.name, v.initial)
    for m in machines:
        b.add_machine(m)
    for f in flows:
        b.add_flow(f.thing, f.src, f.dst)
    for t in triggers:
        b.add_trigger(t.src, t.dst, t.guard)
    for a in actions:
        b.add_action(a.stage, a.effects)
    for e in events:
        b.add_event(e.name, e.description, e.region)
    if chronology is not None:
        b.set_chronology(chronology)
    return b.build()
