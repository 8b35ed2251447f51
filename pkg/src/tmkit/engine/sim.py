"""Deterministic token-flow simulation of a thinging-machine model.

One step moves exactly one token: a scheduled injection, a trigger firing,
a flow along one arc, or a de-creation.  Among enabled moves the one whose
arc was declared first wins; injections that are due go before any arc and
de-creations after all of them.  Tokens queue FIFO at each stage.  The
clock advances by exactly one per step; an injection scheduled later than
the point where the model goes idle is taken at the next tick.

Triggers are armed when a token enters their source stage (after that
stage's action ran) if the guard holds then, and fire later only if it
still holds; an armed firing that is not enabled when moves are collected
is dropped.  A trigger into a stage that also has incoming flows does not
create a token: it releases the oldest token waiting upstream of that
stage, and those upstream flows only ever move on such a release.
"""

from __future__ import annotations

import copy
import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from ..check import has_errors, validate
from ..model import FlowArc, Model, StageKind, TriggerArc
from .scenario import Scenario, ScenarioError


class Verb(str, enum.Enum):
    ARRIVE = "arrive"
    DEPART = "depart"
    CREATE = "create"
    DECREATE = "decreate"


class NoEnabledMove(Exception):
    """The state is terminal: nothing can move and no injection is pending."""


class InvalidModel(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        super().__init__(f"model has {len(diagnostics)} error diagnostic(s)")


class ScenarioVarUnknown(ScenarioError):
    pass


@dataclass
class Token:
    id: int
    thing: str
    payload: dict[str, int]
    at: str
    since: int
    entered: Optional[str] = None  # "cross", "intra", or None when created in place


@dataclass(frozen=True)
class TraceRecord:
    time: int
    token: int
    thing: str
    stage: str
    verb: Verb
    var_snapshot: Mapping[str, int]
    cause: str = ""  # "inject", "flow", "trigger", "pull" or "decreate"
    arc: int = -1

    def to_text(self) -> str:
        snap = ",".join(f"{k}:{self.var_snapshot[k]}" for k in sorted(self.var_snapshot))
        return (f"t={self.time} tok={self.token} thing={self.thing} stage={self.stage} "
                f"verb={self.verb.value} vars={{{snap}}}")


@dataclass
class _Armed:
    seq: int
    trigger: TriggerArc
    payload: dict[str, int]
    thing: str


class _Plan:
    """Per-model lookup tables the scheduler needs on every step."""

    def __init__(self, model: Model):
        self.model = model
        self.pull_stages = frozenset(
            sid for sid in model.stages if model.triggers_into(sid) and model.incoming_flows(sid))
        self.gated = frozenset(
            arc.order for arc in model.flows if arc.dst in self.pull_stages)
        self.cross = {arc.order: model.is_cross_machine(arc) for arc in model.arcs}
        self.n_arcs = len(model.arcs)


@dataclass
class SimState:
    model: Model
    plan: _Plan = field(repr=False)
    clock: int = 0
    vars: dict[str, int] = field(default_factory=dict)
    tokens: dict[int, Token] = field(default_factory=dict)
    queues: dict[str, list[int]] = field(default_factory=dict)
    armed: list[_Armed] = field(default_factory=list)
    pending: list[tuple[int, int, object]] = field(default_factory=list)
    next_token: int = 1
    next_seq: int = 0

    def copy(self) -> "SimState":
        memo = {id(self.model): self.model, id(self.plan): self.plan}
        return copy.deepcopy(self, memo)

    def tokens_at(self, stage: str) -> list[Token]:
        return [self.tokens[t] for t in self.queues.get(stage, [])]

    @property
    def terminal(self) -> bool:
        return not self.pending and _collect(self.copy(), self.clock + 1) is None


def init_simulation(model: Model, scenario: Optional[Scenario] = None) -> SimState:
    """Fresh state: empty queues, clock 0, variables from declarations and overrides."""
    scenario = scenario or Scenario()
    diags = validate(model)
    if has_errors(diags):
        raise InvalidModel([d for d in diags if d.severity == "error"])
    values = {v.name: v.initial for v in model.vars}
    for name, value in scenario.settings.items():
        if name not in values:
            raise ScenarioVarUnknown(f"scenario sets undeclared variable {name!r}")
        values[name] = value
    pending = []
    for index, inj in enumerate(scenario.injections):
        if inj.thing not in model.things:
            raise ScenarioError(f"injection of undeclared thing {inj.thing!r}")
        if inj.stage not in model.stages:
            raise ScenarioError(f"injection at unknown stage {inj.stage!r}")
        stream = model.stream_of(inj.stage)
        if stream is not None and stream != inj.thing:
            raise ScenarioError(f"{inj.thing} cannot be injected into the {stream} stream at {inj.stage}")
        pending.append((inj.tick, index, inj))
    pending.sort(key=lambda p: (p[0], p[1]))
    return SimState(model=model, plan=_Plan(model), vars=values,
                    queues={sid: [] for sid in model.stages}, pending=pending)


# ---------------------------------------------------------------------------
# move selection


def _eligible_flows(state: SimState, token: Token) -> list[FlowArc]:
    model, plan = state.model, state.plan
    arcs = [a for a in model.outgoing_flows(token.at)
            if a.thing == token.thing and a.order not in plan.gated]
    if model.stages[token.at].kind == StageKind.TRANSFER and token.entered is not None:
        # a transfer is a boundary: what came in goes inward, what came out goes outward
        inward = token.entered == "cross"
        arcs = [a for a in arcs if plan.cross[a.order] != inward]
    return arcs


def _waiting_for(state: SimState, stage: str) -> Optional[tuple[FlowArc, Token]]:
    for arc in state.model.incoming_flows(stage):
        for tid in state.queues[arc.src]:
            tok = state.tokens[tid]
            if tok.thing == arc.thing:
                return arc, tok
    return None


def _collect(state: SimState, tick: int):
    """Best enabled move as ``(key, kind, data)``, or None."""
    model, plan = state.model, state.plan
    best = None

    def offer(key, kind, data):
        nonlocal best
        if best is None or key < best[0]:
            best = (key, kind, data)

    if state.pending and state.pending[0][0] <= tick:
        offer((-1, 0), "inject", state.pending[0])

    keep = []
    for armed in state.armed:
        arc = armed.trigger
        if arc.guard is not None and not arc.guard.evaluate(state.vars):
            continue
        if arc.dst in plan.pull_stages:
            waiting = _waiting_for(state, arc.dst)
            if waiting is None:
                continue
            offer((arc.order, armed.seq), "pull", (armed, waiting))
        else:
            offer((arc.order, armed.seq), "trigger", armed)
        keep.append(armed)
    state.armed[:] = keep

    for stage, queue in state.queues.items():
        if not queue:
            continue
        kind = model.stages[stage].kind
        for tid in queue:
            tok = state.tokens[tid]
            arcs = _eligible_flows(state, tok)
            if arcs:
                offer((arcs[0].order, 0), "flow", (tok, arcs[0]))
                break
            if kind in (StageKind.RELEASE, StageKind.TRANSFER) and not any(
                    a.thing == tok.thing for a in model.outgoing_flows(stage)):
                offer((plan.n_arcs, tid), "decreate", tok)
                break
    return best


# ---------------------------------------------------------------------------
# move execution


def _value(operand, state: SimState, payload: dict[str, int]) -> int:
    if operand.kind == "int":
        return operand.value
    if operand.kind == "var":
        return state.vars.get(operand.value, 0)
    return payload.get(operand.value, 0)


def _enter(state: SimState, token: Token, stage: str, tick: int) -> None:
    model = state.model
    token.at = stage
    token.since = tick
    state.queues[stage].append(token.id)
    action = model.action_at(stage)
    if action is not None:
        for eff in action.effects:
            expr = eff.expr
            value = _value(expr.left, state, token.payload)
            if expr.op == "+":
                value += _value(expr.right, state, token.payload)
            elif expr.op == "-":
                value -= _value(expr.right, state, token.payload)
            if eff.target.kind == "var":
                state.vars[eff.target.value] = value
            else:
                token.payload[eff.target.value] = value
    for trig in model.triggers_from(stage):
        if trig.guard is None or trig.guard.evaluate(state.vars):
            state.armed.append(_Armed(state.next_seq, trig, dict(token.payload), token.thing))
            state.next_seq += 1


def _leave(state: SimState, token: Token) -> None:
    state.queues[token.at].remove(token.id)


def _spawn(state: SimState, thing: str, payload: dict[str, int], stage: str, tick: int) -> Token:
    tok = Token(state.next_token, thing, dict(payload), stage, tick)
    state.next_token += 1
    state.tokens[tok.id] = tok
    _enter(state, tok, stage, tick)
    return tok


def _advance(state: SimState, limit: Optional[int] = None) -> Optional[list[TraceRecord]]:
    """Apply one move in place.  Returns None if it would pass ``limit``."""
    tick = state.clock + 1
    move = _collect(state, tick)
    if move is None:
        if not state.pending:
            raise NoEnabledMove(f"no enabled move at t={state.clock}")
        # idle model: the next injection comes due now rather than after a gap
        move = ((-1, 0), "inject", state.pending[0])
    if limit is not None and tick > limit:
        return None

    _, kind, data = move
    marks: list[tuple[Token, str, Verb]] = []
    arc_order = -1
    if kind == "inject":
        state.pending.pop(0)
        inj = data[2]
        tok = _spawn(state, inj.thing, dict(inj.payload), inj.stage, tick)
        marks.append((tok, inj.stage, Verb.CREATE))
    elif kind == "trigger":
        armed = data
        state.armed.remove(armed)
        arc_order = armed.trigger.order
        dst = armed.trigger.dst
        thing = state.model.stream_of(dst) or armed.thing
        tok = _spawn(state, thing, armed.payload, dst, tick)
        marks.append((tok, dst, Verb.CREATE))
    elif kind == "pull":
        armed, (arc, tok) = data
        state.armed.remove(armed)
        arc_order = armed.trigger.order
        src = tok.at
        _leave(state, tok)
        marks.append((tok, src, Verb.DEPART))
        tok.entered = "cross" if state.plan.cross[arc.order] else "intra"
        _enter(state, tok, arc.dst, tick)
        marks.append((tok, arc.dst, Verb.ARRIVE))
    elif kind == "flow":
        tok, arc = data
        arc_order = arc.order
        _leave(state, tok)
        marks.append((tok, arc.src, Verb.DEPART))
        tok.entered = "cross" if state.plan.cross[arc.order] else "intra"
        _enter(state, tok, arc.dst, tick)
        marks.append((tok, arc.dst, Verb.ARRIVE))
    else:
        tok = data
        _leave(state, tok)
        del state.tokens[tok.id]
        marks.append((tok, tok.at, Verb.DECREATE))

    state.clock = tick
    snapshot = dict(state.vars)
    return [TraceRecord(tick, t.id, t.thing, stage, verb, snapshot, kind, arc_order)
            for t, stage, verb in marks]


def step(state: SimState) -> tuple[SimState, list[TraceRecord]]:
    """Advance a copy of ``state`` by one move; raises :class:`NoEnabledMove` when terminal."""
    nxt = state.copy()
    return nxt, _advance(nxt)


@dataclass
class Trace:
    records: list[TraceRecord]
    final_state: SimState

    def __iter__(self) -> Iterator[TraceRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, index):
        return self.records[index]

    def to_text(self) -> str:
        return "".join(r.to_text() + "\n" for r in self.records)


def run(state: SimState, max_ticks: int) -> Trace:
    """Step a copy of ``state`` until nothing can move or the clock reaches ``max_ticks``."""
    if max_ticks < 0:
        raise ValueError("max_ticks must be non-negative")
    cur = state.copy()
    records: list[TraceRecord] = []
    while cur.clock < max_ticks:
        try:
            batch = _advance(cur, max_ticks)
        except NoEnabledMove:
            break
        if batch is None:
            break
        records.extend(batch)
    return Trace(records, cur)


def simulate(model: Model, scenario: Optional[Scenario] = None, max_ticks: int = 100_000) -> Trace:
    return run(init_simulation(model, scenario), max_ticks)
