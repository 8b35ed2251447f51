"""The inventory case study as a corpus model, plus glue between its runs and the oracle."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..engine import Injection, Scenario, Trace, parse_scenario, simulate
from ..model import Model
from ..text import parse
from .domain import Delivery, InventoryState, Request, handle_request, receive_delivery

SCENARIOS = ("above_min", "partial", "below_min", "replenish")

REQUEST_ENTRY = "RequestingDepartment.Requisition.create"
DELIVERY_ENTRY = "Vendor.Shipping.create"
RELEASED_AT = "RequestingDepartment.receive"
QUEUED_AT = "QueueSystem.process"


def _corpus_text(*parts: str) -> str:
    return resources.files("tmkit.corpus").joinpath(*parts).read_text(encoding="utf-8")


def model_text() -> str:
    return _corpus_text("models", "inventory.tm")


@lru_cache(maxsize=1)
def build_inventory_model() -> Model:
    return parse(model_text())


def scenario_text(name: str) -> str:
    return _corpus_text("scenarios", f"{name}.tmrun")


def load_corpus_scenario(name: str) -> Scenario:
    if name not in SCENARIOS:
        raise KeyError(f"no corpus scenario {name!r}")
    return parse_scenario(scenario_text(name))


@dataclass(frozen=True)
class RunSummary:
    """What a run did to the inventory, in oracle terms."""
    released: tuple[int, ...]  # quantities that reached the requester, in arrival order
    queued: int
    pending_total: int
    current_stock: int

    @property
    def delivered(self) -> int:
        return sum(self.released)


def summarize_trace(trace: Trace) -> RunSummary:
    state = trace.final_state
    released = tuple(tok.payload.get("qty", 0) for tok in state.tokens_at(RELEASED_AT))
    return RunSummary(released, state.vars["queued_count"], state.vars["pending_total"],
                      state.vars["current_stock"])


def run_scenario(scenario: Scenario, max_ticks: int = 100_000) -> Trace:
    return simulate(build_inventory_model(), scenario, max_ticks)


def make_scenario(current: int, minimum: int, maximum: int, operations) -> Scenario:
    """Scenario for a sequence of ``("request", qty)`` / ``("delivery", qty)`` operations.

    Operations are spaced far apart so each settles before the next starts.
    """
    injections = []
    for i, (kind, qty) in enumerate(operations):
        thing, stage = ("Request", REQUEST_ENTRY) if kind == "request" else ("Item", DELIVERY_ENTRY)
        injections.append(Injection(thing, stage, 1000 * i, {"qty": qty}))
    settings = {"current_stock": current, "minimum": minimum, "maximum": maximum}
    return Scenario(settings, tuple(injections))


def oracle_summary(scenario: Scenario) -> RunSummary:
    """Replay a scenario's injections through the direct domain operations."""
    s = scenario.settings
    state = InventoryState(s.get("current_stock", 0), s.get("minimum", 0), s.get("maximum", 0))
    released: list[int] = []
    for i, inj in enumerate(sorted(scenario.injections, key=lambda j: j.tick)):
        qty = inj.payload.get("qty", 0)
        if inj.stage == REQUEST_ENTRY:
            state, outcome = handle_request(state, Request(f"r{i}", qty))
            if outcome.delivered:
                released.append(outcome.delivered)
        elif inj.stage == DELIVERY_ENTRY:
            state, out = receive_delivery(state, Delivery("vendor", qty))
            released.extend(q for _, q in out if q)
        else:
            raise ValueError(f"oracle has no operation for an injection at {inj.stage}")
    return RunSummary(tuple(released), state.queued_count, state.pending_total, state.current_stock)
