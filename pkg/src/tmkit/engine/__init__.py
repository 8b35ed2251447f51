"""Discrete-event simulation of thinging-machine models."""

from .events import EventOccurrence, Violation, check_chronology, detect_events
from .scenario import Injection, Scenario, ScenarioError, load_scenario, parse_scenario
from .sim import (
    InvalidModel,
    NoEnabledMove,
    ScenarioVarUnknown,
    SimState,
    Token,
    Trace,
    TraceRecord,
    Verb,
    init_simulation,
    run,
    simulate,
    step,
)

__all__ = [
    "EventOccurrence", "Injection", "InvalidModel", "NoEnabledMove", "Scenario",
    "ScenarioError", "ScenarioVarUnknown", "SimState", "Token", "Trace", "TraceRecord",
    "Verb", "Violation", "check_chronology", "detect_events", "init_simulation",
    "load_scenario", "parse_scenario", "run", "simulate", "step",
]
