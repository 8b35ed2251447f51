"""Build, check and run thinging-machine (TM) models."""

from .check import CheckCode, validate
from .export import export_chronology_dot, export_dot
from .model import (
    Chronology,
    CyclicChronology,
    DuplicateIdentifier,
    EmptyModel,
    EventSpec,
    FlowArc,
    GlobalVar,
    Guard,
    IllegalAction,
    Machine,
    Model,
    ModelBuilder,
    ModelError,
    ParallelGroup,
    StageKind,
    TriggerArc,
    UnresolvedReference,
    build_model,
    legal_stage_edge,
)
from .text import ParseError, emit, parse

__version__ = "0.1.0"

__all__ = [
    "CheckCode", "Chronology", "CyclicChronology", "DuplicateIdentifier", "EmptyModel",
    "EventSpec", "FlowArc", "GlobalVar", "Guard", "IllegalAction", "Machine", "Model",
    "ModelBuilder", "ModelError", "ParallelGroup", "ParseError", "StageKind", "TriggerArc",
    "UnresolvedReference", "build_model", "emit", "export_chronology_dot", "export_dot",
    "legal_stage_edge", "parse", "validate",
]
