"""The inventory case study: direct domain operations and the executable corpus model."""

from .corpus import (
    SCENARIOS,
    RunSummary,
    build_inventory_model,
    load_corpus_scenario,
    make_scenario,
    oracle_summary,
    run_scenario,
    summarize_trace,
)
from .domain import (
    BranchError,
    Delivery,
    InventoryState,
    NonPositiveQuantity,
    Outcome,
    OutcomeKind,
    Request,
    compute_new_stock,
    handle_request,
    partial_quantities,
    receive_delivery,
    reorder_quantity,
)
from .rfq import (
    IllegalTransition,
    Note,
    NoteKind,
    Phase,
    RfqAction,
    RfqState,
    enabled_actions,
    legal_sequences,
    rfq_transition,
    run_actions,
)

__all__ = [
    "SCENARIOS", "BranchError", "Delivery", "IllegalTransition", "InventoryState",
    "NonPositiveQuantity", "Note", "NoteKind", "Outcome", "OutcomeKind", "Phase",
    "Request", "RfqAction", "RfqState", "RunSummary", "build_inventory_model",
    "compute_new_stock", "enabled_actions", "handle_request", "legal_sequences",
    "load_corpus_scenario", "make_scenario", "oracle_summary", "partial_quantities",
    "receive_delivery", "reorder_quantity", "rfq_transition", "run_actions",
    "run_scenario", "summarize_trace",
]
