import pytest
from hypothesis import given, settings, strategies as st

from tmkit.check import validate
from tmkit.engine import check_chronology, detect_events
from tmkit.inventory import (
    SCENARIOS, BranchError, Delivery, IllegalTransition, InventoryState, NonPositiveQuantity,
    NoteKind, OutcomeKind, Phase, Request, RfqAction, RfqState, build_inventory_model,
    compute_new_stock, enabled_actions, handle_request, legal_sequences, load_corpus_scenario,
    make_scenario, oracle_summary, partial_quantities, receive_delivery, reorder_quantity,
    rfq_transition, run_actions, run_scenario, summarize_trace,
)

A = RfqAction


@pytest.mark.parametrize("current,requested,expected", [(100, 30, 70), (50, 0, 50), (25, 100, -75)])
def test_compute_new_stock(current, requested, expected):
    assert compute_new_stock(current, requested) == expected


@pytest.mark.parametrize("args,expected", [
    ((25, 20, 10), (5, 5)),
    ((21, 20, 100), (1, 99)),
    ((30, 20, 11), (10, 1)),
])
def test_partial_quantities(args, expected):
    available, pending = partial_quantities(*args)
    assert (available, pending) == expected
    assert available + pending == args[2]


@pytest.mark.parametrize("args", [(20, 20, 5), (100, 20, 30)])
def test_partial_quantities_precondition(args):
    with pytest.raises(BranchError):
        partial_quantities(*args)


def test_full_delivery():
    state, outcome = handle_request(InventoryState(100, 20, 200), Request("r1", 30))
    assert outcome.kind == OutcomeKind.FULL
    assert (outcome.delivered, outcome.enqueued_pending) == (30, 0)
    assert state.current_stock == 70 and state.queue == ()


def test_partial_delivery():
    state, outcome = handle_request(InventoryState(25, 20, 100), Request("r1", 10))
    assert outcome.kind == OutcomeKind.PARTIAL
    assert (outcome.delivered, outcome.enqueued_pending) == (5, 5)
    assert state.current_stock == 20
    assert state.queue == (Request("r1", 10, pending_quantity=5),)
    assert (state.queued_count, state.pending_total) == (1, 5)


def test_queued():
    state, outcome = handle_request(InventoryState(20, 20, 100), Request("r1", 5))
    assert outcome.kind == OutcomeKind.QUEUED
    assert outcome.delivered == 0
    assert (len(state.queue), state.queued_count, state.pending_total) == (1, 1, 5)
    assert state.current_stock == 20


def test_exact_minimum_is_full():
    state, outcome = handle_request(InventoryState(30, 20, 100), Request("r1", 10))
    assert outcome.kind == OutcomeKind.FULL and state.current_stock == 20


def test_non_positive_quantities():
    with pytest.raises(NonPositiveQuantity):
        Request("r", 0)
    with pytest.raises(NonPositiveQuantity):
        Delivery("v", -1)


def test_state_validation():
    with pytest.raises(ValueError):
        InventoryState(10, 20, 5)


def _queued(*quantities, current=20, minimum=20, maximum=100):
    state = InventoryState(current, minimum, maximum)
    for i, q in enumerate(quantities, 1):
        state, _ = handle_request(state, Request(f"r{i}", q))
    return state


def test_delivery_clears_queue():
    state, released = receive_delivery(_queued(5, 7), Delivery("v", 50))
    assert state.current_stock == 58
    assert [(r.id, q) for r, q in released] == [("r1", 5), ("r2", 7)]
    assert state.queue == ()


def test_delivery_partly_serves_queue():
    state, released = receive_delivery(_queued(5, 7), Delivery("v", 6))
    assert [(r.id, q) for r, q in released] == [("r1", 5), ("r2", 1)]
    assert [(r.id, r.pending_quantity) for r in state.queue] == [("r2", 6)]
    assert state.current_stock == 20
    assert state.pending_total == 6


def test_delivery_with_empty_queue():
    state, released = receive_delivery(InventoryState(20, 20, 100), Delivery("v", 10))
    assert state.current_stock == 30 and released == []


def test_small_delivery_keeps_queue():
    state, released = receive_delivery(_queued(5, current=10, minimum=20), Delivery("v", 3))
    assert released == [] and state.current_stock == 13 and state.queued_count == 1


@pytest.mark.parametrize("current,maximum,expected", [(20, 100, 80), (100, 100, 0), (0, 60, 60)])
def test_reorder_quantity(current, maximum, expected):
    assert reorder_quantity(InventoryState(current, 0, maximum)) == expected


operations = st.lists(
    st.tuples(st.sampled_from(["request", "delivery"]), st.integers(1, 100)), max_size=30)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 60), st.integers(0, 100), operations)
def test_inventory_invariants(minimum, extra, ops):
    state = InventoryState(minimum + extra, minimum, minimum + extra + 100)
    initial, delivered_in, released_out = state.current_stock, 0, 0
    for i, (kind, qty) in enumerate(ops):
        if kind == "request":
            before = state.current_stock
            state, outcome = handle_request(state, Request(f"r{i}", qty))
            released_out += outcome.delivered
            if before >= minimum:
                assert state.current_stock >= minimum
        else:
            order = [r.id for r in state.queue]
            state, released = receive_delivery(state, Delivery("v", qty))
            delivered_in += qty
            released_out += sum(q for _, q in released)
            ids = [r.id for r, _ in released]
            assert ids == order[:len(ids)]
        assert initial + delivered_in == state.current_stock + released_out
        assert state.current_stock >= minimum
        state.check_accounting()


# --- RFQ workflow ----------------------------------------------------------

def test_issue():
    assert rfq_transition(RfqState(), A.SUPERVISOR_ISSUE).phase == Phase.TEAM_LEADER_REVIEW


def test_reject_modify_loop():
    state = run_actions([A.SUPERVISOR_ISSUE])
    for _ in range(5):
        state = rfq_transition(state, A.TEAM_LEADER_REJECT)
        assert state.phase == Phase.REJECTED_AWAITING_MODIFICATION
        state = rfq_transition(state, A.SUPERVISOR_MODIFY)
        assert state.phase == Phase.TEAM_LEADER_REVIEW
    assert [n.kind for n in state.notes] == [NoteKind.REJECTION] * 5


def test_manager_rejection_returns_to_manager():
    state = run_actions([A.SUPERVISOR_ISSUE, A.TEAM_LEADER_APPROVE, A.MANAGER_REJECT,
                         A.SUPERVISOR_MODIFY])
    assert state.phase == Phase.MANAGER_REVIEW


def test_happy_path():
    state = run_actions([A.SUPERVISOR_ISSUE, A.TEAM_LEADER_APPROVE, A.MANAGER_APPROVE,
                         A.BUYER_DETAIL, A.CREATE_LTSA, A.SEND_TO_VENDOR])
    assert state.phase == Phase.SENT_TO_VENDOR
    assert [n.kind for n in state.notes] == [NoteKind.APPROVAL_COPY, NoteKind.APPROVAL_COPY,
                                             NoteKind.LTSA_COPY]
    assert all(n.recipient == "Supervisor" for n in state.notes)


def test_buyer_must_detail_first():
    state = run_actions([A.SUPERVISOR_ISSUE, A.TEAM_LEADER_APPROVE, A.MANAGER_APPROVE])
    assert enabled_actions(state) == [A.BUYER_DETAIL]
    with pytest.raises(IllegalTransition):
        rfq_transition(state, A.CREATE_LTSA)


@pytest.mark.parametrize("actions,phase", [
    ([A.SUPERVISOR_ISSUE, A.TEAM_LEADER_CANCEL], Phase.CANCELLED_BY_TEAM_LEADER),
    ([A.SUPERVISOR_ISSUE, A.TEAM_LEADER_APPROVE, A.MANAGER_CANCEL], Phase.CANCELLED_BY_MANAGER),
])
def test_cancellations_are_final(actions, phase):
    state = run_actions(actions)
    assert state.phase == phase
    assert state.notes[-1].kind == NoteKind.CANCELLATION
    assert enabled_actions(state) == []


def test_illegal_transition():
    with pytest.raises(IllegalTransition):
        rfq_transition(RfqState(), A.MANAGER_APPROVE)


def test_rfq_safety_by_enumeration():
    count = 0
    for path, state in legal_sequences(12):
        count += 1
        if state.phase in (Phase.LTSA_CREATED, Phase.SENT_TO_VENDOR):
            assert A.MANAGER_APPROVE in path
            assert path.index(A.MANAGER_APPROVE) < path.index(A.CREATE_LTSA)
        for note in state.notes:
            if note.kind in (NoteKind.CANCELLATION, NoteKind.REJECTION):
                assert note.recipient == "Supervisor"
    assert count > 1


# --- corpus model ----------------------------------------------------------

def test_corpus_validates():
    assert validate(build_inventory_model()) == []


@pytest.mark.parametrize("name", SCENARIOS)
def test_corpus_matches_oracle(name):
    sc = load_corpus_scenario(name)
    assert summarize_trace(run_scenario(sc)) == oracle_summary(sc)


def test_replenish_details():
    m = build_inventory_model()
    trace = run_scenario(load_corpus_scenario("replenish"))
    summary = summarize_trace(trace)
    assert summary.released == (5, 1)
    assert summary.pending_total == 6
    assert summary.current_stock == 20
    assert check_chronology(detect_events(trace, m.events), m.chronology) == []


def test_reorder_in_model_matches_oracle():
    trace = run_scenario(load_corpus_scenario("partial"))
    state = InventoryState(20, 20, 100)
    assert trace.final_state.vars["reorder_qty"] == reorder_quantity(state)


def test_rfq_rejection_path_in_model():
    sc = load_corpus_scenario("partial")
    sc = type(sc)({**sc.settings, "tl_rejections": 2, "mgr_rejections": 1}, sc.injections)
    trace = run_scenario(sc)
    stages = [r.stage for r in trace if r.verb.value in ("arrive", "create")]
    assert stages.count("Supervisor.Revision.process") == 2
    assert stages.count("Supervisor.ManagerRevision.process") == 1
    assert "Vendor.receive" in stages


def test_rfq_cancellation_in_model():
    sc = load_corpus_scenario("partial")
    sc = type(sc)({**sc.settings, "tl_cancel": 1, "tl_rejections": 3}, sc.injections)
    stages = [r.stage for r in run_scenario(sc) if r.verb.value in ("arrive", "create")]
    assert "TeamLeader.Cancel.create" in stages
    assert "TeamLeader.Reject.create" not in stages
    assert "Manager.receive" not in stages


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 40), st.integers(0, 60),
       st.lists(st.tuples(st.sampled_from(["request", "request", "delivery"]),
                          st.integers(1, 100)), min_size=1, max_size=6))
def test_model_agrees_with_oracle(minimum, extra, ops):
    sc = make_scenario(minimum + extra, minimum, minimum + extra + 100, ops)
    assert summarize_trace(run_scenario(sc)) == oracle_summary(sc)
