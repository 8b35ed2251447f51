"""Approval workflow for a request for quotation (RFQ).

The supervisor issues an RFQ; the team leader and then the manager each
cancel, reject (sending it back for modification) or approve it; the
declared buyer details it into a long-term supply agreement (LTSA) that
goes to the vendor.  Notes produced along the way are addressed to the
supervisor.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterator


class Phase(str, enum.Enum):
    CREATED = "Created"
    TEAM_LEADER_REVIEW = "TeamLeaderReview"
    CANCELLED_BY_TEAM_LEADER = "CancelledByTeamLeader"
    REJECTED_AWAITING_MODIFICATION = "RejectedAwaitingModification"
    MANAGER_REVIEW = "ManagerReview"
    CANCELLED_BY_MANAGER = "CancelledByManager"
    REJECTED_BY_MANAGER_AWAITING_MODIFICATION = "RejectedByManagerAwaitingModification"
    BUYER_DETAILING = "BuyerDetailing"
    LTSA_CREATED = "LtsaCreated"
    SENT_TO_VENDOR = "SentToVendor"


class RfqAction(str, enum.Enum):
    SUPERVISOR_ISSUE = "SupervisorIssue"
    TEAM_LEADER_CANCEL = "TeamLeaderCancel"
    TEAM_LEADER_REJECT = "TeamLeaderReject"
    SUPERVISOR_MODIFY = "SupervisorModify"
    TEAM_LEADER_APPROVE = "TeamLeaderApprove"
    MANAGER_CANCEL = "ManagerCancel"
    MANAGER_REJECT = "ManagerReject"
    MANAGER_APPROVE = "ManagerApprove"
    BUYER_DETAIL = "BuyerDetail"
    CREATE_LTSA = "CreateLtsa"
    SEND_TO_VENDOR = "SendToVendor"


class NoteKind(str, enum.Enum):
    CANCELLATION = "Cancellation"
    REJECTION = "Rejection"
    APPROVAL_COPY = "ApprovalCopy"
    LTSA_COPY = "LtsaCopy"


SUPERVISOR = "Supervisor"


@dataclass(frozen=True)
class Note:
    kind: NoteKind
    recipient: str = SUPERVISOR


@dataclass(frozen=True)
class RfqState:
    phase: Phase = Phase.CREATED
    declared_buyer: str = "buyer"
    notes: tuple[Note, ...] = ()
    detailed: bool = False  # the buyer has filled in the details


class IllegalTransition(Exception):
    def __init__(self, phase: Phase, action: RfqAction):
        super().__init__(f"{action.value} is not enabled in {phase.value}")
        self.phase = phase
        self.action = action


A, P, N = RfqAction, Phase, NoteKind

# (phase, action) -> (next phase, note produced or None)
_TABLE: dict[tuple[Phase, RfqAction], tuple[Phase, NoteKind | None]] = {
    (P.CREATED, A.SUPERVISOR_ISSUE): (P.TEAM_LEADER_REVIEW, None),
    (P.TEAM_LEADER_REVIEW, A.TEAM_LEADER_CANCEL): (P.CANCELLED_BY_TEAM_LEADER, N.CANCELLATION),
    (P.TEAM_LEADER_REVIEW, A.TEAM_LEADER_REJECT): (P.REJECTED_AWAITING_MODIFICATION, N.REJECTION),
    (P.TEAM_LEADER_REVIEW, A.TEAM_LEADER_APPROVE): (P.MANAGER_REVIEW, N.APPROVAL_COPY),
    (P.REJECTED_AWAITING_MODIFICATION, A.SUPERVISOR_MODIFY): (P.TEAM_LEADER_REVIEW, None),
    (P.MANAGER_REVIEW, A.MANAGER_CANCEL): (P.CANCELLED_BY_MANAGER, N.CANCELLATION),
    (P.MANAGER_REVIEW, A.MANAGER_REJECT): (P.REJECTED_BY_MANAGER_AWAITING_MODIFICATION, N.REJECTION),
    (P.MANAGER_REVIEW, A.MANAGER_APPROVE): (P.BUYER_DETAILING, N.APPROVAL_COPY),
    (P.REJECTED_BY_MANAGER_AWAITING_MODIFICATION, A.SUPERVISOR_MODIFY): (P.MANAGER_REVIEW, None),
    (P.BUYER_DETAILING, A.BUYER_DETAIL): (P.BUYER_DETAILING, None),
    (P.BUYER_DETAILING, A.CREATE_LTSA): (P.LTSA_CREATED, N.LTSA_COPY),
    (P.LTSA_CREATED, A.SEND_TO_VENDOR): (P.SENT_TO_VENDOR, None),
}


def enabled_actions(state: RfqState) -> list[RfqAction]:
    """Actions allowed in ``state``, in declaration order."""
    out = []
    for action in RfqAction:
        if (state.phase, action) not in _TABLE:
            continue
        if action == A.BUYER_DETAIL and state.detailed:
            continue
        if action == A.CREATE_LTSA and not state.detailed:
            continue
        out.append(action)
    return out


def rfq_transition(state: RfqState, action: RfqAction) -> RfqState:
    if action not in enabled_actions(state):
        raise IllegalTransition(state.phase, action)
    phase, note = _TABLE[(state.phase, action)]
    notes = state.notes + (Note(note),) if note is not None else state.notes
    return replace(state, phase=phase, notes=notes,
                   detailed=state.detailed or action == A.BUYER_DETAIL)


def run_actions(actions, state: RfqState | None = None) -> RfqState:
    state = state or RfqState()
    for action in actions:
        state = rfq_transition(state, RfqAction(action))
    return state


def legal_sequences(max_length: int, state: RfqState | None = None
                    ) -> Iterator[tuple[tuple[RfqAction, ...], RfqState]]:
    """Every legal action string of length 0..max_length with its end state (depth first)."""
    stack = [((), state or RfqState())]
    while stack:
        path, st = stack.pop()
        yield path, st
        if len(path) < max_length:
            for action in reversed(enabled_actions(st)):
                stack.append((path + (action,), rfq_transition(st, action)))
