"""Direct inventory operations: the oracle the simulated corpus model is compared with.

States are values.  Every operation returns a new state and leaves its
argument untouched.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace


class NonPositiveQuantity(ValueError):
    pass


class BranchError(ValueError):
    """An operation was called outside the branch it belongs to."""


@dataclass(frozen=True)
class Request:
    id: str
    quantity: int
    item: str = "Item"
    origin: str = "RequestingDepartment"
    pending_quantity: int = 0

    def __post_init__(self):
        if self.quantity <= 0:
            raise NonPositiveQuantity(f"request {self.id} asks for {self.quantity}")
        if not 0 <= self.pending_quantity <= self.quantity:
            raise ValueError(f"request {self.id}: pending {self.pending_quantity} out of range")

    @property
    def outstanding(self) -> int:
        """What the request still needs: the pending remainder once re-queued."""
        return self.pending_quantity or self.quantity


@dataclass(frozen=True)
class Delivery:
    vendor: str
    quantity: int

    def __post_init__(self):
        if self.quantity <= 0:
            raise NonPositiveQuantity(f"delivery from {self.vendor} of {self.quantity}")


class OutcomeKind(str, enum.Enum):
    FULL = "FullDelivery"
    PARTIAL = "PartialDelivery"
    QUEUED = "Queued"


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    delivered: int
    enqueued_pending: int


@dataclass(frozen=True)
class InventoryState:
    current_stock: int
    minimum: int
    maximum: int
    queue: tuple[Request, ...] = ()
    pending_total: int = 0
    queued_count: int = 0

    def __post_init__(self):
        if self.minimum < 0 or self.current_stock < 0:
            raise ValueError("stock levels must be non-negative")
        if self.maximum < self.minimum:
            raise ValueError(f"maximum {self.maximum} below minimum {self.minimum}")

    def check_accounting(self) -> None:
        """Raise AssertionError unless the queue counters agree with the queue."""
        assert self.queued_count == len(self.queue), (self.queued_count, len(self.queue))
        total = sum(r.outstanding for r in self.queue)
        assert self.pending_total == total, (self.pending_total, total)


def compute_new_stock(current: int, requested: int) -> int:
    return current - requested


def partial_quantities(current: int, minimum: int, requested: int) -> tuple[int, int]:
    """Split a request the stock can only partly cover into (available, pending)."""
    if not (current > minimum and compute_new_stock(current, requested) < minimum):
        raise BranchError(
            f"partial split needs current > minimum and a shortfall "
            f"(current={current}, minimum={minimum}, requested={requested})")
    available = current - minimum
    return available, requested - available


def _enqueue(state: InventoryState, request: Request) -> InventoryState:
    return replace(state,
                   queue=state.queue + (request,),
                   queued_count=state.queued_count + 1,
                   pending_total=state.pending_total + request.outstanding)


def handle_request(state: InventoryState, request: Request) -> tuple[InventoryState, Outcome]:
    """Serve one request from stock: in full, in part, or not at all."""
    qty = request.outstanding
    if qty <= 0:
        raise NonPositiveQuantity(f"request {request.id} asks for {qty}")
    if state.current_stock <= state.minimum:
        return _enqueue(state, request), Outcome(OutcomeKind.QUEUED, 0, qty)
    new_stock = compute_new_stock(state.current_stock, qty)
    if new_stock >= state.minimum:
        return replace(state, current_stock=new_stock), Outcome(OutcomeKind.FULL, qty, 0)
    available, pending = partial_quantities(state.current_stock, state.minimum, qty)
    reshaped = replace(request, pending_quantity=pending)
    state = _enqueue(replace(state, current_stock=state.minimum), reshaped)
    return state, Outcome(OutcomeKind.PARTIAL, available, pending)


def receive_delivery(state: InventoryState,
                     delivery: Delivery) -> tuple[InventoryState, list[tuple[Request, int]]]:
    """Add a delivery to stock, then serve queued requests one by one.

    The drain stops at the first request the stock cannot serve at all; it
    and everything behind it stay queued in order.
    """
    state = replace(state, current_stock=state.current_stock + delivery.quantity)
    released: list[tuple[Request, int]] = []
    while state.queue and state.current_stock > state.minimum:
        head, rest = state.queue[0], state.queue[1:]
        state = replace(state, queue=rest, queued_count=state.queued_count - 1,
                        pending_total=state.pending_total - head.outstanding)
        state, outcome = handle_request(state, head)
        released.append((head, outcome.delivered))
    return state, released


def reorder_quantity(state: InventoryState) -> int:
    """Order-up-to quantity for a new supply order."""
    return state.maximum - state.current_stock
