"""The zoo, its turnstile and the five observable event kinds.

The zoo owns one turnstile, and the turnstile owns one coin slot and one
barrier. Because there is exactly one of each, the whole object graph is
collapsed into one immutable aggregate: ``WorldState`` holds the zoo's
``enters`` history and a ``Turnstile`` value holding the four histories
hosted by the turnstile, its coin slot and its barrier.

``Turnstile`` deliberately has no ``enters`` field. Anything scoped to the
turnstile is handed a ``Turnstile`` rather than a ``WorldState`` and so
cannot observe entries to the zoo.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .history import EMPTY, EventHistory, Timestamp, check_timestamp


class EventKind(enum.Enum):
    PUSH = "push"
    ENTER = "enter"
    COIN = "coin"
    LOCK = "lock"
    UNLOCK = "unlock"

    @property
    def world_controlled(self) -> bool:
        return self in WORLD_EVENTS

    @property
    def host(self) -> str:
        """Name of the object whose history records this kind of event."""
        return _HOSTS[self]


WORLD_EVENTS = frozenset({EventKind.PUSH, EventKind.ENTER, EventKind.COIN})
MACHINE_EVENTS = frozenset({EventKind.LOCK, EventKind.UNLOCK})

_HOSTS = {
    EventKind.PUSH: "barrier",
    EventKind.ENTER: "zoo",
    EventKind.COIN: "coinslot",
    EventKind.LOCK: "turnstile",
    EventKind.UNLOCK: "turnstile",
}


class LockStatus(enum.Enum):
    LOCKED = "locked"
    UNLOCKED = "unlocked"


@dataclass(frozen=True, slots=True)
class TraceEvent:
    kind: EventKind
    at: Timestamp

    def __post_init__(self) -> None:
        if not isinstance(self.kind, EventKind):
            raise TypeError(f"kind must be an EventKind, got {self.kind!r}")
        check_timestamp(self.at)

    def __str__(self) -> str:
        return f"{self.kind.value}@{self.at}"


@dataclass(frozen=True, slots=True)
class Turnstile:
    """Histories visible to the turnstile: its own plus its coin slot's and barrier's."""

    coins: EventHistory = EMPTY
    pushes: EventHistory = EMPTY
    locks: EventHistory = EMPTY
    unlocks: EventHistory = EMPTY


@dataclass(frozen=True, slots=True)
class WorldState:
    enters: EventHistory = EMPTY
    turnstile: Turnstile = Turnstile()

    def history(self, kind: EventKind) -> EventHistory:
        if kind is EventKind.ENTER:
            return self.enters
        return getattr(self.turnstile, _TURNSTILE_FIELD[kind])

    @property
    def event_count(self) -> int:
        return self.enters.count + sum(
            self.history(k).count for k in _TURNSTILE_FIELD
        )

    def events(self) -> tuple[TraceEvent, ...]:
        """All recorded events merged into one time-ordered sequence."""
        merged = [
            TraceEvent(kind, t) for kind in EventKind for t in self.history(kind)
        ]
        merged.sort(key=lambda e: (e.at, e.kind.value))
        return tuple(merged)

    def counts(self) -> dict[str, int]:
        return {kind.value: self.history(kind).count for kind in EventKind}


_TURNSTILE_FIELD = {
    EventKind.COIN: "coins",
    EventKind.PUSH: "pushes",
    EventKind.LOCK: "locks",
    EventKind.UNLOCK: "unlocks",
}


def initial_state() -> WorldState:
    return WorldState()


def apply_event(state: WorldState, event: TraceEvent) -> WorldState:
    """Record ``event`` in the one history its kind maps to.

    Raises NonMonotoneTimestamp when the event is not strictly later than
    the last event of the same kind.
    """
    if event.kind is EventKind.ENTER:
        return WorldState(state.enters.record(event.at), state.turnstile)
    field = _TURNSTILE_FIELD[event.kind]
    turnstile = state.turnstile
    updated = getattr(turnstile, field).record(event.at)
    kwargs = {
        name: getattr(turnstile, name) for name in _TURNSTILE_FIELD.values()
    }
    kwargs[field] = updated
    return WorldState(state.enters, Turnstile(**kwargs))


def lock_status(turnstile: Turnstile) -> LockStatus:
    """Unlocked iff some unlock happened and it is later than every lock.

    With no unlock ever received the turnstile counts as locked.
    """
    unlocks, locks = turnstile.unlocks, turnstile.locks
    if unlocks.is_empty:
        return LockStatus.LOCKED
    if locks.is_empty or unlocks.last > locks.last:
        return LockStatus.UNLOCKED
    return LockStatus.LOCKED
