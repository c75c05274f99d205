"""Requirements as labeled, evaluable contracts.

Four requirement kinds are supported:

* state invariants, checked after every event;
* event guards, checked on the state an event of a given kind occurs in;
* timed responses, where a trigger opens an obligation that a later
  response event must discharge strictly before a deadline;
* enabledness requirements, which assert that some event's guard holds
  and so read another event's precondition as a value (see ``guard_of``).

Every predicate is a plain function over an immutable state view. Scope
decides the view: zoo-scoped predicates get the whole ``WorldState``,
turnstile-scoped ones only get its ``Turnstile`` and cannot read ``enters``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .history import Timestamp
from .model import EventKind, LockStatus, TraceEvent, Turnstile, WorldState, lock_status

OPT7_DEADLINE_MS = 760


class Mood(enum.Enum):
    INDICATIVE = "indicative"
    OPTATIVE = "optative"


class Kind(enum.Enum):
    STATE_INVARIANT = "state_invariant"
    EVENT_GUARD = "event_guard"
    TIMED_RESPONSE = "timed_response"
    ENABLEDNESS = "enabledness"


class Scope(enum.Enum):
    ZOO = "zoo"
    TURNSTILE = "turnstile"

    def view(self, state: WorldState) -> WorldState | Turnstile:
        return state if self is Scope.ZOO else state.turnstile


class DuplicateLabel(ValueError):
    pass


StatePredicate = Callable[[Any], bool]
TriggerPredicate = Callable[[Any, TraceEvent, Any], bool]


@dataclass(frozen=True)
class TimedResponseSpec:
    trigger: TriggerPredicate
    response_kind: EventKind
    strict_deadline_ms: int

    def __post_init__(self) -> None:
        if self.strict_deadline_ms <= 0:
            raise ValueError("strict_deadline_ms must be positive")


@dataclass(frozen=True)
class Requirement:
    label: str
    mood: Mood
    kind: Kind
    text: str
    formal: str
    scope: Scope = Scope.ZOO
    predicate: StatePredicate | None = None
    event: EventKind | None = None
    timed: TimedResponseSpec | None = None

    def __post_init__(self) -> None:
        if self.label.startswith("OPT") and self.mood is not Mood.OPTATIVE:
            raise ValueError(f"{self.label}: OPT-labeled requirements are optative")
        if self.label.startswith("IND") and self.mood is not Mood.INDICATIVE:
            raise ValueError(f"{self.label}: IND-labeled requirements are indicative")
        if self.mood is Mood.INDICATIVE and self.kind is not Kind.EVENT_GUARD:
            # world laws constrain which events can happen, nothing else
            raise ValueError(f"{self.label}: indicative requirements must be event guards")
        if self.kind is Kind.TIMED_RESPONSE:
            if self.timed is None:
                raise ValueError(f"{self.label}: timed response needs a TimedResponseSpec")
        elif self.predicate is None:
            raise ValueError(f"{self.label}: missing predicate")
        if self.kind in (Kind.EVENT_GUARD, Kind.ENABLEDNESS) and self.event is None:
            raise ValueError(f"{self.label}: {self.kind.value} needs an event kind")

    def holds(self, state: WorldState) -> bool:
        """Evaluate a state-level predicate on the scoped view of ``state``."""
        assert self.predicate is not None
        return bool(self.predicate(self.scope.view(state)))

    def triggered(self, pre: WorldState, event: TraceEvent, post: WorldState) -> bool:
        assert self.timed is not None
        view = self.scope.view
        return bool(self.timed.trigger(view(pre), event, view(post)))

    @property
    def deadline_ms(self) -> int | None:
        return self.timed.strict_deadline_ms if self.timed else None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "label": self.label,
            "mood": self.mood.value,
            "kind": self.kind.value,
            "scope": self.scope.value,
            "text": self.text,
            "formal": self.formal,
        }
        if self.event is not None:
            out["event"] = self.event.value
        if self.timed is not None:
            out["deadline_ms"] = self.timed.strict_deadline_ms
            out["response"] = self.timed.response_kind.value
        return out


# -- the four formalized requirements -------------------------------------


def opt1_invariant(state: WorldState) -> bool:
    return state.enters.count <= state.turnstile.coins.count


def ind2_guard(turnstile: Turnstile) -> bool:
    # the emptiness conjuncts keep ``last`` total
    if turnstile.unlocks.is_empty:
        return False
    return turnstile.locks.is_empty or turnstile.unlocks.last > turnstile.locks.last


def opt7_trigger(pre: Turnstile, event: TraceEvent, post: Turnstile) -> bool:
    """A push made while unlocked that uses up the last inserted coin."""
    return (
        event.kind is EventKind.PUSH
        and lock_status(pre) is LockStatus.UNLOCKED
        and post.pushes.count == post.coins.count
    )


def opt7_response(spec: TimedResponseSpec, push_at: Timestamp, lock_at: Timestamp) -> bool:
    return lock_at > push_at and lock_at - push_at < spec.strict_deadline_ms


def enter_guard(state: WorldState) -> bool:
    """Precondition of Enter as far as the machine can influence it.

    An entry is not prevented when the barrier may be pushed (turnstile
    unlocked) or when a visitor has already pushed it to its intermediate
    position and only has to complete the rotation.
    """
    turnstile = state.turnstile
    return (
        lock_status(turnstile) is LockStatus.UNLOCKED
        or turnstile.pushes.count > state.enters.count
    )


def _always(_: WorldState) -> bool:
    return True


_GUARDS: dict[EventKind, Callable[[WorldState], bool]] = {
    EventKind.PUSH: lambda state: ind2_guard(state.turnstile),
    EventKind.ENTER: enter_guard,
}


def guard_of(kind: EventKind) -> Callable[[WorldState], bool]:
    """The guard of ``kind`` as an evaluable value; constant true if none is registered."""
    return _GUARDS.get(kind, _always)


def opt2_enabledness(state: WorldState) -> bool:
    if state.turnstile.coins.count > state.enters.count:
        return guard_of(EventKind.ENTER)(state)
    return True


OPT7_SPEC = TimedResponseSpec(
    trigger=opt7_trigger,
    response_kind=EventKind.LOCK,
    strict_deadline_ms=OPT7_DEADLINE_MS,
)


def standard_registry() -> list[Requirement]:
    return [
        Requirement(
            label="OPT1",
            mood=Mood.OPTATIVE,
            kind=Kind.STATE_INVARIANT,
            text="Entries should never exceed payments",
            formal="count(enters) <= count(coins)",
            scope=Scope.ZOO,
            predicate=opt1_invariant,
        ),
        Requirement(
            label="IND2",
            mood=Mood.INDICATIVE,
            kind=Kind.EVENT_GUARD,
            text="It is impossible to use locked turnstile",
            formal=(
                "on push: not is_empty(unlocks) and "
                "(not is_empty(locks) implies last(unlocks) > last(locks))"
            ),
            scope=Scope.TURNSTILE,
            predicate=ind2_guard,
            event=EventKind.PUSH,
        ),
        Requirement(
            label="OPT7",
            mood=Mood.OPTATIVE,
            kind=Kind.TIMED_RESPONSE,
            text="The machine locks the turnstile timely",
            formal=(
                "on push: (old unlocked and count(pushes) = count(coins)) implies "
                "eventually lock with last(locks) > last(pushes) and "
                f"last(locks) - last(pushes) < {OPT7_DEADLINE_MS}"
            ),
            scope=Scope.TURNSTILE,
            timed=OPT7_SPEC,
        ),
        Requirement(
            label="OPT2",
            mood=Mood.OPTATIVE,
            kind=Kind.ENABLEDNESS,
            text="The turnstile let people who pay enter",
            formal="count(coins) > count(enters) implies precondition(enter)",
            scope=Scope.ZOO,
            predicate=opt2_enabledness,
            event=EventKind.ENTER,
        ),
    ]


def validate_registry(registry: Iterable[Requirement]) -> None:
    seen: set[str] = set()
    for req in registry:
        if req.label in seen:
            raise DuplicateLabel(f"duplicate requirement label {req.label!r}")
        seen.add(req.label)


def registry_to_dicts(registry: Sequence[Requirement]) -> list[dict[str, Any]]:
    return [req.to_dict() for req in registry]
