import inspect

import pytest
from hypothesis import given

from _gen import event_kinds, world_states
from zoo_turnstile.contracts import ind2_guard
from zoo_turnstile.history import EventHistory, NonMonotoneTimestamp
from zoo_turnstile.model import (
    EventKind,
    LockStatus,
    TraceEvent,
    Turnstile,
    WorldState,
    apply_event,
    initial_state,
    lock_status,
)


def h(*xs):
    return EventHistory(xs)


def test_initial_state_is_empty_and_locked():
    s = initial_state()
    assert all(v == 0 for v in s.counts().values())
    assert lock_status(s.turnstile) is LockStatus.LOCKED
    # IND2 forbids a push here, which is what makes "locked" the right default
    assert not ind2_guard(s.turnstile)


def test_apply_coin():
    s = apply_event(initial_state(), TraceEvent(EventKind.COIN, 100))
    assert s.turnstile.coins == h(100)
    assert s.counts() == {"push": 0, "enter": 0, "coin": 1, "lock": 0, "unlock": 0}


def test_apply_rejects_stale_lock():
    s = WorldState(turnstile=Turnstile(locks=h(50)))
    with pytest.raises(NonMonotoneTimestamp):
        apply_event(s, TraceEvent(EventKind.LOCK, 40))


def test_each_kind_once():
    s = initial_state()
    for t, kind in enumerate(EventKind, start=1):
        s = apply_event(s, TraceEvent(kind, t))
    assert set(s.counts().values()) == {1}


@pytest.mark.parametrize(
    "unlocks, locks, expected",
    [
        ((), (), LockStatus.LOCKED),
        ((10,), (), LockStatus.UNLOCKED),
        ((10,), (20,), LockStatus.LOCKED),
        ((10, 30), (20,), LockStatus.UNLOCKED),
    ],
)
def test_lock_status(unlocks, locks, expected):
    assert lock_status(Turnstile(unlocks=h(*unlocks), locks=h(*locks))) is expected


def test_hosts():
    assert EventKind.ENTER.host == "zoo"
    assert EventKind.COIN.host == "coinslot"
    assert EventKind.PUSH.host == "barrier"
    assert EventKind.LOCK.host == EventKind.UNLOCK.host == "turnstile"
    assert {k for k in EventKind if k.world_controlled} == {
        EventKind.PUSH,
        EventKind.ENTER,
        EventKind.COIN,
    }


def test_turnstile_view_cannot_see_enters():
    assert "enters" not in {f for f in Turnstile.__dataclass_fields__}
    assert not hasattr(Turnstile(), "enters")
    assert inspect.signature(lock_status).parameters["turnstile"].annotation == "Turnstile"


@given(world_states, event_kinds)
def test_frame_property(state, kind):
    last = state.history(kind).last if state.history(kind).count else -1
    post = apply_event(state, TraceEvent(kind, last + 1))
    for other in EventKind:
        if other is kind:
            assert post.history(other).but_last == state.history(other)
        else:
            assert post.history(other) == state.history(other)


def test_events_round_trip():
    s = initial_state()
    evs = [TraceEvent(EventKind.COIN, 1), TraceEvent(EventKind.UNLOCK, 2), TraceEvent(EventKind.PUSH, 3)]
    for e in evs:
        s = apply_event(s, e)
    assert s.events() == tuple(evs)
    assert s.event_count == 3
