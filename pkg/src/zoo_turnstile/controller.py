"""Reference turnstile controller and a seeded visitor simulation.

The controller only ever sees the turnstile view of the world (coins,
pushes, locks, unlocks) and reacts to each world event with at most one
machine event, emitted a fixed latency later:

* Coin while locked with unused coins left   -> Unlock
* Push while unlocked that uses the last coin -> Lock

Visitors act under the world laws: a push needs an unlocked turnstile and
an entry completes a push already made. The simulation is driven by
``random.Random`` (Mersenne Twister) seeded from ``VisitorModel.seed``, so
a given (seed, config, steps) triple always yields the same trace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .checker import Trace
from .contracts import OPT7_DEADLINE_MS, guard_of
from .model import EventKind, LockStatus, TraceEvent, WorldState, apply_event, initial_state, lock_status


@dataclass(frozen=True)
class ControllerConfig:
    reaction_latency_ms: int = 1

    def __post_init__(self) -> None:
        if not 0 < self.reaction_latency_ms < OPT7_DEADLINE_MS:
            raise ValueError(
                f"reaction_latency_ms must be in (0, {OPT7_DEADLINE_MS}), "
                f"got {self.reaction_latency_ms}"
            )


@dataclass(frozen=True)
class VisitorModel:
    seed: int = 0
    mean_gap_ms: float = 400.0
    p_coin: float = 0.3
    p_push: float = 0.35
    p_enter: float = 0.3

    def __post_init__(self) -> None:
        probs = (self.p_coin, self.p_push, self.p_enter)
        if any(p < 0 for p in probs):
            raise ValueError("visitor probabilities must be non-negative")
        if sum(probs) > 1 + 1e-12:
            raise ValueError("visitor probabilities must sum to at most 1")
        if self.mean_gap_ms <= 0:
            raise ValueError("mean_gap_ms must be positive")

    @property
    def p_idle(self) -> float:
        return max(0.0, 1.0 - self.p_coin - self.p_push - self.p_enter)


def controller_react(state: WorldState, event: TraceEvent, cfg: ControllerConfig) -> list[TraceEvent]:
    """Machine events emitted in response to ``event``; ``state`` already includes it."""
    turnstile = state.turnstile
    status = lock_status(turnstile)
    at = event.at + cfg.reaction_latency_ms
    if event.kind is EventKind.COIN:
        if status is LockStatus.LOCKED and turnstile.coins.count > turnstile.pushes.count:
            return [TraceEvent(EventKind.UNLOCK, at)]
    elif event.kind is EventKind.PUSH:
        # a push leaves lock/unlock histories alone, so this is the pre-push status
        if status is LockStatus.UNLOCKED and turnstile.pushes.count == turnstile.coins.count:
            return [TraceEvent(EventKind.LOCK, at)]
    return []


def world_enabled(state: WorldState, kind: EventKind) -> bool:
    """Whether a visitor can physically perform ``kind`` in ``state``.

    Push follows its guard. Enter is the completion of a push, so it also
    requires a push that has not yet been completed; that is stronger than
    the Enter guard, which only asks that the machine does not prevent it.
    """
    if not kind.world_controlled:
        return False
    if kind is EventKind.ENTER:
        return state.turnstile.pushes.count > state.enters.count and guard_of(kind)(state)
    return guard_of(kind)(state)


def simulate(visitor: VisitorModel, cfg: ControllerConfig, steps: int) -> Trace:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    rng = random.Random(visitor.seed)
    kinds = (EventKind.COIN, EventKind.PUSH, EventKind.ENTER)
    weights = (visitor.p_coin, visitor.p_push, visitor.p_enter)

    state = initial_state()
    events: list[TraceEvent] = []
    pending: list[TraceEvent] = []
    clock = 0

    def emit(event: TraceEvent) -> None:
        nonlocal state
        state = apply_event(state, event)
        events.append(event)

    for _ in range(steps):
        clock += max(1, round(rng.expovariate(1.0 / visitor.mean_gap_ms)))
        while pending and pending[0].at <= clock:
            emit(pending.pop(0))
        if events and clock <= events[-1].at:
            clock = events[-1].at + 1

        options = [k for k in kinds if world_enabled(state, k)]
        option_weights = [weights[kinds.index(k)] for k in options]
        total = sum(option_weights) + visitor.p_idle
        if total <= 0:
            continue
        pick = rng.random() * total
        chosen = None
        for kind, weight in zip(options, option_weights):
            if pick < weight:
                chosen = kind
                break
            pick -= weight
        if chosen is None:
            continue

        event = TraceEvent(chosen, clock)
        emit(event)
        for reaction in controller_react(state, event, cfg):
            pending.append(reaction)
        pending.sort(key=lambda e: e.at)

    for reaction in pending:
        emit(reaction)
    closed_at = max(clock, events[-1].at if events else 0)
    return Trace(tuple(events), closed_at)
