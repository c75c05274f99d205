"""Naive reference checker used to cross-validate ``check_trace``.

Nothing here is incremental. Each prefix state is rebuilt from the raw
event list, every predicate is re-evaluated on every prefix, and each
timed-response trigger is resolved by scanning the rest of the trace.
The only things shared with the checker are the requirement predicates
themselves and the report data types.
"""

from __future__ import annotations

from typing import Sequence

from .checker import CheckReport, Status, Trace, Verdict
from .contracts import Kind, Mood, Requirement, standard_registry, validate_registry
from .history import EventHistory
from .model import EventKind, TraceEvent, Turnstile, WorldState


def _state_from_scratch(events: Sequence[TraceEvent]) -> WorldState:
    def times(kind: EventKind) -> EventHistory:
        return EventHistory(tuple(e.at for e in events if e.kind is kind))

    return WorldState(
        enters=times(EventKind.ENTER),
        turnstile=Turnstile(
            coins=times(EventKind.COIN),
            pushes=times(EventKind.PUSH),
            locks=times(EventKind.LOCK),
            unlocks=times(EventKind.UNLOCK),
        ),
    )


def oracle_check(trace: Trace, registry: Sequence[Requirement] | None = None) -> CheckReport:
    registry = standard_registry() if registry is None else list(registry)
    validate_registry(registry)
    events = trace.events
    n = len(events)
    # states[k] is the state after the first k events
    states = [_state_from_scratch(events[:k]) for k in range(n + 1)]

    cutoff = n + 1  # first inadmissible event index, or "never"
    for i in range(n):
        for req in registry:
            if (
                req.kind is Kind.EVENT_GUARD
                and req.mood is Mood.INDICATIVE
                and req.event is events[i].kind
                and not req.holds(states[i])
            ):
                cutoff = min(cutoff, i)
    admissible = cutoff > n

    verdicts = []
    for req in registry:
        # (position, ordering key within the position) of each failure found
        failures: list[tuple[int, int]] = []
        pending: list[int] = []

        if req.kind is Kind.STATE_INVARIANT:
            if not req.holds(states[0]):
                failures.append((0, -1))
            for i in range(n):
                if not req.holds(states[i + 1]):
                    failures.append((i, 0))

        elif req.kind is Kind.EVENT_GUARD:
            for i in range(n):
                if events[i].kind is req.event and not req.holds(states[i]):
                    failures.append((i, 0))

        elif req.kind is Kind.ENABLEDNESS:
            for i in range(n):
                if events[i].kind.world_controlled and not req.holds(states[i]):
                    failures.append((i, 0))
            if trace.closed_at is not None and not req.holds(states[n]):
                failures.append((n, 0))

        else:
            spec = req.timed
            for i in range(n):
                if not req.triggered(states[i], events[i], states[i + 1]):
                    continue
                deadline = events[i].at + spec.strict_deadline_ms
                outcome: int | None = None  # violation position
                resolved = False
                for j in range(i + 1, n):
                    later = events[j]
                    if later.at >= deadline:
                        outcome, resolved = j, True
                        break
                    if later.kind is spec.response_kind and 0 < later.at - events[i].at < spec.strict_deadline_ms:
                        resolved = True
                        break
                if not resolved:
                    if trace.closed_at is not None and trace.closed_at >= deadline:
                        outcome = n
                    elif i < cutoff:
                        pending.append(events[i].at)
                if outcome is not None:
                    failures.append((outcome, i))

        if req.mood is Mood.OPTATIVE:
            # only failures observed before the trace became impossible count;
            # an enabledness check at close happens after every event
            limit = cutoff if not admissible else n + 1
            failures = [f for f in failures if f[0] < limit or (f[1] == -1)]

        if failures:
            position, _ = min(failures)
            verdict = Verdict(Status.VIOLATED, position, detail="found by oracle")
        elif req.mood is Mood.OPTATIVE and not admissible:
            verdict = Verdict(Status.NOT_ASSESSED)
        elif pending:
            verdict = Verdict(Status.PENDING, pending=tuple(pending))
        else:
            verdict = Verdict(Status.SATISFIED)
        verdicts.append((req.label, verdict))

    return CheckReport(
        admissible=admissible,
        inadmissible_at=None if admissible else cutoff,
        verdicts=tuple(verdicts),
        final_state=states[n],
        requirements=tuple(registry),
    )
