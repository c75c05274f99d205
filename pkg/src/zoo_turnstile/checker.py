"""Offline replay of event traces against a requirement registry.

The checker walks a trace once, keeping the current world state and the
list of open timed-response obligations, and records the first violation
of every requirement.

Evaluation points, per event at index ``i``:

1. event guards for the event's kind, on the state the event occurs in;
   a failing indicative guard makes the trace inadmissible at ``i``;
2. enabledness requirements, on that same state, when the event is
   world-controlled (the moments at which the world gets to act);
3. open obligations: the event expires every obligation whose deadline it
   reaches, otherwise a response-kind event discharges it;
4. the event is applied, then state invariants are checked and triggers
   may open new obligations.

At the end of a closed trace the final state is checked for enabledness
and obligations whose deadline the close marker reaches are violated.
Obligations still open after that are pending.

Once a trace is inadmissible, optative requirements are no longer
assessed; violations found earlier are kept.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .contracts import Kind, Mood, Requirement, opt7_response, standard_registry, validate_registry
from .history import Timestamp, check_timestamp
from .model import EventKind, TraceEvent, WorldState, apply_event, initial_state


class IllFormedTrace(ValueError):
    def __init__(self, message: str, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class Trace:
    events: tuple[TraceEvent, ...] = ()
    closed_at: Timestamp | None = None

    def __post_init__(self) -> None:
        events = tuple(self.events)
        object.__setattr__(self, "events", events)
        prev: TraceEvent | None = None
        for i, event in enumerate(events):
            if prev is not None and event.at <= prev.at:
                raise IllFormedTrace(
                    f"event {i} ({event}) is not strictly later than event {i - 1} ({prev})",
                    index=i,
                )
            prev = event
        if self.closed_at is not None:
            check_timestamp(self.closed_at)
            if prev is not None and self.closed_at < prev.at:
                raise IllFormedTrace(
                    f"closed_at {self.closed_at} precedes last event {prev}",
                    index=len(events),
                )

    def __len__(self) -> int:
        return len(self.events)

    @property
    def last_at(self) -> Timestamp | None:
        return self.events[-1].at if self.events else None

    def closed(self, at: Timestamp) -> Trace:
        return Trace(self.events, at)


class Status(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    PENDING = "pending"
    NOT_ASSESSED = "not_assessed"


@dataclass(frozen=True)
class Verdict:
    status: Status
    position: int | None = None
    # opened_at of obligations still open at the end of observation
    pending: tuple[Timestamp, ...] = ()
    detail: str = field(default="", compare=False)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"status": self.status.value}
        if self.position is not None:
            out["position"] = self.position
        if self.pending:
            out["pending_since"] = list(self.pending)
        if self.detail:
            out["detail"] = self.detail
        return out

    def __str__(self) -> str:
        if self.status is Status.VIOLATED:
            return f"VIOLATED at {self.position}: {self.detail}"
        if self.status is Status.PENDING:
            return f"PENDING (obligations opened at {', '.join(map(str, self.pending))})"
        return self.status.name.replace("_", " ")


@dataclass(frozen=True)
class Obligation:
    requirement_label: str
    opened_at: Timestamp
    strict_deadline: Timestamp
    response_kind: EventKind
    trigger_index: int

    def __post_init__(self) -> None:
        if self.strict_deadline <= self.opened_at:
            raise ValueError("strict_deadline must be later than opened_at")


@dataclass(frozen=True)
class CheckReport:
    admissible: bool
    inadmissible_at: int | None
    verdicts: tuple[tuple[str, Verdict], ...]
    final_state: WorldState
    requirements: tuple[Requirement, ...] = field(default=(), compare=False, repr=False)

    def verdict(self, label: str) -> Verdict:
        for name, verdict in self.verdicts:
            if name == label:
                return verdict
        raise KeyError(label)

    @property
    def violated(self) -> list[str]:
        return [name for name, v in self.verdicts if v.status is Status.VIOLATED]

    def exit_code(self) -> int:
        if not self.admissible:
            return 2
        if self.violated:
            return 1
        return 0

    def to_dict(self) -> dict[str, Any]:
        by_label = {req.label: req for req in self.requirements}
        entries = []
        for label, verdict in self.verdicts:
            entry: dict[str, Any] = {"label": label}
            req = by_label.get(label)
            if req is not None:
                entry.update(mood=req.mood.value, kind=req.kind.value, text=req.text)
            entry["verdict"] = verdict.to_dict()
            entries.append(entry)
        return {
            "admissible": self.admissible,
            "inadmissible_at": self.inadmissible_at,
            "requirements": entries,
            "final_state": state_to_dict(self.final_state),
        }

    def render(self) -> str:
        by_label = {req.label: req for req in self.requirements}
        lines = []
        if self.admissible:
            lines.append("trace: admissible")
        else:
            lines.append(
                f"trace: INADMISSIBLE at event {self.inadmissible_at} "
                "(an indicative law was broken; optative requirements not assessed from there)"
            )
        for label, verdict in self.verdicts:
            req = by_label.get(label)
            if req is None:
                lines.append(f"{label}: {verdict}")
                continue
            lines.append(f"{label} [{req.mood.value}, {req.kind.value}] {req.text}")
            lines.append(f"    formal:  {req.formal}")
            lines.append(f"    verdict: {verdict}")
        counts = ", ".join(f"{k}={v}" for k, v in self.final_state.counts().items())
        lines.append(f"final counts: {counts}")
        return "\n".join(lines) + "\n"


def state_to_dict(state: WorldState) -> dict[str, list[int]]:
    return {kind.value: list(state.history(kind).items) for kind in EventKind}


class _Findings:
    """First violation per label, in the order they are found."""

    def __init__(self) -> None:
        self.first: dict[str, tuple[int, str]] = {}

    def add(self, label: str, position: int, detail: str) -> None:
        self.first.setdefault(label, (position, detail))


def check_trace(trace: Trace, registry: Sequence[Requirement] | None = None) -> CheckReport:
    registry = standard_registry() if registry is None else list(registry)
    validate_registry(registry)

    invariants = [r for r in registry if r.kind is Kind.STATE_INVARIANT]
    guards = [r for r in registry if r.kind is Kind.EVENT_GUARD]
    enabledness = [r for r in registry if r.kind is Kind.ENABLEDNESS]
    timed = [r for r in registry if r.kind is Kind.TIMED_RESPONSE]
    specs = {r.label: r.timed for r in timed}

    found = _Findings()
    inadmissible_at: int | None = None
    open_obligations: list[Obligation] = []
    state = initial_state()

    for req in invariants:
        if not req.holds(state):
            found.add(req.label, 0, "fails in the initial state")

    for i, event in enumerate(trace.events):
        failed_guards = [
            req for req in guards if req.event is event.kind and not req.holds(state)
        ]
        for req in failed_guards:
            if req.mood is Mood.INDICATIVE:
                found.add(req.label, i, f"{event} occurred while its guard was false")
                if inadmissible_at is None:
                    inadmissible_at = i

        assessing = inadmissible_at is None
        if assessing:
            for req in failed_guards:
                if req.mood is Mood.OPTATIVE:
                    found.add(req.label, i, f"{event} occurred while its guard was false")
        if assessing and event.kind.world_controlled:
            for req in enabledness:
                if not req.holds(state):
                    found.add(req.label, i, f"{req.event.value} not enabled before {event}")

        if assessing and open_obligations:
            remaining = []
            for ob in open_obligations:
                if event.at >= ob.strict_deadline:
                    found.add(ob.requirement_label, i, _expired(ob, f"{event}"))
                elif event.kind is ob.response_kind and opt7_response(
                    specs[ob.requirement_label], ob.opened_at, event.at
                ):
                    continue
                else:
                    remaining.append(ob)
            open_obligations = remaining

        post = apply_event(state, event)
        if assessing:
            for req in invariants:
                if not req.holds(post):
                    found.add(req.label, i, f"fails after {event}")
            for req in timed:
                if req.triggered(state, event, post):
                    spec = req.timed
                    open_obligations.append(
                        Obligation(
                            requirement_label=req.label,
                            opened_at=event.at,
                            strict_deadline=event.at + spec.strict_deadline_ms,
                            response_kind=spec.response_kind,
                            trigger_index=i,
                        )
                    )
        state = post

    end = len(trace.events)
    if inadmissible_at is None and trace.closed_at is not None:
        for req in enabledness:
            if not req.holds(state):
                found.add(req.label, end, f"{req.event.value} not enabled at close")
        remaining = []
        for ob in open_obligations:
            if trace.closed_at >= ob.strict_deadline:
                found.add(ob.requirement_label, end, _expired(ob, f"close@{trace.closed_at}"))
            else:
                remaining.append(ob)
        open_obligations = remaining

    verdicts = []
    for req in registry:
        if req.label in found.first:
            position, detail = found.first[req.label]
            verdict = Verdict(Status.VIOLATED, position, detail=detail)
        elif inadmissible_at is not None and req.mood is Mood.OPTATIVE:
            verdict = Verdict(Status.NOT_ASSESSED)
        else:
            pending = tuple(
                ob.opened_at for ob in open_obligations if ob.requirement_label == req.label
            )
            verdict = Verdict(Status.PENDING, pending=pending) if pending else Verdict(Status.SATISFIED)
        verdicts.append((req.label, verdict))

    return CheckReport(
        admissible=inadmissible_at is None,
        inadmissible_at=inadmissible_at,
        verdicts=tuple(verdicts),
        final_state=state,
        requirements=tuple(registry),
    )


def _expired(ob: Obligation, at: str) -> str:
    return (
        f"no {ob.response_kind.value} within {ob.strict_deadline - ob.opened_at} ms "
        f"of trigger event {ob.trigger_index} at {ob.opened_at} (deadline reached by {at})"
    )


def trace_of(events: Iterable[TraceEvent], closed_at: Timestamp | None = None) -> Trace:
    return Trace(tuple(events), closed_at)
