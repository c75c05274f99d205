"""Bounded exhaustive exploration of admissible traces.

World events take their timestamps from a finite grid, in increasing
order, and only happen when the world laws allow them. Two modes decide
where machine events come from:

``coupled``
    The reference controller reacts to every world event; its Lock/Unlock
    emissions are appended right away at ``at + latency``.
``world``
    No controller. Lock and Unlock are free choices on the grid like any
    other event, so the search covers every machine behaviour.

``max_events`` bounds the number of grid draws. Every node of the search
is a trace; each is closed one maximal deadline after its last event, so
no obligation is left pending, and then checked with ``check_trace``.

Because all timestamps in a trace are distinct, a world state (its five
histories) identifies the trace that produced it, so deduplicating
states by value is exact.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

from .checker import Trace, check_trace, state_to_dict
from .contracts import Kind, Requirement, guard_of, standard_registry
from .controller import ControllerConfig, controller_react, world_enabled
from .history import Timestamp
from .model import EventKind, TraceEvent, WorldState, apply_event, initial_state

DEFAULT_GRID: tuple[Timestamp, ...] = (1, 2, 3, 762, 763, 764)
DEFAULT_NODE_BUDGET = 2_000_000


class BoundsTooLarge(RuntimeError):
    def __init__(self, budget: int) -> None:
        super().__init__(
            f"exploration exceeded the node budget of {budget}; shrink the grid or max_events"
        )
        self.budget = budget


class Mode(enum.Enum):
    WORLD = "world"
    COUPLED = "coupled"


@dataclass(frozen=True)
class ExplorationBounds:
    max_events: int
    time_grid: tuple[Timestamp, ...] = DEFAULT_GRID
    node_budget: int = DEFAULT_NODE_BUDGET

    def __post_init__(self) -> None:
        grid = tuple(self.time_grid)
        object.__setattr__(self, "time_grid", grid)
        if self.max_events < 0:
            raise ValueError("max_events must be non-negative")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("time_grid must be strictly increasing")
        if grid and grid[0] < 0:
            raise ValueError("time_grid timestamps must be non-negative")
        if self.max_events > len(grid):
            raise ValueError("max_events cannot exceed the number of grid points")


@dataclass(frozen=True)
class Counterexample:
    trace: Trace
    violated: tuple[str, ...]
    admissible: bool


@dataclass
class ExplorationReport:
    mode: Mode
    states_visited: int = 0
    invariant_preservation_failures: list[tuple[WorldState, TraceEvent, str]] = field(default_factory=list)
    unsatisfiable_guards: list[EventKind] = field(default_factory=list)
    refinement_failures: list[Counterexample] = field(default_factory=list)
    contradiction_found: bool = False
    contradictions: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.invariant_preservation_failures
            or self.refinement_failures
            or self.contradiction_found
        )

    def failing_labels(self) -> set[str]:
        return {label for cex in self.refinement_failures for label in cex.violated}

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode.value,
            "states_visited": self.states_visited,
            "invariant_preservation_failures": [
                {"label": label, "state": state_to_dict(state), "event": str(event)}
                for state, event, label in self.invariant_preservation_failures
            ],
            "unsatisfiable_guards": [k.value for k in self.unsatisfiable_guards],
            "refinement_failures": [
                {
                    "trace": [str(e) for e in cex.trace.events],
                    "closed_at": cex.trace.closed_at,
                    "violated": list(cex.violated),
                    "admissible": cex.admissible,
                }
                for cex in self.refinement_failures
            ],
            "contradiction_found": self.contradiction_found,
            "contradictions": list(self.contradictions),
            "ok": self.ok,
        }


def _close_horizon(registry: Sequence[Requirement]) -> int:
    return max((r.deadline_ms or 0 for r in registry), default=0)


def _steps(
    state: WorldState,
    last_at: Timestamp,
    grid_index: int,
    bounds: ExplorationBounds,
    mode: Mode,
    cfg: ControllerConfig,
) -> Iterator[tuple[int, list[TraceEvent]]]:
    """Yield (next grid index, events) for every admissible next step."""
    for gi in range(grid_index, len(bounds.time_grid)):
        t = bounds.time_grid[gi]
        if t <= last_at:
            continue
        for kind in EventKind:
            if kind.world_controlled:
                if not world_enabled(state, kind):
                    continue
            elif mode is Mode.COUPLED:
                continue
            event = TraceEvent(kind, t)
            batch = [event]
            if mode is Mode.COUPLED:
                batch.extend(controller_react(apply_event(state, event), event, cfg))
            yield gi + 1, batch


def _walk(
    bounds: ExplorationBounds, mode: Mode, cfg: ControllerConfig
) -> Iterator[tuple[tuple[TraceEvent, ...], WorldState, list[tuple[WorldState, TraceEvent, WorldState]]]]:
    """Depth-first enumeration of (trace events, final state, transitions of last step)."""
    visited = 0
    stack = [((), initial_state(), -1, 0, 0, [])]
    while stack:
        events, state, last_at, grid_index, depth, transitions = stack.pop()
        visited += 1
        if visited > bounds.node_budget:
            raise BoundsTooLarge(bounds.node_budget)
        yield events, state, transitions
        if depth == bounds.max_events:
            continue
        children = []
        for next_index, batch in _steps(state, last_at, grid_index, bounds, mode, cfg):
            post = state
            steps = []
            for event in batch:
                after = apply_event(post, event)
                steps.append((post, event, after))
                post = after
            children.append(
                (events + tuple(batch), post, batch[-1].at, next_index, depth + 1, steps)
            )
        stack.extend(reversed(children))


def enumerate_reachable_states(
    bounds: ExplorationBounds,
    mode: Mode = Mode.COUPLED,
    cfg: ControllerConfig | None = None,
) -> set[WorldState]:
    cfg = cfg or ControllerConfig()
    return {state for _, state, _ in _walk(bounds, mode, cfg)}


def enumerate_traces(
    bounds: ExplorationBounds,
    mode: Mode = Mode.COUPLED,
    cfg: ControllerConfig | None = None,
) -> Iterator[tuple[TraceEvent, ...]]:
    cfg = cfg or ControllerConfig()
    for events, _, _ in _walk(bounds, mode, cfg):
        yield events


def _trace_key(trace: Trace) -> tuple:
    return tuple((e.at, e.kind.value) for e in trace.events)


def explore(
    bounds: ExplorationBounds,
    registry: Sequence[Requirement] | None = None,
    mode: Mode = Mode.COUPLED,
    cfg: ControllerConfig | None = None,
) -> ExplorationReport:
    registry = standard_registry() if registry is None else list(registry)
    cfg = cfg or ControllerConfig()
    horizon = _close_horizon(registry)
    invariants = [r for r in registry if r.kind is Kind.STATE_INVARIANT]
    state_level = [r for r in registry if r.kind in (Kind.STATE_INVARIANT, Kind.ENABLEDNESS)]
    report = ExplorationReport(mode=mode)
    enabled_somewhere: set[EventKind] = set()
    reachable: list[WorldState] = []

    for events, state, transitions in _walk(bounds, mode, cfg):
        report.states_visited += 1
        reachable.append(state)
        for kind in EventKind:
            if kind not in enabled_somewhere and guard_of(kind)(state):
                enabled_somewhere.add(kind)
        for pre, event, post in transitions:
            for req in invariants:
                if req.holds(pre) and not req.holds(post):
                    report.invariant_preservation_failures.append((pre, event, req.label))

        last = events[-1].at if events else 0
        trace = Trace(events, last + horizon)
        result = check_trace(trace, _unique(registry))
        violated = tuple(result.violated)
        if violated or not result.admissible:
            report.refinement_failures.append(Counterexample(trace, violated, result.admissible))

    report.unsatisfiable_guards = [k for k in EventKind if k not in enabled_somewhere]
    report.contradictions = find_contradictions(state_level, reachable)
    report.contradiction_found = bool(report.contradictions)
    report.refinement_failures.sort(key=lambda cex: _trace_key(cex.trace))
    report.invariant_preservation_failures.sort(
        key=lambda f: (f[2], f[1].at, f[1].kind.value, sorted(state_to_dict(f[0]).items()))
    )
    return report


def _unique(registry: Sequence[Requirement]) -> list[Requirement]:
    # check_trace rejects duplicate labels; contradictions among them are
    # reported separately by find_contradictions
    seen: set[str] = set()
    out = []
    for req in registry:
        if req.label not in seen:
            seen.add(req.label)
            out.append(req)
    return out


def find_contradictions(
    state_level: Sequence[Requirement], reachable: Sequence[WorldState]
) -> list[str]:
    """Detect requirements that cannot hold together on the reachable states.

    Reported cases: two requirements sharing a label that disagree on some
    state; two requirements that are each other's negation on every state;
    a set of requirements whose conjunction fails on every state.
    """
    found = []
    if not reachable or not state_level:
        return found
    values = {id(req): [req.holds(s) for s in reachable] for req in state_level}
    for a, b in itertools.combinations(state_level, 2):
        va, vb = values[id(a)], values[id(b)]
        if a.label == b.label and va != vb:
            found.append(f"label {a.label} is registered twice with different predicates")
        elif all(x != y for x, y in zip(va, vb)):
            found.append(f"{a.label} and {b.label} are mutually exclusive on every reachable state")
    if not any(all(values[id(r)][i] for r in state_level) for i in range(len(reachable))):
        found.append("no reachable state satisfies all state-level requirements together")
    return found
