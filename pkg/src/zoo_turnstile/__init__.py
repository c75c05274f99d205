"""Executable requirements for the zoo turnstile: contracts over event
histories, an offline trace checker, a reference controller and a bounded
explorer."""

from .checker import CheckReport, IllFormedTrace, Status, Trace, Verdict, check_trace
from .contracts import (
    Kind,
    Mood,
    Requirement,
    Scope,
    TimedResponseSpec,
    guard_of,
    ind2_guard,
    opt1_invariant,
    opt2_enabledness,
    opt7_response,
    opt7_trigger,
    standard_registry,
)
from .controller import ControllerConfig, VisitorModel, controller_react, simulate
from .explorer import BoundsTooLarge, ExplorationBounds, Mode, enumerate_reachable_states, explore
from .history import EmptyHistoryAccess, EventHistory, NonMonotoneTimestamp
from .model import EventKind, LockStatus, TraceEvent, Turnstile, WorldState, apply_event, initial_state, lock_status
from .oracle import oracle_check

__all__ = [
    "BoundsTooLarge",
    "CheckReport",
    "ControllerConfig",
    "EmptyHistoryAccess",
    "EventHistory",
    "EventKind",
    "ExplorationBounds",
    "IllFormedTrace",
    "Kind",
    "LockStatus",
    "Mode",
    "Mood",
    "NonMonotoneTimestamp",
    "Requirement",
    "Scope",
    "Status",
    "TimedResponseSpec",
    "Trace",
    "TraceEvent",
    "Turnstile",
    "Verdict",
    "VisitorModel",
    "WorldState",
    "apply_event",
    "check_trace",
    "controller_react",
    "enumerate_reachable_states",
    "explore",
    "guard_of",
    "ind2_guard",
    "initial_state",
    "lock_status",
    "opt1_invariant",
    "opt2_enabledness",
    "opt7_response",
    "opt7_trigger",
    "oracle_check",
    "simulate",
    "standard_registry",
]
