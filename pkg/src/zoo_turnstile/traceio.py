"""Line-delimited JSON trace files.

One event per line, ``{"event": "coin", "t": 100}``, with an optional
final ``{"closed_at": 1000}`` line. Blank lines are ignored.
"""

from __future__ import annotations

import json
from pathlib import Path

from .checker import IllFormedTrace, Trace
from .model import EventKind, TraceEvent


class TraceFormatError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _int_field(record: dict, name: str, line: int) -> int:
    value = record.get(name)
    if isinstance(value, bool) or not isinstance(value, int):
        raise TraceFormatError(line, f"field {name!r} must be an integer, got {value!r}")
    if value < 0:
        raise TraceFormatError(line, f"field {name!r} must be non-negative, got {value}")
    return value


def parse_trace(text: str) -> Trace:
    events: list[TraceEvent] = []
    line_of_event: list[int] = []
    closed_at: int | None = None
    closed_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        if closed_at is not None:
            raise TraceFormatError(lineno, "nothing may follow the closed_at line")
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise TraceFormatError(lineno, f"invalid JSON ({exc.msg})") from None
        if not isinstance(record, dict):
            raise TraceFormatError(lineno, "each line must be a JSON object")
        if "closed_at" in record:
            if set(record) != {"closed_at"}:
                raise TraceFormatError(lineno, "the close line carries only 'closed_at'")
            closed_at = _int_field(record, "closed_at", lineno)
            closed_line = lineno
            continue
        unknown = set(record) - {"event", "t"}
        if unknown:
            raise TraceFormatError(lineno, f"unknown fields {sorted(unknown)}")
        name = record.get("event")
        try:
            kind = EventKind(name)
        except ValueError:
            allowed = "|".join(k.value for k in EventKind)
            raise TraceFormatError(lineno, f"unknown event {name!r} (expected {allowed})") from None
        events.append(TraceEvent(kind, _int_field(record, "t", lineno)))
        line_of_event.append(lineno)
    try:
        return Trace(tuple(events), closed_at)
    except IllFormedTrace as exc:
        index = exc.index if exc.index is not None else 0
        line = line_of_event[index] if index < len(line_of_event) else closed_line
        raise TraceFormatError(line, str(exc)) from None


def load_trace(path: str | Path) -> Trace:
    return parse_trace(Path(path).read_text(encoding="utf-8"))


def dump_trace(trace: Trace) -> str:
    lines = [
        json.dumps({"event": e.kind.value, "t": e.at}, separators=(", ", ": "))
        for e in trace.events
    ]
    if trace.closed_at is not None:
        lines.append(json.dumps({"closed_at": trace.closed_at}))
    return "".join(line + "\n" for line in lines)


def write_trace(trace: Trace, path: str | Path) -> None:
    Path(path).write_text(dump_trace(trace), encoding="utf-8")
