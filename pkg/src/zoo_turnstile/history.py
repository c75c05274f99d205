"""Immutable event histories.

An event history is the strictly increasing sequence of millisecond
timestamps at which events of one kind occurred. Recording an event
returns a new history; the old one is never touched.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

Timestamp = int


class HistoryError(Exception):
    """Base class for history contract failures."""


class NonMonotoneTimestamp(HistoryError, ValueError):
    """A recorded timestamp is not strictly later than the previous one."""


class EmptyHistoryAccess(HistoryError, LookupError):
    """``last`` or ``but_last`` was taken on an empty history."""


def check_timestamp(t: object) -> Timestamp:
    # bool is an int subclass; reject it explicitly
    if isinstance(t, bool) or not isinstance(t, int):
        raise TypeError(f"timestamp must be an integer number of ms, got {t!r}")
    if t < 0:
        raise ValueError(f"timestamp must be non-negative, got {t}")
    return t


@dataclass(frozen=True, slots=True)
class EventHistory:
    items: tuple[Timestamp, ...] = ()

    def __post_init__(self) -> None:
        items = tuple(self.items)
        prev = -1
        for t in items:
            check_timestamp(t)
            if t <= prev:
                raise NonMonotoneTimestamp(
                    f"history not strictly increasing: {t} follows {prev}"
                )
            prev = t
        object.__setattr__(self, "items", items)

    def record(self, t: Timestamp) -> EventHistory:
        """Return this history extended with ``t``.

        Guarantees ``result.but_last == self`` and ``result.last == t``.
        """
        check_timestamp(t)
        if self.items and t <= self.items[-1]:
            raise NonMonotoneTimestamp(
                f"cannot record {t}: last recorded event is at {self.items[-1]}"
            )
        return EventHistory(self.items + (t,))

    @property
    def count(self) -> int:
        return len(self.items)

    @property
    def is_empty(self) -> bool:
        return not self.items

    @property
    def last(self) -> Timestamp:
        if not self.items:
            raise EmptyHistoryAccess("last of an empty history")
        return self.items[-1]

    @property
    def but_last(self) -> EventHistory:
        if not self.items:
            raise EmptyHistoryAccess("but_last of an empty history")
        return EventHistory(self.items[:-1])

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Timestamp]:
        return iter(self.items)

    def __repr__(self) -> str:
        return f"⟨{', '.join(map(str, self.items))}⟩"


EMPTY = EventHistory()
