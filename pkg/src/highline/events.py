"""Event log model: ingestion, directly-follows steps, component sets.

An event log is an immutable collection of events, each carrying a case,
an activity, a timestamp and a resource. From the log we derive *steps*
(directly-follows event pairs within one case) and the three component
sets: activities, resources and segments (activity pairs realized by at
least one step).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

from .errors import ConfigError, DataError


@dataclass(frozen=True)
class Event:
    """A single recorded process event.

    ``id`` is unique within one log (assigned from the input row number on
    ingestion) and doubles as the tie-breaker when two events of the same
    case share a timestamp.
    """

    id: int
    case: str
    activity: str
    timestamp: datetime
    resource: str

    def order_key(self) -> tuple[datetime, int]:
        """Total order of events within one case: (timestamp, id)."""
        return (self.timestamp, self.id)


class Segment(NamedTuple):
    """An activity pair realized by at least one step of the log."""

    source: str
    target: str

    @property
    def label(self) -> str:
        return f"({self.source},{self.target})"


class Step(NamedTuple):
    """A directly-follows pair of events within one case.

    ``first`` strictly precedes ``second`` in the per-case (timestamp, id)
    order with no event of that case in between. We say ``first`` triggers
    ``second``.
    """

    first: Event
    second: Event

    @property
    def segment(self) -> Segment:
        return Segment(self.first.activity, self.second.activity)

    @property
    def duration_seconds(self) -> float:
        return (self.second.timestamp - self.first.timestamp).total_seconds()


class ComponentKind(str, Enum):
    ACTIVITY = "activity"
    RESOURCE = "resource"
    SEGMENT = "segment"


@dataclass(frozen=True)
class Component:
    """A process entity a feature can measure: activity, resource or segment."""

    kind: ComponentKind
    key: str | Segment

    @staticmethod
    def activity(name: str) -> "Component":
        return Component(ComponentKind.ACTIVITY, name)

    @staticmethod
    def resource(name: str) -> "Component":
        return Component(ComponentKind.RESOURCE, name)

    @staticmethod
    def segment(source: str, target: str) -> "Component":
        return Component(ComponentKind.SEGMENT, Segment(source, target))

    @property
    def label(self) -> str:
        return self.key.label if isinstance(self.key, Segment) else self.key

    def sort_key(self) -> tuple[str, str]:
        return (self.kind.value, self.label)


@dataclass(frozen=True)
class ColumnMapping:
    """Names of the four mandatory columns in an input CSV."""

    case: str = "case"
    activity: str = "activity"
    timestamp: str = "timestamp"
    resource: str = "resource"


@dataclass(frozen=True)
class Provenance:
    source: str
    mapping: ColumnMapping | None = None
    timestamp_format: str | None = None


class EventLog:
    """Immutable, stably ordered event collection with cached derived data.

    Events iterate in ascending (timestamp, case, id) order. All derived
    structures (steps, component sets, restrictions) are computed once and
    are read-only, so a log can be shared freely across workers.
    """

    def __init__(self, events: Iterable[Event], provenance: Provenance | None = None):
        ordered = tuple(sorted(events, key=lambda e: (e.timestamp, e.case, e.id)))
        ids = set()
        for e in ordered:
            if e.id in ids:
                raise DataError(f"duplicate event id: {e.id}")
            ids.add(e.id)
            if not e.case or not e.activity or not e.resource:
                raise DataError(f"event {e.id}: empty attribute value")
        self._events = ordered
        self.provenance = provenance

    @property
    def events(self) -> tuple[Event, ...]:
        return self._events

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self._events)

    @cached_property
    def case_sequences(self) -> dict[str, tuple[Event, ...]]:
        """Per-case event sequences in (timestamp, id) order, cases sorted."""
        groups: dict[str, list[Event]] = {}
        for e in self._events:
            groups.setdefault(e.case, []).append(e)
        return {
            case: tuple(sorted(groups[case], key=Event.order_key))
            for case in sorted(groups)
        }

    @cached_property
    def steps(self) -> tuple[Step, ...]:
        return compute_steps(self)

    @cached_property
    def activities(self) -> frozenset[str]:
        return frozenset(e.activity for e in self._events)

    @cached_property
    def resources(self) -> frozenset[str]:
        return frozenset(e.resource for e in self._events)

    @cached_property
    def segments(self) -> frozenset[Segment]:
        return frozenset(s.segment for s in self.steps)

    @cached_property
    def events_by_activity(self) -> dict[str, tuple[Event, ...]]:
        return _group(self._events, lambda e: e.activity)

    @cached_property
    def events_by_resource(self) -> dict[str, tuple[Event, ...]]:
        return _group(self._events, lambda e: e.resource)

    @cached_property
    def steps_by_segment(self) -> dict[Segment, tuple[Step, ...]]:
        return _group(self.steps, lambda s: s.segment)

    @cached_property
    def steps_by_second_resource(self) -> dict[str, tuple[Step, ...]]:
        """Steps grouped by the resource of the triggered (second) event."""
        return _group(self.steps, lambda s: s.second.resource)

    @cached_property
    def incoming_step(self) -> dict[int, Step]:
        """The unique step triggering each event, keyed by the event id."""
        return {s.second.id: s for s in self.steps}


def _group(items, key):
    groups: dict = {}
    for item in items:
        groups.setdefault(key(item), []).append(item)
    return {k: tuple(v) for k, v in groups.items()}


def compute_steps(log: EventLog) -> tuple[Step, ...]:
    """All directly-follows pairs of the log.

    For a case with k events this yields exactly k-1 steps. Equal
    timestamps within a case are resolved by event id (input order), making
    the per-case order total.
    """
    steps: list[Step] = []
    for seq in log.case_sequences.values():
        steps.extend(Step(a, b) for a, b in zip(seq, seq[1:]))
    return tuple(steps)


def component_sets(log: EventLog) -> tuple[frozenset[str], frozenset[str], frozenset[Segment]]:
    """The activity, resource and segment sets of the log."""
    return (log.activities, log.resources, log.segments)


def restrict(log: EventLog, component: Component) -> tuple[Event, ...] | tuple[Step, ...]:
    """The a-events, r-events or s-steps of the log.

    Raises KeyError when the component does not occur in the log.
    """
    if component.kind is ComponentKind.ACTIVITY:
        try:
            return log.events_by_activity[component.key]
        except KeyError:
            raise KeyError(f"unknown activity: {component.key!r}") from None
    if component.kind is ComponentKind.RESOURCE:
        try:
            return log.events_by_resource[component.key]
        except KeyError:
            raise KeyError(f"unknown resource: {component.key!r}") from None
    try:
        return log.steps_by_segment[component.key]
    except KeyError:
        raise KeyError(f"unknown segment: {component.label}") from None


def parse_timestamp(text: str, timestamp_format: str | None = None) -> datetime:
    """Parse a timestamp string.

    With no format, ISO 8601 is accepted (fractional seconds optional).
    Timestamps carrying a UTC offset are normalized to naive UTC so that
    all timestamps of a log are comparable.
    """
    if timestamp_format is None:
        t = datetime.fromisoformat(text)
    else:
        t = datetime.strptime(text, timestamp_format)
    if t.tzinfo is not None:
        t = t.astimezone(timezone.utc).replace(tzinfo=None)
    return t


def format_timestamp(t: datetime, timestamp_format: str | None = None) -> str:
    return t.isoformat() if timestamp_format is None else t.strftime(timestamp_format)


def ingest_csv(
    path: str,
    mapping: ColumnMapping | None = None,
    timestamp_format: str | None = None,
) -> EventLog:
    """Read an event log from a UTF-8 CSV file with a header row.

    Event ids are assigned from the input row number (first data row is 1),
    so re-ingesting the same file always yields the same ordering, equal
    timestamps included. Attribute values are stripped of surrounding
    whitespace; a value that is empty after stripping is a row error.
    """
    mapping = mapping or ColumnMapping()
    events: list[Event] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected a header row") from None
        index: dict[str, int] = {}
        for attr, column in (
            ("case", mapping.case),
            ("activity", mapping.activity),
            ("timestamp", mapping.timestamp),
            ("resource", mapping.resource),
        ):
            if column not in header:
                raise ConfigError(f"{path}: missing column {column!r} (mapped to {attr})")
            index[attr] = header.index(column)
        row_id = 0
        for row in reader:
            row_id += 1
            line = reader.line_num
            if len(row) <= max(index.values()):
                raise DataError(f"{path}, line {line}: too few columns")
            values = {attr: row[i].strip() for attr, i in index.items()}
            for attr, value in values.items():
                if not value:
                    raise DataError(f"{path}, line {line}: empty {attr} value")
            try:
                ts = parse_timestamp(values["timestamp"], timestamp_format)
            except ValueError:
                raise DataError(
                    f"{path}, line {line}: unparseable timestamp {values['timestamp']!r}"
                ) from None
            events.append(
                Event(
                    id=row_id,
                    case=values["case"],
                    activity=values["activity"],
                    timestamp=ts,
                    resource=values["resource"],
                )
            )
    provenance = Provenance(source=path, mapping=mapping, timestamp_format=timestamp_format)
    return EventLog(events, provenance)


def write_event_csv(
    log: EventLog,
    path: str,
    mapping: ColumnMapping | None = None,
    timestamp_format: str | None = None,
) -> None:
    """Write a log back to CSV in the standard four-column layout."""
    mapping = mapping or ColumnMapping()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([mapping.case, mapping.activity, mapping.timestamp, mapping.resource])
        for e in log:
            writer.writerow(
                [e.case, e.activity, format_timestamp(e.timestamp, timestamp_format), e.resource]
            )
