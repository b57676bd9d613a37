"""The high-level event log: build, flatten, and export.

Every high-level event becomes one log entry whose activity is the feature
name, whose case is the cascade id, and whose timestamp is the start of the
window it emerged in. Entries of one window share a timestamp, so cases are
only partially ordered; a fixed total order over activity names flattens
them into a classical log for directly-follows analysis.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Iterable, Sequence

from .errors import ConfigError, DataError
from .events import EventLog, format_timestamp, parse_timestamp
from .features import HighLevelEvent, ThresholdTable, View
from .framing import Framing
from .linkage import CascadeAssignment

HLEL_COLUMNS = (
    "hle_id",
    "case",
    "activity",
    "timestamp",
    "window",
    "view",
    "component_kind",
    "component",
    "value",
    "threshold",
)


@dataclass(frozen=True)
class HighLevelLogEntry:
    """One row of the high-level event log."""

    hle_id: int
    case: int
    activity: str
    timestamp: datetime
    window: int
    view: str
    component_kind: str
    component: str
    value: float
    threshold: float


def build_hlel(
    hles: Iterable[HighLevelEvent],
    assignment: CascadeAssignment,
    framing: Framing,
    thresholds: ThresholdTable,
) -> tuple[HighLevelLogEntry, ...]:
    """Materialize the high-level event log, one entry per high-level event.

    Entries are sorted by (case, window, activity name); ids follow that
    order.
    """
    drafts = []
    for h in hles:
        drafts.append(
            (
                assignment.ids[h],
                h.window,
                h.feature.name,
                h,
            )
        )
    drafts.sort(key=lambda d: d[:3])
    entries = []
    for hle_id, (case, window, activity, h) in enumerate(drafts, start=1):
        entries.append(
            HighLevelLogEntry(
                hle_id=hle_id,
                case=case,
                activity=activity,
                timestamp=framing.window_start(window),
                window=window,
                view=h.feature.view.value,
                component_kind=h.feature.component.kind.value,
                component=h.feature.component.label,
                value=h.value,
                threshold=thresholds.for_feature(h.feature),
            )
        )
    return tuple(entries)


class FlattenOrder:
    """A fixed total order over high-level activity names.

    Names from the configured list come first, in list order; anything else
    follows lexicographically. With no list the order is plain lexicographic.
    """

    def __init__(self, names: Sequence[str] | None = None):
        names = list(names or ())
        if len(set(names)) != len(names):
            raise ConfigError("flatten order contains duplicate names")
        self._rank = {name: i for i, name in enumerate(names)}

    @classmethod
    def from_file(cls, path: str) -> "FlattenOrder":
        with open(path, encoding="utf-8") as fh:
            names = [line.strip() for line in fh if line.strip()]
        return cls(names)

    def key(self, name: str) -> tuple[int, int | str]:
        if name in self._rank:
            return (0, self._rank[name])
        return (1, name)


def flatten(
    entries: Iterable[HighLevelLogEntry], order: FlattenOrder | None = None
) -> tuple[HighLevelLogEntry, ...]:
    """Totally order the log: by case, then window, then the fixed
    activity order within each window. Idempotent."""
    order = order or FlattenOrder()
    return tuple(
        sorted(entries, key=lambda e: (e.case, e.window, order.key(e.activity)))
    )


def export_dfg(entries: Sequence[HighLevelLogEntry]) -> str:
    """A DOT directly-follows graph of a flattened log.

    Nodes carry activity frequencies, edges count within-case adjacencies.
    Output ordering is deterministic.
    """
    node_freq: Counter = Counter(e.activity for e in entries)
    edge_freq: Counter = Counter()
    for prev, cur in zip(entries, entries[1:]):
        if prev.case == cur.case:
            edge_freq[(prev.activity, cur.activity)] += 1

    lines = ["digraph dfg {", "  rankdir=LR;"]
    for name in sorted(node_freq):
        lines.append(f'  {_quote(name)} [label={_quote(f"{name} ({node_freq[name]})")}];')
    for (src, dst) in sorted(edge_freq):
        lines.append(f"  {_quote(src)} -> {_quote(dst)} [label={_quote(str(edge_freq[(src, dst)]))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_hlel_csv(
    entries: Iterable[HighLevelLogEntry], path: str, timestamp_format: str | None = None
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HLEL_COLUMNS)
        for e in entries:
            writer.writerow(
                [
                    e.hle_id,
                    e.case,
                    e.activity,
                    format_timestamp(e.timestamp, timestamp_format),
                    e.window,
                    e.view,
                    e.component_kind,
                    e.component,
                    repr(e.value),
                    repr(e.threshold),
                ]
            )


def read_hlel_csv(path: str, timestamp_format: str | None = None) -> tuple[HighLevelLogEntry, ...]:
    entries = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(HLEL_COLUMNS):
            raise DataError(f"{path}: not a high-level event log export")
        for row in reader:
            entries.append(
                HighLevelLogEntry(
                    hle_id=int(row[0]),
                    case=int(row[1]),
                    activity=row[2],
                    timestamp=parse_timestamp(row[3], timestamp_format),
                    window=int(row[4]),
                    view=row[5],
                    component_kind=row[6],
                    component=row[7],
                    value=float(row[8]),
                    threshold=float(row[9]),
                )
            )
    return tuple(entries)


# --- summary -------------------------------------------------------------------


@dataclass(frozen=True)
class SummaryRow:
    period: int
    start: datetime
    events: int
    hles: int
    counts: tuple[int, ...]
    averages: tuple[float | None, ...]


@dataclass(frozen=True)
class SummaryTable:
    """Per-period counts and average values of the busiest high-level
    activities, next to the original event volume."""

    period_seconds: float
    activities: tuple[str, ...]
    rows: tuple[SummaryRow, ...]


def summarize(
    log: EventLog,
    entries: Sequence[HighLevelLogEntry],
    period_seconds: float,
    origin: datetime,
    activities: Sequence[str] | None = None,
    top: int = 4,
) -> SummaryTable:
    """Aggregate the original log and the high-level log per period.

    Periods are 1-based, anchored at ``origin``, one week by default in the
    command line. Activities default to the ``top`` most frequent high-level
    activities; delay averages are reported in hours, everything else in
    native units.
    """
    if period_seconds <= 0:
        raise ConfigError(f"summary period must be positive, got {period_seconds}")

    def period_of(t: datetime) -> int:
        return int((t - origin).total_seconds() // period_seconds) + 1

    if activities is None:
        freq = Counter(e.activity for e in entries)
        chosen = sorted(freq, key=lambda a: (-freq[a], a))[:top]
    else:
        chosen = list(activities)

    event_counts: Counter = Counter(period_of(e.timestamp) for e in log)
    hle_counts: Counter = Counter(period_of(e.timestamp) for e in entries)
    act_values: dict[tuple[int, str], list[float]] = {}
    for e in entries:
        if e.activity in chosen:
            scale = 3600.0 if e.view == View.DELAY.value else 1.0
            act_values.setdefault((period_of(e.timestamp), e.activity), []).append(e.value / scale)

    periods = sorted(set(event_counts) | set(hle_counts))
    rows = []
    for p in range(periods[0], periods[-1] + 1) if periods else []:
        counts = []
        averages: list[float | None] = []
        for a in chosen:
            values = act_values.get((p, a), [])
            counts.append(len(values))
            averages.append(sum(values) / len(values) if values else None)
        rows.append(
            SummaryRow(
                period=p,
                start=origin + timedelta(seconds=(p - 1) * period_seconds),
                events=event_counts.get(p, 0),
                hles=hle_counts.get(p, 0),
                counts=tuple(counts),
                averages=tuple(averages),
            )
        )
    return SummaryTable(period_seconds, tuple(chosen), tuple(rows))


def write_summary_csv(
    table: SummaryTable, path: str, timestamp_format: str | None = None
) -> None:
    header = ["period", "start", "events", "hles"]
    for a in table.activities:
        header.extend([f"count:{a}", f"avg:{a}"])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in table.rows:
            record = [row.period, format_timestamp(row.start, timestamp_format), row.events, row.hles]
            for count, avg in zip(row.counts, row.averages):
                record.append(count)
                record.append("" if avg is None else f"{avg:.6g}")
            writer.writerow(record)
